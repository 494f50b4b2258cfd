"""Finiteness certificate for (3,3,c)-generation of Sp_4(p^r).

If g1, g2 of order 3 generate Sp_4(F) with (g1 g2)^c = 1, the character field F is
generated by x = tr(g1 g2), y = chi_2(g1 g2), z = tr(g1 g2^-1), which satisfy
theta_c(x) = delta_c(y) = rho(x, y, z) = 0.  Enumerating the points of this
zero-dimensional variety over extensions of F_p bounds every possible r.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ._util import is_prime, lcm
from .cyclo import theta, delta
from .exactpoly import FieldPoly, IntPoly, factor, lift, roots_over
from .gf import FieldCtx, FieldElement, embed, generated_subfield_degree, make_ext, prime_field
from .matsp import ResourceError

MAX_C = 60
MAX_DEGREE = 48


def rho_poly(x: FieldElement, y: FieldElement) -> FieldPoly:
    """rho(x, y, Z) = (Z + x + 1)(Z^2 + (2x - 10)Z + x^2 - 9y + 8x + 7) as a cubic in Z."""
    ctx = x.ctx
    lin = FieldPoly(ctx, [x + 1, ctx.one()])
    quad = FieldPoly(ctx, [x * x - y * 9 + x * 8 + 7, x * 2 - 10, ctx.one()])
    return lin * quad


def rho_value(x: FieldElement, y: FieldElement, z: FieldElement) -> FieldElement:
    return (z + x + 1) * (z * z + (x * 2 - 10) * z + x * x - y * 9 + x * 8 + 7)


def _eval(f: IntPoly, x: FieldElement) -> FieldElement:
    acc = x.ctx.zero()
    for coef in reversed(f.coeffs):
        acc = acc * x + coef
    return acc


def minpoly_over_prime(x: FieldElement) -> tuple[int, ...]:
    """Coefficients (constant first) of the minimal polynomial of x over F_p."""
    ctx = x.ctx
    conj = [x]
    while True:
        nxt = conj[-1].frobenius()
        if nxt == x:
            break
        conj.append(nxt)
    poly = FieldPoly(ctx, [1])
    for r in conj:
        poly = poly * FieldPoly(ctx, [-r, ctx.one()])
    codes = poly.c
    if any(c >= ctx.p for c in codes):
        raise AssertionError("minimal polynomial not over the prime field")  # pragma: no cover
    return tuple(codes)


@dataclass(frozen=True)
class Point:
    x: FieldElement
    y: FieldElement
    z: FieldElement
    r: int

    def key(self):
        return (self.x.ctx.p, self.x.ctx.modulus, self.x.code, self.y.code, self.z.code)

    def to_json(self) -> dict:
        return {"x": self.x.to_json(), "y": self.y.to_json(), "z": self.z.to_json(), "r": self.r}


@dataclass
class Certificate:
    p: int
    c: int
    points: list = field(default_factory=list)
    candidate_rs: list = field(default_factory=list)
    max_r: int = 0
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"p": self.p, "c": self.c, "candidate_rs": list(self.candidate_rs),
                "max_r": self.max_r, "points": [pt.to_json() for pt in self.points]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def verify(self) -> bool:
        """Re-evaluate the three defining equations and the degree at every point."""
        th, de = theta(self.c, MAX_C), delta(self.c, MAX_C)
        for pt in self.points:
            if not (_eval(th, pt.x).is_zero() and _eval(de, pt.y).is_zero()
                    and rho_value(pt.x, pt.y, pt.z).is_zero()):
                return False
            if generated_subfield_degree([pt.x, pt.y, pt.z]) != pt.r:
                return False
        rs = sorted({pt.r for pt in self.points})
        return rs == list(self.candidate_rs) and self.max_r == (rs[-1] if rs else 0)


def _reduce(f: IntPoly, ctx: FieldCtx) -> FieldPoly:
    return FieldPoly.from_ints(ctx, f.coeffs)


def _z_points(x: FieldElement, y: FieldElement, max_degree: int, seed: int):
    """All roots z of rho(x, y, Z), each in the smallest extension of x's field holding it."""
    F = x.ctx
    for irr, _ in factor(rho_poly(x, y), seed).factors:
        d = irr.degree
        if d == 1:
            yield x, y, FieldElement(F, F.neg(irr.c[0]))
            continue
        if F.m * d > max_degree:
            raise ResourceError(f"field degree {F.m * d} exceeds the cap {max_degree}")
        E = make_ext(F.p, F.m * d, seed)
        xe, ye = embed(x, E, seed), embed(y, E, seed)
        for z in roots_over(lift(irr, E, seed), seed):
            yield xe, ye, z


def build_certificate(p: int, c: int, seed: int = 0, max_c: int = MAX_C,
                      max_degree: int = MAX_DEGREE) -> Certificate:
    """Enumerate the points of V(theta_c(X), delta_c(Y), rho(X,Y,Z)) over extensions of F_p.

    Points are listed up to the Frobenius action: one root x per irreducible factor of
    theta_c mod p, and every root y of each factor of delta_c in the compositum.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if c < 1 or c > max_c:
        raise ValueError(f"c must lie in 1..{max_c}")
    Fp = prime_field(p)
    fx = factor(_reduce(theta(c, max_c), Fp), seed)
    fy = factor(_reduce(delta(c, max_c), Fp), seed)
    cert = Certificate(p, c)
    seen = set()
    for gx, _ in fx.factors:
        for gy, _ in fy.factors:
            L = lcm(gx.degree, gy.degree)
            if L > max_degree:
                raise ResourceError(f"compositum degree {L} exceeds the cap {max_degree}")
            F = make_ext(p, L, seed) if L > 1 else Fp
            x = roots_over(lift(gx, F, seed), seed)[0]
            ys = sorted(set(roots_over(lift(gy, F, seed), seed)), key=lambda e: e.code)
            for y in ys:
                for xe, ye, z in _z_points(x, y, max_degree, seed):
                    pt = Point(xe, ye, z, generated_subfield_degree([xe, ye, z]))
                    if pt.key() not in seen:
                        seen.add(pt.key())
                        cert.points.append(pt)
    cert.candidate_rs = sorted({pt.r for pt in cert.points})
    cert.max_r = cert.candidate_rs[-1] if cert.candidate_rs else 0
    return cert


def certified_bound(cert: Certificate) -> int:
    """No r larger than this admits a (3,3,c)-generation of Sp_4(p^r)."""
    return cert.max_r


def psp_bound(p: int, c: int, seed: int = 0) -> int:
    """Bound for PSp_4(p^r): a (3,3,c) quotient lifts to a (3,3,2c) pair in Sp_4(p^r)."""
    if p == 2:
        raise ValueError("p = 2 is excluded: PSp_4(2^r) is isomorphic to Sp_4(2^r), "
                         "use certified_bound(build_certificate(2, c)) instead")
    return certified_bound(build_certificate(p, 2 * c, seed))


def witness_matches(cert: Certificate, x: FieldElement, y: FieldElement, z: FieldElement) -> bool:
    """True when (x, y, z) is Frobenius-conjugate to a certificate point of the same degree.

    Points are compared through the minimal polynomials of x, y and z over F_p together
    with the degree of the field they generate.
    """
    r = generated_subfield_degree([x, y, z])
    key = (minpoly_over_prime(x), minpoly_over_prime(y), minpoly_over_prime(z))
    for pt in cert.points:
        if pt.r != r:
            continue
        if (minpoly_over_prime(pt.x), minpoly_over_prime(pt.y), minpoly_over_prime(pt.z)) == key:
            return True
    return False
