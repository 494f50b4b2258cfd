"""Cyclotomic constraint polynomials.

For an element g of Sp_4 of order dividing c, chi_3(g) is a value
z^i + z^-i + z^j + z^-j and chi_2(g) is z^(i+j) + z^(i-j) + z^(j-i) + z^(-i-j) + 2 for a
c-th root of unity z.  theta(c) and delta(c) are the products of the distinct minimal
polynomials of these values, computed exactly in Z[zeta_c].
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

from .exactpoly import IntPoly
from .gf import FieldElement

DEFAULT_MAX_C = 120


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> IntPoly:
    """Phi_n by dividing T^n - 1 by Phi_d for the proper divisors d of n."""
    if n < 1:
        raise ValueError("n must be positive")
    f = IntPoly([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            f = f // cyclotomic_poly(d)
    return f


def _reduce(coeffs: list[int], modulus: tuple[int, ...]) -> tuple[int, ...]:
    """Reduce an integer coefficient list modulo a monic integer polynomial."""
    r = list(coeffs)
    dm = len(modulus) - 1
    for i in range(len(r) - 1, dm - 1, -1):
        c = r[i]
        if c:
            base = i - dm
            for j in range(dm):
                r[base + j] -= c * modulus[j]
            r[i] = 0
    r = r[:dm] if len(r) > dm else r
    while r and r[-1] == 0:
        r.pop()
    return tuple(r)


class CycloElt:
    """Element of Z[zeta_c] stored as a residue modulo Phi_c."""

    __slots__ = ("c", "rep")

    def __init__(self, c: int, coeffs):
        self.c = c
        mod = cyclotomic_poly(c).coeffs
        self.rep = _reduce(list(coeffs), mod)

    @classmethod
    def integer(cls, c: int, n: int) -> "CycloElt":
        return cls(c, [n])

    @classmethod
    def zeta_power(cls, c: int, k: int) -> "CycloElt":
        k %= c
        return cls(c, [0] * k + [1])

    @classmethod
    def sum_of_powers(cls, c: int, exps, const: int = 0) -> "CycloElt":
        coeffs = [0] * c
        coeffs[0] += const
        for k in exps:
            coeffs[k % c] += 1
        return cls(c, coeffs)

    def __add__(self, other: "CycloElt") -> "CycloElt":
        a, b = self.rep, other.rep
        n = max(len(a), len(b))
        return CycloElt(self.c, [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    def __neg__(self):
        return CycloElt(self.c, [-x for x in self.rep])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "CycloElt") -> "CycloElt":
        a, b = self.rep, other.rep
        if not a or not b:
            return CycloElt(self.c, [])
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return CycloElt(self.c, out)

    def __eq__(self, other):
        return isinstance(other, CycloElt) and self.c == other.c and self.rep == other.rep

    def __hash__(self):
        return hash((self.c, self.rep))

    def galois(self, k: int) -> "CycloElt":
        """Image under zeta -> zeta^k (k coprime to c)."""
        coeffs = [0] * self.c
        for i, x in enumerate(self.rep):
            coeffs[i * k % self.c] += x
        return CycloElt(self.c, coeffs)

    def is_rational(self) -> bool:
        return len(self.rep) <= 1

    def as_int(self) -> int:
        if not self.is_rational():
            raise ValueError("element is not a rational integer")
        return self.rep[0] if self.rep else 0

    def to_complex(self) -> complex:
        z = cmath.exp(2j * math.pi / self.c)
        return sum(x * z**i for i, x in enumerate(self.rep))

    def __repr__(self):
        return f"CycloElt(c={self.c}, rep={list(self.rep)})"


def conjugates(alpha: CycloElt) -> list[CycloElt]:
    """Distinct Galois conjugates of alpha, in order of first appearance."""
    seen = {}
    for k in range(1, max(alpha.c, 2)):
        if math.gcd(k, alpha.c) == 1:
            beta = alpha.galois(k)
            seen.setdefault(beta, None)
    if not seen:
        seen[alpha] = None
    return list(seen)


def min_poly(alpha: CycloElt) -> IntPoly:
    """Monic minimal polynomial over Q, as the product over distinct conjugates."""
    c = alpha.c
    conj = conjugates(alpha)
    # polynomial in T with CycloElt coefficients, constant term first
    poly = [CycloElt.integer(c, 1)]
    for beta in conj:
        nb = -beta
        nxt = [CycloElt.integer(c, 0) for _ in range(len(poly) + 1)]
        for i, a in enumerate(poly):
            nxt[i + 1] = nxt[i + 1] + a
            nxt[i] = nxt[i] + a * nb
        poly = nxt
    coeffs = []
    for a in poly:
        if not a.is_rational():
            raise ArithmeticError(f"non-integral coefficient in min_poly of {alpha}")
        coeffs.append(a.as_int())
    result = IntPoly(coeffs)
    _shadow_check(result, [b.to_complex() for b in conj])
    return result


def _shadow_check(poly: IntPoly, roots: list[complex]) -> None:
    """Compare exact coefficients against a floating-point expansion of the roots."""
    approx = [1 + 0j]
    for r in roots:
        nxt = [0j] * (len(approx) + 1)
        for i, a in enumerate(approx):
            nxt[i + 1] += a
            nxt[i] -= a * r
        approx = nxt
    for exact, f in zip(poly.coeffs, approx):
        tol = 1e-6 * max(1.0, abs(exact))
        if abs(exact - f.real) > tol or abs(f.imag) > tol:
            raise ArithmeticError("floating-point shadow disagrees with exact min_poly")


def symmetry_reps(c: int):
    """Representatives of (i, j) in (Z/c)^2 under sign changes and swapping."""
    for i in range(c // 2 + 1):
        for j in range(i, c // 2 + 1):
            yield i, j


def theta_value(c: int, i: int, j: int) -> CycloElt:
    return CycloElt.sum_of_powers(c, [i, -i, j, -j])


def delta_value(c: int, i: int, j: int) -> CycloElt:
    return CycloElt.sum_of_powers(c, [i + j, i - j, j - i, -i - j], const=2)


def _product_of_minpolys(c: int, values) -> IntPoly:
    seen: set = set()
    factors: dict[tuple, IntPoly] = {}
    for alpha in values:
        if alpha in seen:
            continue
        conj = conjugates(alpha)
        seen.update(conj)
        f = min_poly(alpha)
        factors[f.coeffs] = f
    out = IntPoly([1])
    for key in sorted(factors):
        out = out * factors[key]
    return out


def _check_cap(c: int, max_c: int) -> None:
    if c < 1:
        raise ValueError("c must be positive")
    if c > max_c:
        raise ValueError(f"c = {c} exceeds the cap {max_c}")


@lru_cache(maxsize=None)
def _theta(c: int) -> IntPoly:
    return _product_of_minpolys(c, (theta_value(c, i, j) for i, j in symmetry_reps(c)))


@lru_cache(maxsize=None)
def _delta(c: int) -> IntPoly:
    return _product_of_minpolys(c, (delta_value(c, i, j) for i, j in symmetry_reps(c)))


def theta(c: int, max_c: int = DEFAULT_MAX_C) -> IntPoly:
    """lcm of the minimal polynomials of z^i + z^-i + z^j + z^-j over all (i, j).

    The minimal polynomials are monic irreducible, so the lcm is the product of the
    distinct ones.
    """
    _check_cap(c, max_c)
    return _theta(c)


def delta(c: int, max_c: int = DEFAULT_MAX_C) -> IntPoly:
    """lcm of the minimal polynomials of z^(i+j) + z^(i-j) + z^(j-i) + z^(-i-j) + 2."""
    _check_cap(c, max_c)
    return _delta(c)


def eval_intpoly(f: IntPoly, x: FieldElement) -> FieldElement:
    ctx = x.ctx
    acc = 0
    for coef in reversed(f.coeffs):
        acc = ctx.add(ctx.mul(acc, x.code), coef % ctx.p)
    return FieldElement(ctx, acc)


def annihilation_check(g, c: int) -> tuple[bool, bool]:
    """(theta_c(chi_3(g)) == 0, delta_c(chi_2(g)) == 0) for g with g^c = 1."""
    from .matsp import charpoly
    if not (g**c).is_identity():
        raise ValueError("g^c is not the identity")
    cp = charpoly(g)
    return (eval_intpoly(theta(c), cp.chi3).is_zero(), eval_intpoly(delta(c), cp.chi2).is_zero())


__all__ = [
    "CycloElt", "cyclotomic_poly", "min_poly", "theta", "delta", "annihilation_check",
    "symmetry_reps", "theta_value", "delta_value", "conjugates", "eval_intpoly",
]
