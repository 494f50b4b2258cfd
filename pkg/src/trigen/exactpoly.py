"""Exact univariate polynomials over Z/Q and over finite fields.

IntPoly holds arbitrary-precision integer coefficients (constant term first).
FieldPoly holds coefficients of a FieldCtx as integer codes; factorization follows
the usual squarefree / distinct-degree / Cantor-Zassenhaus pipeline.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ._util import lcm as int_lcm
from .gf import FieldCtx, FieldElement, make_ext


def _strip(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


class IntPoly:
    """Dense polynomial with integer coefficients, coeffs[i] is the T^i coefficient."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        self.coeffs = tuple(_strip([int(c) for c in coeffs]))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "IntPoly":
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> "IntPoly":
        out = cls([1])
        for r in roots:
            out = out * cls([-r, 1])
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other):
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == IntPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, _as_intpoly(other).coeffs
        n = max(len(a), len(b))
        return IntPoly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_intpoly(other))

    def __rsub__(self, other):
        return _as_intpoly(other) - self

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return IntPoly(c * other for c in self.coeffs)
        a, b = self.coeffs, _as_intpoly(other).coeffs
        if not a or not b:
            return IntPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "IntPoly":
        out = IntPoly([1])
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, (int, Fraction, float, complex)) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def primitive(self) -> "IntPoly":
        """Divide out the content and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.lead < 0:
            g = -g
        return IntPoly(c // g for c in self.coeffs)

    def derivative(self) -> "IntPoly":
        return IntPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def divmod_exact(self, other: "IntPoly") -> tuple["IntPoly", "IntPoly"]:
        """Division over Q; raises if the quotient is not integral."""
        q, r = divmod_q(self.coeffs, other.coeffs)
        if any(x.denominator != 1 for x in q) or any(x.denominator != 1 for x in r):
            raise ArithmeticError("quotient is not an integer polynomial")
        return IntPoly(int(x) for x in q), IntPoly(int(x) for x in r)

    def __floordiv__(self, other: "IntPoly") -> "IntPoly":
        q, r = self.divmod_exact(other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def reduce_mod(self, ctx: FieldCtx) -> "FieldPoly":
        return FieldPoly.from_ints(ctx, self.coeffs)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "IntPoly":
        return cls(int(c) for c in data)

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def __str__(self):
        return poly_str(self.coeffs)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"


def poly_str(coeffs: Sequence[int], var: str = "T") -> str:
    if not any(coeffs):
        return "0"
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if i == 0:
            body = str(a)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if a == 1 else f"{a}{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _as_intpoly(x) -> IntPoly:
    if isinstance(x, IntPoly):
        return x
    if isinstance(x, int):
        return IntPoly([x])
    raise TypeError(f"cannot use {type(x).__name__} as IntPoly")


def divmod_q(a: Sequence, b: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(x) for x in a]
    db = len(b) - 1
    lead = Fraction(b[-1])
    q = [Fraction(0)] * max(len(a) - db, 0)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] / lead
        if c:
            q[i - db] = c
            for j in range(db + 1):
                r[i - db + j] -= c * b[j]
    return _strip(q), _strip(r[:db])


def _prem(a: tuple, b: tuple) -> list[int]:
    """Pseudo-remainder of a by b (integer arithmetic)."""
    r = list(a)
    db = len(b) - 1
    lead = b[-1]
    while len(r) - 1 >= db and r:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [x * lead for x in r]
        for j in range(db + 1):
            r[shift + j] -= c * b[j]
        _strip(r)
    return r


def gcd_q(a: IntPoly, b: IntPoly) -> IntPoly:
    """Primitive generator of the gcd over Q (positive leading coefficient)."""
    a, b = a.primitive(), b.primitive()
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero():
        r = IntPoly(_prem(a.coeffs, b.coeffs))
        a, b = b, r.primitive()
    return a.primitive()


def lcm_q(polys: Sequence[IntPoly]) -> IntPoly:
    polys = list(polys)
    if not polys:
        raise ValueError("lcm of an empty list")
    out = None
    for f in polys:
        if f.is_zero():
            raise ValueError("lcm with the zero polynomial")
        f = f.primitive()
        if out is None:
            out = f
            continue
        g = gcd_q(out, f)
        out = (out * f // g).primitive() if g.degree > 0 else (out * f).primitive()
    return out


# -- polynomials over finite fields -------------------------------------------------

class FieldPoly:
    """Polynomial over a FieldCtx, coefficients stored as codes (constant term first)."""

    __slots__ = ("ctx", "c")

    def __init__(self, ctx: FieldCtx, coeffs: Iterable = ()):
        self.ctx = ctx
        codes = []
        for x in coeffs:
            if isinstance(x, FieldElement):
                if x.ctx != ctx:
                    raise ValueError("coefficient from a different field")
                codes.append(x.code)
            else:
                codes.append(int(x) % ctx.p)
        self.c = _strip(codes)

    @classmethod
    def from_codes(cls, ctx: FieldCtx, codes: list[int]) -> "FieldPoly":
        f = cls.__new__(cls)
        f.ctx = ctx
        f.c = _strip(list(codes))
        return f

    @classmethod
    def from_ints(cls, ctx: FieldCtx, ints: Iterable[int]) -> "FieldPoly":
        return cls.from_codes(ctx, [int(x) % ctx.p for x in ints])

    @classmethod
    def x(cls, ctx: FieldCtx) -> "FieldPoly":
        return cls.from_codes(ctx, [0, 1])

    @property
    def coeffs(self) -> list[FieldElement]:
        return [FieldElement(self.ctx, c) for c in self.c]

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def lead(self) -> FieldElement:
        return FieldElement(self.ctx, self.c[-1] if self.c else 0)

    def __eq__(self, other):
        return isinstance(other, FieldPoly) and self.ctx == other.ctx and self.c == other.c

    def __hash__(self):
        return hash((self.ctx, tuple(self.c)))

    def __repr__(self):
        return f"FieldPoly({self.ctx!r}, {self.c})"

    def __str__(self):
        if not self.c:
            return "0"
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            if self.c[i]:
                coef = repr(FieldElement(self.ctx, self.c[i]))
                mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
                if self.ctx.m > 1 and "+" in coef:
                    coef = f"({coef})"
                if coef == "1" and mono:
                    coef = ""
                terms.append(coef + ("*" if coef and mono else "") + mono)
        return " + ".join(terms)

    # arithmetic
    def __add__(self, other: "FieldPoly") -> "FieldPoly":
        ctx = self.ctx
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = ctx.add(out[i], y)
        return FieldPoly.from_codes(ctx, out)

    def __neg__(self):
        return FieldPoly.from_codes(self.ctx, [self.ctx.neg(x) for x in self.c])

    def __sub__(self, other: "FieldPoly") -> "FieldPoly":
        return self + (-other)

    def __mul__(self, other) -> "FieldPoly":
        ctx = self.ctx
        if isinstance(other, FieldElement):
            k = other.code
            return FieldPoly.from_codes(ctx, [ctx.mul(x, k) for x in self.c])
        return FieldPoly.from_codes(ctx, _mul_codes(ctx, self.c, other.c))

    def scale(self, k: int) -> "FieldPoly":
        ctx = self.ctx
        return FieldPoly.from_codes(ctx, [ctx.mul(x, k) for x in self.c])

    def __divmod__(self, other: "FieldPoly"):
        q, r = _divmod_codes(self.ctx, self.c, other.c)
        return FieldPoly.from_codes(self.ctx, q), FieldPoly.from_codes(self.ctx, r)

    def __mod__(self, other: "FieldPoly") -> "FieldPoly":
        return FieldPoly.from_codes(self.ctx, _divmod_codes(self.ctx, self.c, other.c)[1])

    def __floordiv__(self, other: "FieldPoly") -> "FieldPoly":
        return FieldPoly.from_codes(self.ctx, _divmod_codes(self.ctx, self.c, other.c)[0])

    def __pow__(self, e: int) -> "FieldPoly":
        out = FieldPoly.from_codes(self.ctx, [1])
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def make_monic(self) -> "FieldPoly":
        if not self.c:
            return self
        inv = self.ctx.inv(self.c[-1])
        return self.scale(inv)

    def derivative(self) -> "FieldPoly":
        ctx = self.ctx
        return FieldPoly.from_codes(ctx, [ctx.scale(i, x) for i, x in enumerate(self.c)][1:])

    def __call__(self, x: FieldElement) -> FieldElement:
        ctx = self.ctx
        acc = 0
        for c in reversed(self.c):
            acc = ctx.add(ctx.mul(acc, x.code), c)
        return FieldElement(ctx, acc)

    def eval_code(self, x: int) -> int:
        ctx = self.ctx
        acc = 0
        for c in reversed(self.c):
            acc = ctx.add(ctx.mul(acc, x), c)
        return acc

    def to_json(self) -> list:
        return [FieldElement(self.ctx, c).to_json()["rep"] for c in self.c]


def _mul_codes(ctx: FieldCtx, a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    if ctx.m == 1:
        p = ctx.p
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return [v % p for v in out]
    add, mul = ctx.add, ctx.mul
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return out


def _divmod_codes(ctx: FieldCtx, a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    if len(a) <= db:
        return [], list(a)
    r = list(a)
    q = [0] * (len(a) - db)
    if ctx.m == 1:
        p = ctx.p
        inv = pow(b[-1], p - 2, p)
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i] * inv % p
            if c:
                q[i - db] = c
                base = i - db
                for j in range(db):
                    r[base + j] = (r[base + j] - c * b[j]) % p
            r[i] = 0
        return q, _strip(r[:db])
    inv = ctx.inv(b[-1])
    sub, mul = ctx.sub, ctx.mul
    for i in range(len(r) - 1, db - 1, -1):
        c = mul(r[i], inv)
        if c:
            q[i - db] = c
            base = i - db
            for j in range(db):
                if b[j]:
                    r[base + j] = sub(r[base + j], mul(c, b[j]))
        r[i] = 0
    return q, _strip(r[:db])


def _mulmod(ctx, a, b, f):
    return _divmod_codes(ctx, _mul_codes(ctx, a, b), f)[1]


def _powmod(ctx, base: list[int], e: int, f: list[int]) -> list[int]:
    result = [1]
    base = _divmod_codes(ctx, base, f)[1]
    while e:
        if e & 1:
            result = _mulmod(ctx, result, base, f)
        e >>= 1
        if e:
            base = _mulmod(ctx, base, base, f)
    return result


def _monic(ctx, a: list[int]) -> list[int]:
    if not a:
        return a
    inv = ctx.inv(a[-1])
    return [ctx.mul(x, inv) for x in a]


def _gcd_codes(ctx, a: list[int], b: list[int]) -> list[int]:
    a, b = _strip(list(a)), _strip(list(b))
    while b:
        a, b = b, _divmod_codes(ctx, a, b)[1]
    return _monic(ctx, a)


def _sub_codes(ctx, a, b):
    n = max(len(a), len(b))
    return _strip([ctx.sub(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)])


def gcd_f(a: FieldPoly, b: FieldPoly) -> FieldPoly:
    """Monic gcd over a finite field."""
    return FieldPoly.from_codes(a.ctx, _gcd_codes(a.ctx, a.c, b.c))


@dataclass
class Factorization:
    unit: FieldElement
    factors: list  # of (FieldPoly, multiplicity)

    def expand(self) -> FieldPoly:
        ctx = self.unit.ctx
        out = FieldPoly.from_codes(ctx, [self.unit.code])
        for f, e in self.factors:
            out = out * (f**e)
        return out

    def degrees(self) -> list[int]:
        return [f.degree for f, _ in self.factors]

    def __iter__(self):
        return iter(self.factors)


def _pth_root(ctx: FieldCtx, a: list[int]) -> list[int]:
    """Inverse Frobenius on coefficients of a polynomial in T^p."""
    p = ctx.p
    k = ctx.m - 1
    return [ctx.frob(a[i], k) for i in range(0, len(a), p)]


def squarefree_decomposition(f: FieldPoly) -> list[tuple[FieldPoly, int]]:
    """Monic squarefree factors with multiplicities; f assumed monic and nonconstant."""
    ctx = f.ctx
    p = ctx.p
    out: dict[int, list[int]] = {}

    def merge(poly, mult):
        if len(poly) <= 1:
            return
        prev = out.get(mult)
        out[mult] = poly if prev is None else _mul_codes(ctx, prev, poly)

    def rec(a: list[int], scale: int):
        da = FieldPoly.from_codes(ctx, a).derivative().c
        if not da:
            rec(_pth_root(ctx, a), scale * p)
            return
        c = _gcd_codes(ctx, a, da)
        w = _divmod_codes(ctx, a, c)[0]
        i = 1
        while len(w) > 1:
            y = _gcd_codes(ctx, w, c)
            z = _divmod_codes(ctx, w, y)[0]
            merge(_monic(ctx, z), i * scale)
            i += 1
            w = y
            c = _divmod_codes(ctx, c, y)[0]
        if len(c) > 1:
            rec(_pth_root(ctx, c), scale * p)

    rec(list(f.c), 1)
    return sorted(((FieldPoly.from_codes(ctx, v), k) for k, v in out.items()), key=lambda t: t[1])


def distinct_degree(f: FieldPoly) -> list[tuple[FieldPoly, int]]:
    """For squarefree monic f: list of (product of all degree-d irreducible factors, d)."""
    ctx = f.ctx
    q = ctx.q
    out = []
    rest = list(f.c)
    x = [0, 1]
    h = x
    d = 0
    while len(rest) - 1 >= 2 * (d + 1):
        d += 1
        h = _powmod(ctx, h, q, rest)
        g = _gcd_codes(ctx, rest, _sub_codes(ctx, h, x))
        if len(g) > 1:
            out.append((FieldPoly.from_codes(ctx, g), d))
            rest = _divmod_codes(ctx, rest, g)[0]
            h = _divmod_codes(ctx, h, rest)[1]
    if len(rest) > 1:
        out.append((FieldPoly.from_codes(ctx, _monic(ctx, rest)), len(rest) - 1))
    return out


def equal_degree(f: FieldPoly, d: int, rng: random.Random) -> list[FieldPoly]:
    """Split a monic squarefree product of degree-d irreducibles (Cantor-Zassenhaus)."""
    ctx = f.ctx
    n = f.degree
    if n == d:
        return [f]
    if n < d or n % d:
        raise ValueError("degree mismatch in equal-degree splitting")
    q = ctx.q
    todo = [f.c]
    done = []
    while todo:
        g = todo.pop()
        if len(g) - 1 == d:
            done.append(FieldPoly.from_codes(ctx, g))
            continue
        while True:
            a = _strip([rng.randrange(q) for _ in range(len(g) - 1)])
            if len(a) < 2:
                continue
            if ctx.p == 2:
                # absolute trace to F_2 of the residue: a + a^2 + ... + a^(2^(m d - 1))
                t = a
                acc = a
                for _ in range(ctx.m * d - 1):
                    t = _mulmod(ctx, t, t, g)
                    acc = _sub_codes(ctx, acc, [ctx.neg(x) for x in t])
                b = acc
            else:
                b = _sub_codes(ctx, _powmod(ctx, a, (q**d - 1) // 2, g), [1])
            h = _gcd_codes(ctx, g, b)
            if 1 < len(h) < len(g):
                todo.append(h)
                todo.append(_divmod_codes(ctx, g, h)[0])
                break
    return sorted(done, key=lambda p: p.c)


def factor(f: FieldPoly, seed: int = 0) -> Factorization:
    """Complete factorization into monic irreducibles, deterministic per seed."""
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    ctx = f.ctx
    unit = f.lead()
    g = f.make_monic()
    if g.degree == 0:
        return Factorization(unit, [])
    rng = random.Random(f"factor:{seed}")
    factors: list[tuple[FieldPoly, int]] = []
    for sqf, mult in squarefree_decomposition(g):
        for part, d in distinct_degree(sqf):
            for irr in equal_degree(part, d, rng):
                factors.append((irr, mult))
    merged: dict[tuple, int] = {}
    for poly, k in factors:
        key = tuple(poly.c)
        merged[key] = merged.get(key, 0) + k
    out = [(FieldPoly.from_codes(ctx, list(k)), v) for k, v in merged.items()]
    out.sort(key=lambda t: (t[0].degree, t[0].c))
    return Factorization(unit, out)


def is_irreducible(f: FieldPoly) -> bool:
    fac = factor(f)
    return len(fac.factors) == 1 and fac.factors[0][1] == 1


def roots_over(f: FieldPoly, seed: int = 0) -> list[FieldElement]:
    """Roots of f in its own coefficient field, repeated by multiplicity, sorted by code."""
    if f.is_zero():
        raise ValueError("the zero polynomial has every element as a root")
    ctx = f.ctx
    g = f.make_monic()
    if g.degree < 1:
        return []
    rng = random.Random(f"roots:{seed}")
    out = []
    for sqf, mult in squarefree_decomposition(g):
        # only the linear part matters: gcd with X^q - X
        h = _powmod(ctx, [0, 1], ctx.q, sqf.c)
        lin = _gcd_codes(ctx, sqf.c, _sub_codes(ctx, h, [0, 1]))
        if len(lin) < 2:
            continue
        for fac in equal_degree(FieldPoly.from_codes(ctx, lin), 1, rng):
            out.extend([FieldElement(ctx, ctx.neg(fac.c[0]))] * mult)
    out.sort(key=lambda x: x.code)
    return out


def lift(f: FieldPoly, target: FieldCtx, seed: int = 0) -> FieldPoly:
    """Map the coefficients of f into a larger field."""
    from .gf import embed
    if f.ctx == target:
        return f
    return FieldPoly.from_codes(target, [embed(FieldElement(f.ctx, c), target, seed).code for c in f.c])


def roots_in_ext(f: FieldPoly, m: int, seed: int = 0, target: FieldCtx | None = None) -> list[FieldElement]:
    """Roots of f (over F_p) in F_{p^m}, with multiplicity.

    Factors f over its own field first and only searches factors whose degree divides
    the relative extension degree.
    """
    if f.is_zero():
        raise ValueError("the zero polynomial has every element as a root")
    if m < 1:
        raise ValueError("extension degree must be positive")
    base = f.ctx
    if target is None:
        target = make_ext(base.p, base.m * m, seed) if base.m * m > 1 else base
    rel = target.m // base.m
    out = []
    for irr, mult in factor(f, seed).factors:
        if rel % irr.degree:
            continue
        out.extend(r for r in roots_over(lift(irr, target, seed), seed) for _ in range(mult))
    out.sort(key=lambda x: x.code)
    return out
