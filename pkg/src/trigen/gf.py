"""Finite fields F_p and F_{p^m}.

Elements are stored as integer codes: the residue c_0 + c_1 T + ... + c_{m-1} T^{m-1}
modulo the field modulus is encoded as sum(c_i * p**i).  For p = 2 this is the usual
bit-vector encoding, so addition is XOR.  Small fields (q <= TABLE_LIMIT) get log/exp
tables on first use; larger fields fall back to digit arithmetic.
"""

from __future__ import annotations

import json
import random
from typing import Iterable, Sequence

from ._util import is_prime, lcm, prime_factors

TABLE_LIMIT = 1 << 16


# -- polynomial helpers over F_p on coefficient lists (low degree first) --------------
# Kept local so that building a field never depends on the general polynomial module.

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], f: Sequence[int], p: int) -> list[int]:
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
    return _trim(a[:df] if len(a) > df else a)


def _pmulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod([c % p for c in out], f, p)


def _ppowmod(base: Sequence[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(list(base), f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        e >>= 1
        if e:
            base = _pmulmod(base, base, f, p)
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def is_irreducible_modp(f: Sequence[int], p: int) -> bool:
    """Rabin's irreducibility test for a monic polynomial over F_p."""
    f = list(f)
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    x = [0, 1]
    if _psub(_ppowmod(x, p**m, f, p), x, p):
        return False
    for r in prime_factors(m):
        h = _psub(_ppowmod(x, p ** (m // r), f, p), x, p)
        if len(_pgcd(f, h, p)) != 1:
            return False
    return True


class FieldError(ValueError):
    pass


class FieldCtx:
    """The field F_p[T]/(modulus).  Immutable; equal (p, modulus) means equal fields."""

    def __init__(self, p: int, modulus: Sequence[int] | None = None, check: bool = True):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        if modulus is None or len(modulus) <= 2:
            # a linear modulus gives the prime field
            self.m = 1
            self.modulus: tuple[int, ...] | None = None
        else:
            mod = tuple(int(c) % p for c in modulus)
            if mod[-1] != 1:
                raise FieldError("modulus must be monic")
            if check and not is_irreducible_modp(mod, p):
                raise FieldError(f"modulus {mod} is reducible over F_{p}")
            self.m = len(mod) - 1
            self.modulus = mod
        self.q = p**self.m
        self._tables = None
        self._gen: int | None = None
        # reduction rule T^m = -(lower terms), as codes for the digit path
        if self.m > 1:
            self._red = [(-c) % p for c in self.modulus[:-1]]

    # -- identity ---------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self.p == other.p and self.modulus == other.modulus

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m}, modulus={list(self.modulus)})"

    # -- code <-> digits ----------------------------------------------------------
    def to_digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.m):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def from_digits(self, digits: Sequence[int]) -> int:
        p = self.p
        a = 0
        for d in reversed(digits):
            a = a * p + (d % p)
        return a

    # -- raw arithmetic on codes ---------------------------------------------------
    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.m == 1:
            s = a + b
            return s - p if s >= p else s
        if p == 2:
            return a ^ b
        da, db = self.to_digits(a), self.to_digits(b)
        return self.from_digits([(x + y) % p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        p = self.p
        if self.m == 1:
            return (p - a) % p
        if p == 2:
            return a
        return self.from_digits([(-x) % p for x in self.to_digits(a)])

    def sub(self, a: int, b: int) -> int:
        p = self.p
        if self.m == 1:
            s = a - b
            return s + p if s < 0 else s
        if p == 2:
            return a ^ b
        da, db = self.to_digits(a), self.to_digits(b)
        return self.from_digits([(x - y) % p for x, y in zip(da, db)])

    def scale(self, k: int, a: int) -> int:
        """Multiply by the prime-field integer k."""
        k %= self.p
        if self.m == 1:
            return k * a % self.p
        if k == 0:
            return 0
        if k == 1:
            return a
        return self.from_digits([k * x % self.p for x in self.to_digits(a)])

    def _slow_mul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        if p == 2:
            # carry-less multiply then reduce with the modulus bit pattern
            r = 0
            while b:
                if b & 1:
                    r ^= a
                a <<= 1
                b >>= 1
            modbits = self.from_digits(self.modulus[:-1]) | (1 << m)
            for i in range(r.bit_length() - 1, m - 1, -1):
                if r >> i & 1:
                    r ^= modbits << (i - m)
            return r
        da, db = self.to_digits(a), self.to_digits(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        red = self._red
        for i in range(2 * m - 2, m - 1, -1):
            c = prod[i] % p
            if c:
                base = i - m
                for j in range(m):
                    prod[base + j] += c * red[j]
        return self.from_digits(prod[:m])

    def _build_tables(self):
        q = self.q
        g = self._find_generator()
        exp = [0] * (2 * q)
        log = [0] * q
        x = 1
        for k in range(q - 1):
            exp[k] = x
            log[x] = k
            x = self._slow_mul(x, g) if self.m > 1 else x * g % self.p
        for k in range(q - 1, 2 * q):
            exp[k] = exp[k - (q - 1)]
        self._tables = (exp, log)

    def _find_generator(self) -> int:
        if self._gen is not None:
            return self._gen
        if self.q == 2:
            self._gen = 1
            return 1
        order = self.q - 1
        checks = [order // r for r in prime_factors(order)]
        for cand in range(2 if self.m == 1 else self.p, self.q):
            if all(self._pow_slow(cand, e) != 1 for e in checks):
                self._gen = cand
                return cand
        raise FieldError("no multiplicative generator found")  # pragma: no cover

    def _pow_slow(self, a: int, e: int) -> int:
        if self.m == 1:
            return pow(a, e, self.p)
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            e >>= 1
            if e:
                a = self._slow_mul(a, a)
        return r

    @property
    def tables(self):
        """(exp, log) lists for small fields, or None."""
        if self._tables is None and self.q <= TABLE_LIMIT and self.m > 1:
            self._build_tables()
        return self._tables

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if not a or not b:
            return 0
        t = self.tables
        if t is not None:
            exp, log = t
            return exp[log[a] + log[b]]
        return self._slow_mul(a, b)

    def pow(self, a: int, e: int) -> int:
        if self.m == 1:
            if e < 0:
                if a == 0:
                    raise ZeroDivisionError("zero has no inverse")
                e %= self.p - 1
            return pow(a, e, self.p)
        if e < 0:
            if a == 0:
                raise ZeroDivisionError("zero has no inverse")
            e %= self.q - 1
        if a == 0:
            return 1 if e == 0 else 0
        t = self.tables
        if t is not None:
            exp, log = t
            return exp[log[a] * e % (self.q - 1)]
        return self._pow_slow(a, e)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        t = self.tables
        if t is not None:
            exp, log = t
            return exp[(self.q - 1 - log[a]) % (self.q - 1)]
        return self._pow_slow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frob(self, a: int, k: int = 1) -> int:
        """a -> a^(p^k)."""
        k %= self.m
        if k == 0 or self.m == 1:
            return a
        return self.pow(a, self.p**k)

    def from_int(self, n: int) -> int:
        return int(n) % self.p

    # -- element-level API -------------------------------------------------------
    def __call__(self, n: int) -> "FieldElement":
        """Image of the integer n in the prime subfield."""
        return FieldElement(self, int(n) % self.p)

    def elem(self, code: int) -> "FieldElement":
        if not 0 <= code < self.q:
            raise FieldError(f"code {code} out of range for {self}")
        return FieldElement(self, code)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def gen(self) -> "FieldElement":
        """The residue class of T (a field generator over F_p; for m = 1 a primitive root)."""
        if self.m == 1:
            return FieldElement(self, self._find_generator())
        return FieldElement(self, self.p)

    def primitive_element(self) -> "FieldElement":
        """Fixed generator of the multiplicative group (smallest code that works)."""
        return FieldElement(self, self._find_generator())

    def elements(self) -> Iterable["FieldElement"]:
        for c in range(self.q):
            yield FieldElement(self, c)

    def random(self, rng: random.Random, nonzero: bool = False) -> "FieldElement":
        lo = 1 if nonzero else 0
        return FieldElement(self, rng.randrange(lo, self.q))

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m,
                "modulus": None if self.modulus is None else [str(c) for c in self.modulus]}


class FieldElement:
    __slots__ = ("ctx", "code")

    def __init__(self, ctx: FieldCtx, code: int):
        self.ctx = ctx
        self.code = code

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise FieldError("elements from different fields")
            return other.code
        if isinstance(other, int):
            return other % self.ctx.p
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.sub(self.code, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.sub(b, self.code))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.code))

    def __mul__(self, other):
        if isinstance(other, int):
            return FieldElement(self.ctx, self.ctx.scale(other, self.code))
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.div(self.code, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.div(b, self.code))

    def __pow__(self, e: int):
        return FieldElement(self.ctx, self.ctx.pow(self.code, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.inv(self.code))

    def frobenius(self, k: int = 1) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.frob(self.code, k))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.code == other.code and (self.ctx is other.ctx or self.ctx == other.ctx)
        if isinstance(other, int):
            return self.code == other % self.ctx.p and (self.ctx.m == 1 or self.code < self.ctx.p)
        return NotImplemented

    def __hash__(self):
        return hash((self.code, self.ctx.p, self.ctx.modulus))

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        if self.code >= self.ctx.p:
            raise FieldError("element is not in the prime subfield")
        return self.code

    def is_zero(self) -> bool:
        return self.code == 0

    def digits(self) -> list[int]:
        return self.ctx.to_digits(self.code)

    def __repr__(self):
        if self.ctx.m == 1:
            return f"{self.code}"
        terms = []
        for i, d in enumerate(self.digits()):
            if d:
                mono = "" if i == 0 else ("w" if i == 1 else f"w^{i}")
                coef = str(d) if (d != 1 or i == 0) else ""
                terms.append(coef + ("*" if coef and mono else "") + mono)
        return " + ".join(reversed(terms)) or "0"

    def to_json(self) -> dict:
        d = self.ctx.to_json()
        d["rep"] = [str(c) for c in _trim(self.digits())]
        return d


def element_from_json(obj: dict, ctx: FieldCtx | None = None) -> FieldElement:
    if ctx is None:
        mod = obj.get("modulus")
        ctx = FieldCtx(int(obj["p"]), None if mod is None else [int(c) for c in mod])
    digits = [int(c) for c in obj["rep"]]
    digits += [0] * (ctx.m - len(digits))
    return ctx.elem(ctx.from_digits(digits))


def dumps_element(x: FieldElement) -> str:
    return json.dumps(x.to_json(), sort_keys=True)


# -- constructors and field-theoretic operations ------------------------------------

def prime_field(p: int) -> FieldCtx:
    return FieldCtx(p)


def make_ext(p: int, m: int, seed: int = 0) -> FieldCtx:
    """F_{p^m} with a modulus found by seeded random search over monic degree-m polynomials."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if m < 1:
        raise FieldError("extension degree must be positive")
    if m == 1:
        return FieldCtx(p)
    rng = random.Random(f"modulus:{p}:{m}:{seed}")
    while True:
        coeffs = [rng.randrange(p) for _ in range(m)] + [1]
        if coeffs[0] == 0:
            continue
        if is_irreducible_modp(coeffs, p):
            return FieldCtx(p, coeffs, check=False)


def GF(q: int, seed: int = 0) -> FieldCtx:
    """Field of order q = p^m (q must be a prime power)."""
    from ._util import factorint
    f = factorint(q)
    if len(f) != 1:
        raise FieldError(f"{q} is not a prime power")
    (p, m), = f.items()
    return make_ext(p, m, seed)


def element_degree(x: FieldElement) -> int:
    """Degree over F_p of the subfield generated by x."""
    ctx = x.ctx
    from ._util import divisors
    for s in divisors(ctx.m):
        if ctx.frob(x.code, s) == x.code:
            return s
    return ctx.m  # pragma: no cover


def generated_subfield_degree(xs: Sequence[FieldElement]) -> int:
    xs = list(xs)
    if not xs:
        return 1
    ctx = xs[0].ctx
    for x in xs[1:]:
        if x.ctx != ctx:
            raise FieldError("elements from different fields")
    d = 1
    for x in xs:
        d = lcm(d, element_degree(x))
        if d == ctx.m:
            break
    return d


_EMBED_CACHE: dict = {}


def embedding_image(source: FieldCtx, target: FieldCtx, seed: int = 0) -> int:
    """Code of the image of T (source generator) in target under the chosen embedding."""
    if source.p != target.p:
        raise FieldError("fields of different characteristic")
    if target.m % source.m:
        raise FieldError(f"no embedding of F_{source.q} into F_{target.q}")
    key = (source, target, seed)
    if key in _EMBED_CACHE:
        return _EMBED_CACHE[key]
    if source.m == 1:
        img = 0
    else:
        from .exactpoly import FieldPoly, roots_over
        f = FieldPoly(target, [target.elem(c) for c in source.modulus])
        roots = sorted({r.code for r in roots_over(f, seed=seed)})
        if len(roots) != source.m:
            raise FieldError("embedding search failed")  # pragma: no cover
        img = roots[seed % len(roots)]
    _EMBED_CACHE[key] = img
    return img


def embed(x: FieldElement, target: FieldCtx, seed: int = 0) -> FieldElement:
    src = x.ctx
    if src == target:
        return FieldElement(target, x.code)
    img = embedding_image(src, target, seed)
    if src.m == 1:
        return FieldElement(target, x.code)
    # Horner in the image of T
    acc = 0
    for d in reversed(x.digits()):
        acc = target.add(target.mul(acc, img), d)
    return FieldElement(target, acc)
