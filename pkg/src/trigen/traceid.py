"""Trace identities for 4x4 matrices and trace-word reduction for order-3 pairs.

Words are tuples over the letters 1, -1, 2, -2 (g1, g1^-1, g2, g2^-1); in the formal
identities the letter 3 stands for a third matrix M3.  t(w) is the trace of the product
and c2(w) the second characteristic coefficient chi_2.

The three five-term identities come from the antisymmetrized trace identity
sum_sigma sgn(sigma) tr_sigma(Z1..Z5) = 0, specialized at (Z4, Z5) = (M1, M2),
(M1^-1, M2) and (M1^-1, M2^-1), with tr(U^2) = tr(U)^2 - 2 chi_2(U) and divided by 4.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .batch import BatchField
from .gf import FieldCtx, FieldElement
from .matsp import Mat4, charpoly, eval_word

LETTERS = (1, -1, 2, -2)


class ReductionError(RuntimeError):
    """A word of length >= 5 with no reducible pattern, or a non-decreasing rewrite."""


# -- words ------------------------------------------------------------------------

def parse_indices(s: str) -> tuple[int, ...]:
    """'12-1-23' -> (1, 2, -1, -2, 3)."""
    out = []
    i = 0
    while i < len(s):
        if s[i] == "-":
            out.append(-int(s[i + 1]))
            i += 2
        else:
            out.append(int(s[i]))
            i += 1
    return tuple(out)


def free_reduce_cyclic(word: Iterable[int]) -> tuple[int, ...]:
    """Cancel x x^-1 pairs, including across the ends."""
    st: list[int] = []
    for a in word:
        if st and st[-1] == -a:
            st.pop()
        else:
            st.append(a)
    i, j = 0, len(st) - 1
    while i < j and st[i] == -st[j]:
        i += 1
        j -= 1
    return tuple(st[i:j + 1])


def order3_reduce(word: Iterable[int], cyclic: bool = True) -> tuple[int, ...]:
    """Normal form of a word in g1, g2 under g1^3 = g2^3 = 1.

    Adjacent letters of the same generator are merged (x x = x^-1, x x^-1 = 1), so the
    result alternates between g1 and g2 letters (cyclically when cyclic is set).
    """
    st: list[tuple[int, int]] = []  # (generator, exponent mod 3)

    def push(stack, g, e):
        while stack and stack[-1][0] == g:
            _, e0 = stack.pop()
            e = (e + e0) % 3
            if e == 0:
                return
            # merged letter may now meet the new top
        if e:
            stack.append((g, e))

    for a in word:
        push(st, abs(a), 1 if a > 0 else 2)
    if cyclic:
        while len(st) >= 2 and st[0][0] == st[-1][0]:
            g, e1 = st.pop()
            _, e0 = st.pop(0)
            e = (e0 + e1) % 3
            if e:
                st.insert(0, (g, e))
    return tuple(g if e == 1 else -g for g, e in st)


def rotations(word: Sequence[int]) -> list[tuple[int, ...]]:
    w = tuple(word)
    return [w[i:] + w[:i] for i in range(len(w))] or [()]


def inverse_word(word: Sequence[int]) -> tuple[int, ...]:
    return tuple(-a for a in reversed(word))


def canonical_cyclic(word: Sequence[int], symplectic: bool = False) -> tuple[int, ...]:
    """Lexicographically least rotation (also of the inverse word in symplectic mode)."""
    cands = rotations(word)
    if symplectic:
        cands += rotations(inverse_word(word))
    return min(cands)


class TraceWord:
    """Canonical cyclic word over {1, -1, 2, -2} modulo g1^3 = g2^3 = 1."""

    __slots__ = ("letters", "symplectic")

    def __init__(self, letters: Iterable[int], symplectic: bool = False):
        letters = tuple(letters)
        for a in letters:
            if a not in LETTERS:
                raise ValueError(f"bad letter {a}")
        self.symplectic = symplectic
        self.letters = canonical_cyclic(order3_reduce(letters), symplectic)

    @classmethod
    def parse(cls, s: str, symplectic: bool = False) -> "TraceWord":
        return cls(parse_indices(s.replace(",", "").replace(" ", "")), symplectic)

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, TraceWord) and (self.letters, self.symplectic) == (other.letters, other.symplectic)

    def __hash__(self):
        return hash((self.letters, self.symplectic))

    def __repr__(self):
        return f"TraceWord({','.join(map(str, self.letters))})"


def canonical_words(max_len: int, symplectic: bool = False) -> list[tuple[int, ...]]:
    """All nonempty canonical words of length <= max_len, shortest first."""
    found: set[tuple[int, ...]] = set()
    out = []
    for n in range(1, max_len + 1):
        layer = []
        for letters in itertools.product(LETTERS, repeat=n):
            w = canonical_cyclic(order3_reduce(letters), symplectic)
            if len(w) == n and w not in found:
                found.add(w)
                layer.append(w)
        out.extend(sorted(layer))
    return out


# -- symbols and polynomials ----------------------------------------------------------

TR, CHI2 = "t", "c2"


class TraceSymbol(tuple):
    """(kind, word): the trace (kind 't') or chi_2 (kind 'c2') of a canonical word."""

    def __new__(cls, kind: str, word: Sequence[int]):
        if kind not in (TR, CHI2):
            raise ValueError(f"bad symbol kind {kind!r}")
        return super().__new__(cls, (kind, tuple(word)))

    @property
    def kind(self) -> str:
        return self[0]

    @property
    def word(self) -> tuple[int, ...]:
        return self[1]

    def sort_key(self):
        return (self[0], len(self[1]), self[1])

    def __str__(self):
        return f"{self[0]}({','.join(map(str, self[1]))})"

    __repr__ = __str__

    @classmethod
    def parse(cls, s: str) -> "TraceSymbol":
        kind, rest = s.split("(", 1)
        body = rest.rstrip(")")
        word = tuple(int(x) for x in body.split(",")) if body else ()
        return cls(kind, word)


def _monomial(symbols: Iterable[TraceSymbol]) -> tuple:
    return tuple(sorted(symbols, key=TraceSymbol.sort_key))


class TracePoly:
    """Integer polynomial in trace symbols; terms map sorted symbol tuples to coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, n: int) -> "TracePoly":
        return cls({(): n})

    @classmethod
    def symbol(cls, s: TraceSymbol) -> "TracePoly":
        return cls({(s,): 1})

    def _lift(self, other):
        if isinstance(other, TracePoly):
            return other
        if isinstance(other, int):
            return TracePoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return TracePoly(out)

    __radd__ = __add__

    def __neg__(self):
        return TracePoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = _monomial(k1 + k2)
                out[k] = out.get(k, 0) + v1 * v2
        return TracePoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._lift(other)
        return isinstance(other, TracePoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def symbols(self) -> set[TraceSymbol]:
        return {s for k in self.terms for s in k}

    def degree(self) -> int:
        return max((len(k) for k in self.terms), default=0)

    def content(self) -> int:
        from math import gcd
        g = 0
        for v in self.terms.values():
            g = gcd(g, v)
        return g

    def exact_div(self, n: int) -> "TracePoly":
        if any(v % n for v in self.terms.values()):
            raise ArithmeticError(f"coefficients not divisible by {n}")
        return TracePoly({k: v // n for k, v in self.terms.items()})

    def substitute(self, fn: Callable[[TraceSymbol], object], one=1):
        """Evaluate with fn(symbol) giving ring elements that support + and * with ints."""
        cache: dict = {}
        total = None
        for mono, coef in self.terms.items():
            term = None
            for s in mono:
                if s not in cache:
                    cache[s] = fn(s)
                term = cache[s] if term is None else term * cache[s]
            term = coef * (one if term is None else term)
            total = term if total is None else total + term
        return 0 * one if total is None else total

    def to_json(self) -> list:
        items = sorted(self.terms.items(), key=lambda kv: [s.sort_key() for s in kv[0]])
        return [{"monomial": [str(s) for s in mono], "coeff": str(coef)} for mono, coef in items]

    @classmethod
    def from_json(cls, obj) -> "TracePoly":
        if isinstance(obj, str):
            obj = json.loads(obj)
        terms: dict = {}
        for item in obj:
            mono = _monomial(TraceSymbol.parse(s) for s in item["monomial"])
            terms[mono] = terms.get(mono, 0) + int(item["coeff"])
        return cls(terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, coef in sorted(self.terms.items(), key=lambda kv: [s.sort_key() for s in kv[0]]):
            body = "*".join(str(s) for s in mono)
            if not body:
                parts.append(str(coef))
            elif coef == 1:
                parts.append(body)
            elif coef == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{coef}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


# -- formal symbols for the five-matrix identities ------------------------------------

def formal_t(word: Sequence[int]) -> TracePoly:
    """Formal trace of a word in M1^+-1, M2^+-1, M3 (valid in GL_4 for every field).

    Squares U U with |U| <= 2 are rewritten as t(U)^2 - 2 c2(U).
    """
    w = free_reduce_cyclic(word)
    if not w:
        return TracePoly.const(4)
    n = len(w)
    if n % 2 == 0 and n // 2 <= 2 and w[: n // 2] == w[n // 2:]:
        u = w[: n // 2]
        tu = TracePoly.symbol(TraceSymbol(TR, canonical_cyclic(u)))
        return tu * tu - 2 * formal_c2(u)
    return TracePoly.symbol(TraceSymbol(TR, canonical_cyclic(w)))


def formal_c2(word: Sequence[int]) -> TracePoly:
    w = free_reduce_cyclic(word)
    if not w:
        return TracePoly.const(6)
    return TracePoly.symbol(TraceSymbol(CHI2, canonical_cyclic(w)))


# substitutions (Z4, Z5) for identities 1, 2, 3; Z1, Z2, Z3 = M1, M2, M3
SPECIALIZATIONS = {1: (1, 2), 2: (-1, 2), 3: (-1, -2)}
TARGETS = {1: (1, 2, 1, 2, 3), 2: (1, 2, -1, 2, 3), 3: (1, 2, -1, -2, 3)}


def _cycles(perm: Sequence[int]) -> list[list[int]]:
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if not seen[i]:
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = perm[j]
            out.append(cyc)
    return out


def _sign(perm) -> int:
    s = 1
    for cyc in _cycles(perm):
        if len(cyc) % 2 == 0:
            s = -s
    return s


PERMS5 = [(perm, _sign(perm), _cycles(perm)) for perm in itertools.permutations(range(5))]


@lru_cache(maxsize=None)
def derived_identity(k: int) -> TracePoly:
    """Identity k obtained by specializing the antisymmetrized five-matrix identity.

    The result is divided by the content of the raw sum (4, from the repeated
    arguments), so the target term t(1,2,...,3) has coefficient 1.
    """
    z = (1, 2, 3) + SPECIALIZATIONS[k]
    total = TracePoly()
    for _, sign, cycles in PERMS5:
        term = TracePoly.const(sign)
        for cyc in cycles:
            term = term * formal_t([z[i] for i in cyc])
        total = total + term
    content = total.content()
    total = total.exact_div(content)
    target = (_monomial([TraceSymbol(TR, canonical_cyclic(TARGETS[k]))]))
    if total.terms.get(target, 0) < 0:
        total = -total
    return total


def procesi_sym5_formal() -> TracePoly:
    """The antisymmetrized sum for five distinct symbolic matrices (words over 1..5)."""
    total = TracePoly()
    for _, sign, cycles in PERMS5:
        term = TracePoly.const(sign)
        for cyc in cycles:
            term = term * TracePoly.symbol(TraceSymbol(TR, canonical_cyclic([i + 1 for i in cyc])))
        total = total + term
    return total


# -- literal transcriptions of the three identities ------------------------------------
# t and c map index strings such as "12-13" to ring elements.

def _identity1(t, c):
    return (
        t("12123") + t("21213") + t("11223") + t("12213") + t("21123") + t("22113")
        - t("1") * (t("1223") + t("2123") + t("2213"))
        - t("2") * (t("1123") + t("1213") + t("2113"))
        + (t("1") * t("2") - t("12")) * (t("123") + t("213"))
        + c("2") * t("113") + c("1") * t("223")
        + (t("12") * t("2") - t("122") - t("1") * c("2")) * t("13")
        + (t("12") * t("1") - t("112") - t("2") * c("1")) * t("23")
        - (t("1122") - t("112") * t("2") - t("122") * t("1") + t("12") * t("1") * t("2")
           - c("1") * c("2") - c("12")) * t("3")
    )


def _identity2(t, c):
    return (
        t("-12213") + t("2-1213") + t("-12123") + t("12-123") + t("212-13") + t("122-13")
        - (t("12-13") + t("-1213")) * t("2")
        - (t("2123") + t("1223") + t("2213")) * t("-1")
        - (t("-1223") + t("22-13") + t("2-123")) * t("1")
        - (t("123") + t("213")) * (t("-12") - t("2") * t("-1"))
        - (t("-123") + t("2-13")) * (t("12") - t("2") * t("1"))
        + t("223") * (t("-1") * t("1") + 2)
        - (t("-122") - t("-12") * t("2") + c("2") * t("-1")) * t("13")
        - (t("122") - t("12") * t("2") + c("2") * t("1")) * t("-13")
        + (t("-1") * t("12") + t("1") * t("-12") - (t("-1") * t("1") + 2) * t("2")) * t("23")
        - (t("-1212") - (t("122") - t("12") * t("2")) * t("-1") - (t("-122") - t("-12") * t("2")) * t("1")
           - t("-12") * t("12") - c("2") * (t("-1") * t("1") + 2)) * t("3")
    )


def _identity2_uncorrected(t, c):
    """Variant without the t(-1,3) and t(2,3) brackets and with a truncated t(3) bracket.

    Kept to document the correction: it does not vanish on generic matrices.
    """
    return (
        t("-12213") + t("2-1213") + t("-12123") + t("12-123") + t("212-13") + t("122-13")
        - (t("12-13") + t("-1213")) * t("2")
        - (t("2123") + t("1223") + t("2213")) * t("-1")
        - (t("-1223") + t("22-13") + t("2-123")) * t("1")
        - (t("123") + t("213")) * (t("-12") - t("2") * t("-1"))
        - (t("-123") + t("2-13")) * (t("12") - t("2") * t("1"))
        + t("223") * (t("-1") * t("1") + 2)
        - (t("-122") - t("-12") * t("2") + c("2") * t("-1")) * t("13")
        - (t("122") - t("12") * t("2")) * t("-1")
        - (t("-122") - t("-12") * t("2")) * t("1")
        - c("2") * (t("-1") * t("1") + 2) * t("3")
    )


def _identity3_body(t, c, last_index: str, last_sign: int):
    return (
        t("21-2-13") + t("-212-13") + t("12-1-23") + t("-1-2123") + t("-2-1213") + t("-121-23")
        + t("1-2-123") + t("2-1-213")
        - (t("2-1-23") + t("-2-123")) * t("1")
        - (t("-1-213") + t("1-2-13")) * t("2")
        - (t("21-23") + t("-2123")) * t("-1")
        - (t("-1213") + t("12-13")) * t("-2")
        - (t("-1-23") + t(last_index)) * (t("12") - t("1") * t("2"))
        - (t("213") + t("123")) * (t("-2-1") - t("-1") * t("-2"))
        - (t("-213") + t("1-23")) * (t("-12") - t("2") * t("-1"))
        - (t("-123") + t("2-13")) * (t("-21") - t("1") * t("-2"))
        + (t("-2-1") * t("1") + t("-21") * t("-1") - (t("1") * t("-1") + 2) * t("-2")) * t("23")
        + (t("-12") * t("1") + t("12") * t("-1") - (t("1") * t("-1") + 2) * t("2")) * t("-23")
        + (t("-2-1") * t("2") + t("-12") * t("-2") - (t("2") * t("-2") + 2) * t("-1")) * t("13")
        + (t("-21") * t("2") + t("12") * t("-2") - (t("2") * t("-2") + 2) * t("1")) * t("-13")
        - (t("-212-1") + t("-2-121") - (t("-2-1") - t("-1") * t("-2")) * (t("12") - t("1") * t("2"))
           - (t("-21") - t("-2") * t("1")) * (t("-12") - t("2") * t("-1"))) * t("3")
        + last_sign * ((t("1") * t("-1") - 2) * (t("2") * t("-2") - 2) - 4) * t("3")
    )


def _identity3(t, c):
    return _identity3_body(t, c, "-2-13", -1)


def _identity3_uncorrected(t, c):
    """Variant with t(-2,-1,2) in place of t(-2,-1,3) and a + sign on the last bracket."""
    return _identity3_body(t, c, "-2-12", 1)


TRANSCRIBED = {1: _identity1, 2: _identity2, 3: _identity3}
UNCORRECTED = {2: _identity2_uncorrected, 3: _identity3_uncorrected}


def transcribed_identity(k: int, corrected: bool = True) -> TracePoly:
    """Identity k, written out term by term, as a formal polynomial."""
    fn = TRANSCRIBED[k] if corrected or k not in UNCORRECTED else UNCORRECTED[k]
    return fn(lambda s: formal_t(parse_indices(s)), lambda s: formal_c2(parse_indices(s)))


# -- matrix backends ------------------------------------------------------------------

class MatOps:
    """Operations on Mat4 values; scalars are FieldElements."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx

    def identity(self):
        return Mat4.identity(self.ctx)

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inverse()

    def trace(self, a):
        return a.trace()

    def chi2(self, a):
        return charpoly(a).chi2

    def one(self):
        return self.ctx.one()


class RationalOps:
    """Exact 4x4 matrices over Q as tuples of tuples of Fractions."""

    def identity(self):
        return tuple(tuple(Fraction(int(i == j)) for j in range(4)) for i in range(4))

    def mul(self, a, b):
        return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)) for i in range(4))

    def inv(self, a):
        m = [list(row) + [Fraction(int(i == j)) for j in range(4)] for i, row in enumerate(a)]
        for col in range(4):
            piv = next((r for r in range(col, 4) if m[r][col] != 0), None)
            if piv is None:
                raise ZeroDivisionError("matrix is singular")
            m[col], m[piv] = m[piv], m[col]
            pv = m[col][col]
            m[col] = [x / pv for x in m[col]]
            for r in range(4):
                if r != col and m[r][col] != 0:
                    f = m[r][col]
                    m[r] = [x - f * y for x, y in zip(m[r], m[col])]
        return tuple(tuple(row[4:]) for row in m)

    def trace(self, a):
        return sum(a[i][i] for i in range(4))

    def chi2(self, a):
        return sum(a[i][i] * a[j][j] - a[i][j] * a[j][i] for i in range(4) for j in range(i + 1, 4))

    def one(self):
        return Fraction(1)

    @staticmethod
    def from_ints(rows) -> tuple:
        return tuple(tuple(Fraction(x) for x in row) for row in rows)


class BatchScalar:
    """Array of field codes with ring operations (ints act through the prime field)."""

    __slots__ = ("bf", "a")

    def __init__(self, bf: BatchField, a: np.ndarray):
        self.bf = bf
        self.a = a

    def _coerce(self, other):
        if isinstance(other, BatchScalar):
            return other.a
        if isinstance(other, (int, np.integer)):
            return np.full_like(self.a, int(other) % self.bf.p)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        return BatchScalar(self.bf, self.bf.add(self.a, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return BatchScalar(self.bf, self.bf.sub(self.a, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return BatchScalar(self.bf, self.bf.sub(b, self.a))

    def __neg__(self):
        return BatchScalar(self.bf, self.bf.neg(self.a))

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return BatchScalar(self.bf, self.bf.scale(int(other), self.a))
        b = self._coerce(other)
        return BatchScalar(self.bf, self.bf.mul(self.a, b))

    __rmul__ = __mul__

    def is_zero(self) -> np.ndarray:
        return self.a == 0


class BatchOps:
    """Batches of 4x4 matrices over one finite field as (N, 4, 4) code arrays."""

    def __init__(self, ctx: FieldCtx, n: int):
        self.ctx = ctx
        self.bf = BatchField(ctx)
        self.n = n

    def identity(self):
        return self.bf.identity(self.n)

    def mul(self, a, b):
        return self.bf.matmul(a, b)

    def inv(self, a):
        return self.bf.inverse(a)

    def trace(self, a):
        return BatchScalar(self.bf, self.bf.trace(a))

    def chi2(self, a):
        return BatchScalar(self.bf, self.bf.chi2(a))

    def one(self):
        return BatchScalar(self.bf, np.ones(self.n, dtype=np.int64))


def ops_for(m):
    if isinstance(m, Mat4):
        return MatOps(m.ctx)
    if isinstance(m, tuple):
        return RationalOps()
    raise TypeError("pass ops= for array inputs")


class _WordEnv:
    """t(s) / c(s) on index strings, for fixed matrices M1, M2, M3 (and inverses)."""

    def __init__(self, ops, mats: dict):
        self.ops = ops
        self.mats = dict(mats)
        self.cache: dict = {}

    def product(self, word: Sequence[int]):
        ops = self.ops
        out = None
        for a in word:
            if a not in self.mats:
                self.mats[a] = ops.inv(self.mats[-a])
            out = self.mats[a] if out is None else ops.mul(out, self.mats[a])
        return ops.identity() if out is None else out

    def t(self, s: str):
        key = ("t", s)
        if key not in self.cache:
            self.cache[key] = self.ops.trace(self.product(parse_indices(s)))
        return self.cache[key]

    def c(self, s: str):
        key = ("c", s)
        if key not in self.cache:
            self.cache[key] = self.ops.chi2(self.product(parse_indices(s)))
        return self.cache[key]


def procesi_lhs(k: int, M1, M2, M3, ops=None, corrected: bool = True):
    """Left-hand side of five-term identity k in {1, 2, 3}; zero for invertible inputs.

    Inputs are Mat4 (result a FieldElement), rational 4x4 tuples (result a Fraction), or
    (N, 4, 4) code arrays with ops=BatchOps(ctx, N) (result a BatchScalar).
    """
    if k not in TRANSCRIBED:
        raise ValueError("k must be 1, 2 or 3")
    ops = ops or ops_for(M1)
    if isinstance(M1, Mat4):
        for m in (M1, M2, M3):
            if m.ctx != M1.ctx:
                raise ValueError("matrices from different fields")
            if m.det().is_zero():
                raise ValueError("singular input")
    env = _WordEnv(ops, {1: M1, 2: M2, 3: M3})
    fn = TRANSCRIBED[k] if corrected or k not in UNCORRECTED else UNCORRECTED[k]
    return fn(env.t, env.c)


def procesi_sym5(Z1, Z2, Z3, Z4, Z5, ops=None):
    """Signed sum over Sym_5 of products of traces over the cycles; zero for 4x4 inputs."""
    Z = (Z1, Z2, Z3, Z4, Z5)
    ops = ops or ops_for(Z1)
    env = _WordEnv(ops, {i + 1: z for i, z in enumerate(Z)})
    total = None
    for _, sign, cycles in PERMS5:
        term = None
        for cyc in cycles:
            val = env.t("".join(str(i + 1) for i in canonical_cyclic(cyc)))
            term = val if term is None else term * val
        term = term * sign
        total = term if total is None else total + term
    return total


# -- trace-word reduction under g1^3 = g2^3 = 1 ------------------------------------------

def _window_patterns(word: tuple[int, ...]):
    """Yield (pattern, rotation) for every occurrence, pattern 1 < 2 < 3."""
    n = len(word)
    for pat in (1, 2, 3):
        for r in range(n):
            x0, x1, x2, x3 = (word[(r + i) % n] for i in range(4))
            if pat == 1 and x2 == x0 and x3 == x1:
                yield pat, r
            elif pat == 2 and x2 == -x0 and x3 == x1:
                yield pat, r
            elif pat == 3 and x2 == -x0 and x3 == -x1:
                yield pat, r


def find_pattern(word: tuple[int, ...]) -> tuple[int, int]:
    """First (pattern, rotation) in the preferred order, or ReductionError."""
    for hit in _window_patterns(word):
        return hit
    raise ReductionError(f"no reducible pattern in {word}")


def measure(word: tuple[int, ...]) -> tuple[int, int]:
    """Well-founded measure for the rewriting: (length, best pattern)."""
    if len(word) <= 4:
        return (len(word), 0)
    return (len(word), find_pattern(word)[0])


def _atom(word: tuple[int, ...]) -> TracePoly:
    if not word:
        return TracePoly.const(4)
    return TracePoly.symbol(TraceSymbol(TR, word))


def _chi2_atom(word: tuple[int, ...]) -> TracePoly:
    w = canonical_cyclic(order3_reduce(word))
    if not w:
        return TracePoly.const(6)
    return TracePoly.symbol(TraceSymbol(CHI2, w))


def _specialize(word: Sequence[int], a: int, b: int, tail: tuple[int, ...]) -> tuple[int, ...]:
    sub = {1: (a,), -1: (-a,), 2: (b,), -2: (-b,), 3: tail, -3: inverse_word(tail)}
    letters = [x for s in word for x in sub[s]]
    return canonical_cyclic(order3_reduce(letters))


class ReductionStats:
    """Instrumentation: rewrite steps and the measures they passed through."""

    def __init__(self):
        self.steps = 0
        self.max_depth = 0


STATS = ReductionStats()


@lru_cache(maxsize=None)
def _reduce(word: tuple[int, ...]) -> TracePoly:
    if len(word) <= 4:
        return _atom(word)
    pat, r = find_pattern(word)
    w = word[r:] + word[:r]
    a, b, tail = w[0], w[1], w[4:]
    mu = (len(word), pat)
    STATS.steps += 1
    ident = derived_identity(pat)
    target_coef = 0
    rest = TracePoly()
    for mono, coef in ident.terms.items():
        term = TracePoly.const(coef)
        is_target = False
        for sym in mono:
            if sym.kind == CHI2:
                # chi_2 symbols only come from squares of words in M1, M2
                term = term * _chi2_atom(_specialize(sym.word, a, b, ()))
                continue
            sw = _specialize(sym.word, a, b, tail)
            if sw == word:
                if len(mono) != 1:
                    raise ReductionError(f"target word inside a product while reducing {word}")
                is_target = True
                break
            if len(sw) > 4 and measure(sw) >= mu:
                raise ReductionError(f"rewrite of {word} produced {sw} of no smaller measure")
            term = term * _reduce(sw)
        if is_target:
            target_coef += coef
            continue
        rest = rest + term
    if target_coef not in (1, -1):
        raise ReductionError(f"target coefficient {target_coef} while reducing {word}")
    return rest * (-target_coef)


def reduce_trace(w: TraceWord | Sequence[int]) -> TracePoly:
    """Express tr(w(g1, g2)) for order-3 g1, g2 as an integer polynomial in the generator set X."""
    if isinstance(w, TraceWord):
        if w.symplectic:
            raise ValueError("reduction works with general-linear canonical words")
        word = w.letters
    else:
        word = TraceWord(w).letters
    return _reduce(word)


def generator_set(symplectic: bool = False) -> list[TraceSymbol]:
    """X: traces of canonical words of length <= 4 and chi_2 of words of length <= 2."""
    out = [TraceSymbol(TR, w) for w in canonical_words(4, symplectic)]
    out += [TraceSymbol(CHI2, w) for w in canonical_words(2, symplectic)]
    return out


def symbol_value(sym: TraceSymbol, g1: Mat4, g2: Mat4, inverses=None):
    m = eval_word(sym.word, g1, g2, inverses)
    return m.trace() if sym.kind == TR else charpoly(m).chi2


def evaluate(poly: TracePoly, g1: Mat4, g2: Mat4) -> FieldElement:
    inverses: dict = {}
    return poly.substitute(lambda s: symbol_value(s, g1, g2, inverses), one=g1.ctx.one())


def batch_word_product(ops: BatchOps, G: dict, word: Sequence[int]):
    out = None
    for a in word:
        out = G[a] if out is None else ops.mul(out, G[a])
    return ops.identity() if out is None else out


def evaluate_batch(poly: TracePoly, ops: BatchOps, G1: np.ndarray, G2: np.ndarray,
                   cache: dict | None = None) -> BatchScalar:
    """Evaluate on N pairs at once; pass the same cache dict to reuse symbol values."""
    cache = {} if cache is None else cache
    if "G" not in cache:
        cache["G"] = {1: G1, 2: G2, -1: ops.inv(G1), -2: ops.inv(G2)}
    G = cache["G"]

    def value(sym):
        if sym not in cache:
            m = batch_word_product(ops, G, sym.word)
            cache[sym] = ops.trace(m) if sym.kind == TR else ops.chi2(m)
        return cache[sym]

    return poly.substitute(value, one=ops.one())


# -- character-field generators for order-3 pairs in Sp_4 -------------------------------

def rho_eval(x, y, z):
    """(z + x + 1)(z^2 + (2x - 10) z + x^2 - 9y + 8x + 7)."""
    return (z + x + 1) * (z * z + (2 * x - 10) * z + x * x - 9 * y + 8 * x + 7)


class NotConforming(ValueError):
    """Input pair is not a pair of order-3 symplectic elements acting absolutely irreducibly."""


def _is_order3(g: Mat4) -> bool:
    return not g.is_identity() and (g * g * g).is_identity()


def check_conforming(g1: Mat4, g2: Mat4) -> None:
    from .matsp import is_absolutely_irreducible, is_symplectic
    if g1.ctx != g2.ctx:
        raise NotConforming("matrices from different fields")
    for g in (g1, g2):
        if not _is_order3(g):
            raise NotConforming("element of order != 3")
        if not is_symplectic(g):
            raise NotConforming("element is not symplectic")
    if not is_absolutely_irreducible(g1, g2):
        raise NotConforming("pair is not absolutely irreducible")


def charfield_generators(g1: Mat4, g2: Mat4, check: bool = True):
    """(tr(g1 g2), chi_2(g1 g2), tr(g1 g2^-1)); they generate the character field."""
    if check:
        check_conforming(g1, g2)
    h = g1 * g2
    return h.trace(), charpoly(h).chi2, (g1 * g2.inverse()).trace()


def minpoly_degree_order3(g: Mat4) -> int:
    """Degree of the minimal polynomial of an order-3 element (2 or 3)."""
    ident = Mat4.identity(g.ctx)
    return 2 if (g * g + g + ident).e == (0,) * 16 else 3


def kernel_basis(ctx: FieldCtx, rows: list[list[int]]) -> list[list[int]]:
    """Basis of {v : A v = 0} for a matrix given by rows of codes."""
    n = len(rows[0])
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(a)) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = ctx.inv(a[r][col])
        a[r] = [ctx.mul(x, inv) for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        v = [0] * n
        v[fcol] = 1
        for i, pc in enumerate(pivots):
            v[pc] = ctx.neg(a[i][fcol])
        basis.append(v)
    return basis


def rank_of(ctx: FieldCtx, vectors: list[list[int]]) -> int:
    if not vectors:
        return 0
    # rank of the matrix with the vectors as rows = n - dim kernel of its transpose action
    n = len(vectors[0])
    return n - len(kernel_basis(ctx, vectors))


def _lift_mat(g: Mat4, target: FieldCtx) -> Mat4:
    from .gf import embed
    return Mat4.from_codes(target, [embed(FieldElement(g.ctx, c), target).code for c in g.e])


def _omega(ctx: FieldCtx) -> int | None:
    """A root of T^2 + T + 1 in ctx (None if there is none)."""
    if ctx.p == 3:
        return 1
    if (ctx.q - 1) % 3:
        return None
    w = ctx.primitive_element()
    return (w ** ((ctx.q - 1) // 3)).code


def _two_dim_eigenspace(g2: Mat4):
    """(field, lifted g2, eigenvalue code, basis of a 2-dim eigenspace) for order-3 g2."""
    from .gf import make_ext
    ctx = g2.ctx
    ident = Mat4.identity(ctx)
    fixed = kernel_basis(ctx, [list(r) for r in _rows(g2 - ident)])
    if len(fixed) == 2:
        return ctx, g2, 1, fixed
    om = _omega(ctx)
    field, g = ctx, g2
    if om is None:
        field = make_ext(ctx.p, 2 * ctx.m)
        g = _lift_mat(g2, field)
        om = _omega(field)
    for lam in sorted({om, field.mul(om, om)}):
        shifted = g - Mat4.scalar(field, FieldElement(field, lam))
        ker = kernel_basis(field, [list(r) for r in _rows(shifted)])
        if len(ker) == 2:
            return field, g, lam, ker
    return None


def _rows(m: Mat4) -> list[tuple[int, ...]]:
    return [m.e[4 * i:4 * i + 4] for i in range(4)]


CASES = ("A1", "A2a", "A2b", "B1", "B2")


def case_formulas(case: str) -> dict[str, Callable]:
    """Per-case relations, as functions of the trace values returning (lhs, rhs)."""
    common_a = {
        "c1m2 = -2 t12 - 1": lambda v: (v["c1m2"], -2 * v["t12"] - 1),
        "t121m2 = -t12^2 - 4 t12 - 3": lambda v: (v["t121m2"], -v["t12"] * v["t12"] - 4 * v["t12"] - 3),
        "t12m12 = -t12^2 - 4 t12 - 3": lambda v: (v["t12m12"], -v["t12"] * v["t12"] - 4 * v["t12"] - 3),
        "t12m1m2 = t12^2 + 4 t12 + 8": lambda v: (v["t12m1m2"], v["t12"] * v["t12"] + 4 * v["t12"] + 8),
        "t1m21m2 = t12^2 + 12 t12 + 18": lambda v: (v["t1m21m2"], v["t12"] * v["t12"] + 12 * v["t12"] + 18),
        "t1m2 = -t12 - 4": lambda v: (v["t1m2"], -v["t12"] - 4),
        "c12 = 2 t12 + 7": lambda v: (v["c12"], 2 * v["t12"] + 7),
    }
    if case in ("A1", "A2b"):
        return common_a
    if case == "A2a":
        return {
            "c1m2 = c12 + 2 t12 + 1": lambda v: (v["c1m2"], v["c12"] + 2 * v["t12"] + 1),
            "t121m2 = -t12^2 + 2 c12 + t12 + 1": lambda v: (v["t121m2"], -v["t12"] * v["t12"] + 2 * v["c12"] + v["t12"] + 1),
            "t12m12 = -t12^2 + 2 c12 + t12 + 1": lambda v: (v["t12m12"], -v["t12"] * v["t12"] + 2 * v["c12"] + v["t12"] + 1),
            "t12m1m2 = t12^2 + c12 + 2 t12 + 1": lambda v: (v["t12m1m2"], v["t12"] * v["t12"] + v["c12"] + 2 * v["t12"] + 1),
            "t1m21m2 = t12^2 - 2 c12 - 2 t12 - 1": lambda v: (v["t1m21m2"], v["t12"] * v["t12"] - 2 * v["c12"] - 2 * v["t12"] - 1),
            "t1m2 = -t12 - 1": lambda v: (v["t1m2"], -v["t12"] - 1),
        }
    if case == "B1":
        return {
            "c1m2 = 2 t1m2 + c12 - 2 t12": lambda v: (v["c1m2"], 2 * v["t1m2"] + v["c12"] - 2 * v["t12"]),
            "t121m2 = t1m2 t12 - t1m2 - c12 + t12": lambda v: (v["t121m2"], v["t1m2"] * v["t12"] - v["t1m2"] - v["c12"] + v["t12"]),
            "t12m12 = t1m2 t12 - t1m2 - c12 + t12": lambda v: (v["t12m12"], v["t1m2"] * v["t12"] - v["t1m2"] - v["c12"] + v["t12"]),
            "t12m1m2 = -t1m2 t12 + 4 t1m2 - 4 t12 + 4 c12 - 4": lambda v: (
                v["t12m1m2"], -v["t1m2"] * v["t12"] + 4 * v["t1m2"] - 4 * v["t12"] + 4 * v["c12"] - 4),
            "t1m21m2 = -2 t1m2 t12 - t12^2 + 6 t1m2 + 7 c12 - 4 t12 - 7": lambda v: (
                v["t1m21m2"], -2 * v["t1m2"] * v["t12"] - v["t12"] * v["t12"] + 6 * v["t1m2"] + 7 * v["c12"] - 4 * v["t12"] - 7),
            "t1m2^2 + (2 t12 - 10) t1m2 + t12^2 - 9 c12 + 8 t12 + 7 = 0": lambda v: (
                v["t1m2"] * v["t1m2"] + (2 * v["t12"] - 10) * v["t1m2"] + v["t12"] * v["t12"] - 9 * v["c12"] + 8 * v["t12"] + 7,
                0 * v["t12"]),
        }
    if case == "B2":
        return {
            "c1m2 = c12 + 2 t12 + 1": lambda v: (v["c1m2"], v["c12"] + 2 * v["t12"] + 1),
            "t121m2 = -t12^2 + 2 c12 + t12 + 1": lambda v: (v["t121m2"], -v["t12"] * v["t12"] + 2 * v["c12"] + v["t12"] + 1),
            "t12m12 = -t12^2 - c12 - 2 t12 + 1": lambda v: (v["t12m12"], -v["t12"] * v["t12"] - v["c12"] - 2 * v["t12"] + 1),
            "t12m1m2 = t12^2 + c12 + 2 t12 + 1": lambda v: (v["t12m1m2"], v["t12"] * v["t12"] + v["c12"] + 2 * v["t12"] + 1),
            "t1m21m2 = t12^2 - 2 c12 - 2 t12 - 1": lambda v: (v["t1m21m2"], v["t12"] * v["t12"] - 2 * v["c12"] - 2 * v["t12"] - 1),
            "t1m2 = -t12 - 1": lambda v: (v["t1m2"], -v["t12"] - 1),
        }
    raise ValueError(f"unknown case {case!r}")


TRACE_VALUE_WORDS = {
    "t12": (1, 2), "t1m2": (1, -2), "t121m2": (1, 2, 1, -2), "t12m12": (1, 2, -1, 2),
    "t12m1m2": (1, 2, -1, -2), "t1m21m2": (1, -2, 1, -2), "t1m2m1m2": (1, -2, -1, -2),
}


def trace_values(g1: Mat4, g2: Mat4) -> dict:
    inverses: dict = {}
    out = {k: eval_word(w, g1, g2, inverses).trace() for k, w in TRACE_VALUE_WORDS.items()}
    out["c12"] = charpoly(g1 * g2).chi2
    out["c1m2"] = charpoly(g1 * g2.inverse()).chi2
    return out


class CaseReport:
    """Outcome of classify_case: the case label and the checked relations."""

    def __init__(self, case: str, swapped: bool, checks: dict[str, bool], values: dict):
        self.case = case
        self.swapped = swapped
        self.checks = checks
        self.values = values

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def __repr__(self):
        return f"CaseReport({self.case}, ok={self.ok}, swapped={self.swapped})"


def classify_case(g1: Mat4, g2: Mat4, check: bool = True) -> CaseReport:
    """Which case of the character-field argument the pair realises, with its relations checked.

    g1 is taken with minimal polynomial of degree 3 (the pair is swapped if needed) and W is
    a 2-dimensional eigenspace of g2 (over F_{q^2} when the eigenvalue needs it).
    Case (a): some nonzero v in W has g1^2 v in <v, g1 v>, i.e. W meets ker(g1^2 + g1 + 1).
    """
    if check:
        check_conforming(g1, g2)
    swapped = False
    if minpoly_degree_order3(g1) == 2:
        g1, g2 = g2, g1
        swapped = True
    found = _two_dim_eigenspace(g2)
    if found is None:
        raise RuntimeError("NO_EIGENSPACE: order-3 element without a 2-dimensional eigenspace")
    field, g2f, _, W = found
    g1f = g1 if field == g1.ctx else _lift_mat(g1, field)
    ident = Mat4.identity(field)
    K = kernel_basis(field, [list(r) for r in _rows(g1f * g1f + g1f + ident)])
    meet = len(W) + len(K) - rank_of(field, W + K)
    if meet > 0:
        case = _subcase_a(field, g1f, g2f, W, K)
    else:
        case = "B1" if has_eigenvalue_one(g2) else "B2"
    values = trace_values(g1, g2)
    checks = {name: _eq(*fn(values)) for name, fn in case_formulas(case).items()}
    return CaseReport(case, swapped, checks, values)


def _eq(a, b) -> bool:
    return (a - b).is_zero()


def has_eigenvalue_one(g: Mat4) -> bool:
    """For order-3 g: characteristic polynomial (T-1)^2 (T^2+T+1) rather than (T^2+T+1)^2."""
    ident = Mat4.identity(g.ctx)
    return len(kernel_basis(g.ctx, [list(r) for r in _rows(g - ident)])) > 0


def _subcase_a(field, g1, g2, W, K) -> str:
    # a nonzero v in W with g1^2 v in <v, g1 v>; take it from W cap (ker(g1^2+g1+1) + ker(g1-1))
    ctx = field
    n = 4
    # solve sum x_i W_i = sum y_j K_j for a vector in the intersection
    cols = [list(w) for w in W] + [[ctx.neg(x) for x in k] for k in K]
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(n)]
    sol = kernel_basis(ctx, rows)[0]
    v = [0] * n
    for coef, w in zip(sol[:len(W)], W):
        v = [ctx.add(a, ctx.mul(coef, b)) for a, b in zip(v, w)]
    g1v = g1.apply(v)
    ident = Mat4.identity(ctx)
    # (a.1): g1 acts trivially on V/U, i.e. (g1 - 1) V lies in U = <v, g1 v>
    image = [list(col) for col in zip(*_rows(g1 - ident))]
    if rank_of(ctx, [v, g1v] + image) == 2:
        return "A1"
    g2g1v = g2.apply(g1v)
    g1g2g1v = g1.apply(g2g1v)
    return "A2a" if rank_of(ctx, [v, g1v, g2g1v, g1g2g1v]) == 4 else "A2b"
