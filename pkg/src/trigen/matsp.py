"""4x4 matrices over finite fields and the symplectic group Sp_4(q).

Matrices act on column vectors.  The symplectic form uses the basis (e1, f1, e2, f2)
with (e_i, f_i) = 1, so the Gram matrix is J = [[0,1,0,0],[-1,0,0,0],[0,0,0,1],[0,0,-1,0]].
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .gf import FieldCtx, FieldElement, GF, generated_subfield_degree

N = 4
_IDX = [(i, j) for i in range(N) for j in range(N)]


class ResourceError(RuntimeError):
    """A configured size or time cap was exceeded."""


class Mat4:
    """Immutable 4x4 matrix; entries are field codes in row-major order."""

    __slots__ = ("ctx", "e", "_hash")

    def __init__(self, ctx: FieldCtx, entries: Sequence):
        self.ctx = ctx
        vals = []
        for x in entries:
            if isinstance(x, FieldElement):
                vals.append(x.code)
            else:
                vals.append(int(x) % ctx.p)
        if len(vals) != 16:
            raise ValueError("a 4x4 matrix needs 16 entries")
        self.e = tuple(vals)
        self._hash = None

    @classmethod
    def from_codes(cls, ctx: FieldCtx, codes: Sequence[int]) -> "Mat4":
        m = cls.__new__(cls)
        m.ctx = ctx
        m.e = tuple(int(c) for c in codes)
        m._hash = None
        return m

    @classmethod
    def from_rows(cls, ctx: FieldCtx, rows: Sequence[Sequence]) -> "Mat4":
        return cls(ctx, [x for row in rows for x in row])

    @classmethod
    def from_columns(cls, ctx: FieldCtx, cols: Sequence[Sequence]) -> "Mat4":
        return cls(ctx, [cols[j][i] for i in range(N) for j in range(N)])

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "Mat4":
        return cls.from_codes(ctx, [1 if i == j else 0 for i, j in _IDX])

    @classmethod
    def scalar(cls, ctx: FieldCtx, x: FieldElement | int) -> "Mat4":
        code = x.code if isinstance(x, FieldElement) else int(x) % ctx.p
        return cls.from_codes(ctx, [code if i == j else 0 for i, j in _IDX])

    @classmethod
    def diag(cls, ctx: FieldCtx, d: Sequence) -> "Mat4":
        codes = [x.code if isinstance(x, FieldElement) else int(x) % ctx.p for x in d]
        return cls.from_codes(ctx, [codes[i] if i == j else 0 for i, j in _IDX])

    def __getitem__(self, ij) -> FieldElement:
        i, j = ij
        return FieldElement(self.ctx, self.e[4 * i + j])

    def rows(self) -> list[list[FieldElement]]:
        return [[FieldElement(self.ctx, self.e[4 * i + j]) for j in range(N)] for i in range(N)]

    def __eq__(self, other):
        return isinstance(other, Mat4) and self.e == other.e and self.ctx == other.ctx

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.e)
        return self._hash

    def key(self) -> bytes:
        """Byte serialization used for closure dedup."""
        width = (self.ctx.q.bit_length() + 7) // 8
        return b"".join(c.to_bytes(width, "little") for c in self.e)

    def is_identity(self) -> bool:
        return all(self.e[4 * i + j] == (1 if i == j else 0) for i, j in _IDX)

    def __mul__(self, other: "Mat4") -> "Mat4":
        if not isinstance(other, Mat4):
            if isinstance(other, (int, FieldElement)):
                return self * Mat4.scalar(self.ctx, other)
            return NotImplemented
        a, b, ctx = self.e, other.e, self.ctx
        if ctx.m == 1:
            p = ctx.p
            out = [
                (a[r] * b[c] + a[r + 1] * b[c + 4] + a[r + 2] * b[c + 8] + a[r + 3] * b[c + 12]) % p
                for r in (0, 4, 8, 12) for c in range(4)
            ]
            return Mat4.from_codes(ctx, out)
        add, mul = ctx.add, ctx.mul
        out = []
        for r in (0, 4, 8, 12):
            for c in range(4):
                s = 0
                for k in range(4):
                    x, y = a[r + k], b[c + 4 * k]
                    if x and y:
                        s = add(s, mul(x, y))
                out.append(s)
        return Mat4.from_codes(ctx, out)

    def __add__(self, other: "Mat4") -> "Mat4":
        ctx = self.ctx
        return Mat4.from_codes(ctx, [ctx.add(x, y) for x, y in zip(self.e, other.e)])

    def __sub__(self, other: "Mat4") -> "Mat4":
        ctx = self.ctx
        return Mat4.from_codes(ctx, [ctx.sub(x, y) for x, y in zip(self.e, other.e)])

    def __neg__(self):
        ctx = self.ctx
        return Mat4.from_codes(ctx, [ctx.neg(x) for x in self.e])

    def transpose(self) -> "Mat4":
        return Mat4.from_codes(self.ctx, [self.e[4 * j + i] for i, j in _IDX])

    def __pow__(self, k: int) -> "Mat4":
        if k < 0:
            return self.inverse() ** (-k)
        out = Mat4.identity(self.ctx)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def trace(self) -> FieldElement:
        ctx = self.ctx
        s = 0
        for i in range(4):
            s = ctx.add(s, self.e[5 * i])
        return FieldElement(ctx, s)

    def det(self) -> FieldElement:
        return charpoly(self).chi0

    def inverse(self) -> "Mat4":
        """Gauss-Jordan inverse; raises ZeroDivisionError when singular."""
        ctx = self.ctx
        a = [list(self.e[4 * i:4 * i + 4]) + [1 if i == j else 0 for j in range(4)] for i in range(4)]
        for col in range(4):
            piv = next((r for r in range(col, 4) if a[r][col]), None)
            if piv is None:
                raise ZeroDivisionError("matrix is singular")
            a[col], a[piv] = a[piv], a[col]
            inv = ctx.inv(a[col][col])
            a[col] = [ctx.mul(x, inv) for x in a[col]]
            for r in range(4):
                if r != col and a[r][col]:
                    f = a[r][col]
                    a[r] = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(a[r], a[col])]
        return Mat4.from_codes(ctx, [a[i][4 + j] for i, j in _IDX])

    def apply(self, v: Sequence[int]) -> list[int]:
        """Matrix times column vector of codes."""
        ctx = self.ctx
        out = []
        for r in range(4):
            s = 0
            for k in range(4):
                s = ctx.add(s, ctx.mul(self.e[4 * r + k], v[k]))
            out.append(s)
        return out

    def __repr__(self):
        rows = ["[" + ", ".join(repr(x) for x in row) + "]" for row in self.rows()]
        return "Mat4(" + ", ".join(rows) + ")"

    def to_json(self) -> list:
        return [[x.to_json()["rep"] for x in row] for row in self.rows()]

    def dumps(self) -> str:
        return json.dumps({"field": self.ctx.to_json(), "rows": self.to_json()}, sort_keys=True)


def mat_from_json(obj, ctx: FieldCtx | None = None) -> Mat4:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if ctx is None:
        f = obj["field"]
        ctx = FieldCtx(int(f["p"]), None if f["modulus"] is None else [int(c) for c in f["modulus"]])
    rows = obj["rows"] if isinstance(obj, dict) else obj
    codes = []
    for row in rows:
        for rep in row:
            digits = [int(c) for c in rep] + [0] * ctx.m
            codes.append(ctx.from_digits(digits[:ctx.m]))
    return Mat4.from_codes(ctx, codes)


@dataclass(frozen=True)
class CharPoly4:
    """Coefficients of T^4 - chi3 T^3 + chi2 T^2 - chi1 T + chi0."""

    chi0: FieldElement
    chi1: FieldElement
    chi2: FieldElement
    chi3: FieldElement

    def as_tuple(self):
        return (self.chi0, self.chi1, self.chi2, self.chi3)


def _det_codes(ctx: FieldCtx, m: list[list[int]]) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return ctx.sub(ctx.mul(m[0][0], m[1][1]), ctx.mul(m[0][1], m[1][0]))
    total = 0
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = ctx.mul(m[0][j], _det_codes(ctx, minor))
        total = ctx.add(total, term) if j % 2 == 0 else ctx.sub(total, term)
    return total


def principal_minor_sum(g: Mat4, k: int) -> FieldElement:
    ctx = g.ctx
    s = 0
    for idx in itertools.combinations(range(4), k):
        sub = [[g.e[4 * i + j] for j in idx] for i in idx]
        s = ctx.add(s, _det_codes(ctx, sub))
    return FieldElement(ctx, s)


def charpoly(g: Mat4) -> CharPoly4:
    """chi3 = trace, chi2 / chi1 = sums of principal 2x2 / 3x3 minors, chi0 = det."""
    return CharPoly4(
        chi0=principal_minor_sum(g, 4),
        chi1=principal_minor_sum(g, 3),
        chi2=principal_minor_sum(g, 2),
        chi3=g.trace(),
    )


def charpoly_by_expansion(g: Mat4) -> list[FieldElement]:
    """Coefficients (constant first) of det(T I - g) by Leibniz expansion over polynomials."""
    ctx = g.ctx

    def entry(i, j):
        c = ctx.neg(g.e[4 * i + j])
        return [c, 1] if i == j else [c]

    def pmul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = ctx.add(out[i + j], ctx.mul(x, y))
        return out

    total = [0] * 5
    for perm in itertools.permutations(range(4)):
        sign = _perm_sign(perm)
        term = [1]
        for i in range(4):
            term = pmul(term, entry(i, perm[i]))
        for k, x in enumerate(term):
            total[k] = ctx.add(total[k], x) if sign > 0 else ctx.sub(total[k], x)
    return [FieldElement(ctx, x) for x in total]


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def gram_matrix(ctx: FieldCtx) -> Mat4:
    return Mat4.from_rows(ctx, [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])


def is_symplectic(g: Mat4) -> bool:
    J = gram_matrix(g.ctx)
    return g.transpose() * J * g == J


def trace_witness(ctx: FieldCtx) -> Mat4:
    """Symplectic element whose trace is a fixed generator w of the multiplicative group.

    In the basis (e1, f1, e2, f2): e1 -> w e1 - f2, f1 -> -w e1 + e2 + f2, e2 -> e1,
    f2 -> e1 + f1 - w e2.
    """
    w = ctx.primitive_element() if ctx.q > 2 else ctx.one()
    zero, one = ctx.zero(), ctx.one()
    cols = [
        [w, zero, zero, -one],
        [-w, zero, one, one],
        [one, zero, zero, zero],
        [one, one, -w, zero],
    ]
    g = Mat4.from_columns(ctx, cols)
    return g


def sp4_order(q: int) -> int:
    return q**4 * (q**2 - 1) * (q**4 - 1)


def element_order(g: Mat4, bound: int | None = None, group_order: int | None = None) -> int | None:
    """Least k <= bound with g^k = 1, or None.

    With a group-order hint the order is found by stripping prime factors from the hint.
    """
    if g.det().is_zero():
        raise ValueError("element_order needs an invertible matrix")
    if group_order is not None:
        from ._util import factorint
        n = group_order
        if not (g**n).is_identity():
            raise ValueError("group order hint is not a multiple of the element order")
        for prime, e in factorint(group_order).items():
            for _ in range(e):
                if (g ** (n // prime)).is_identity():
                    n //= prime
                else:
                    break
        return n if bound is None or n <= bound else None
    if bound is None:
        bound = g.ctx.q**4
    h = g
    for k in range(1, bound + 1):
        if h.is_identity():
            return k
        h = h * g
    return None


def order_of_symplectic(g: Mat4) -> int:
    """Exact order of an element of Sp_4(q) using |Sp_4(q)| as a multiple."""
    # every element order divides the exponent, which divides |Sp_4(q)|
    return element_order(g, group_order=sp4_order(g.ctx.q))


class GroupWord:
    """Freely reduced word over x1, x1^-1, x2, x2^-1, letters encoded as 1, -1, 2, -2."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[int] = ()):
        out: list[int] = []
        for a in letters:
            if a not in (1, -1, 2, -2):
                raise ValueError(f"bad letter {a}")
            if out and out[-1] == -a:
                out.pop()
            else:
                out.append(a)
        self.letters = tuple(out)

    @classmethod
    def parse(cls, s: str) -> "GroupWord":
        """Parse strings such as '1 2 -1 -2' or '12-1-2'."""
        s = s.replace(",", " ").strip()
        toks: list[int] = []
        i = 0
        while i < len(s):
            ch = s[i]
            if ch.isspace():
                i += 1
                continue
            if ch == "-":
                toks.append(-int(s[i + 1]))
                i += 2
            else:
                toks.append(int(ch))
                i += 1
        return cls(toks)

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, GroupWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(-a for a in reversed(self.letters))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def __repr__(self):
        return "GroupWord(" + " ".join(str(a) for a in self.letters) + ")"


def eval_word(w: GroupWord | Sequence[int], g1: Mat4, g2: Mat4, inverses=None) -> Mat4:
    letters = w.letters if isinstance(w, GroupWord) else tuple(w)
    if inverses is None:
        inverses = {}
    gens = {1: g1, 2: g2}
    out = Mat4.identity(g1.ctx)
    for a in letters:
        if a > 0:
            out = out * gens[a]
        else:
            if a not in inverses:
                inverses[a] = gens[-a].inverse()
            out = out * inverses[a]
    return out


def span_dimension(mats: Iterable[Mat4]) -> int:
    """Dimension of the F-span of some matrices viewed as 16-vectors."""
    basis: dict[int, list[int]] = {}
    ctx = None
    for m in mats:
        ctx = m.ctx
        _reduce_into(ctx, basis, list(m.e))
    return len(basis)


def _reduce_into(ctx: FieldCtx, basis: dict[int, list[int]], v: list[int]) -> bool:
    """Gaussian insertion; basis maps pivot index to a row with pivot 1. True if v was new."""
    for piv, row in basis.items():
        c = v[piv]
        if c:
            v = [ctx.sub(x, ctx.mul(c, y)) for x, y in zip(v, row)]
    piv = next((i for i, x in enumerate(v) if x), None)
    if piv is None:
        return False
    inv = ctx.inv(v[piv])
    v = [ctx.mul(x, inv) for x in v]
    for k, row in basis.items():
        c = row[piv]
        if c:
            basis[k] = [ctx.sub(x, ctx.mul(c, y)) for x, y in zip(row, v)]
    basis[piv] = v
    return True


def enveloping_dimension(g1: Mat4, g2: Mat4) -> int:
    """Dimension of the associative algebra generated by g1 and g2."""
    ctx = g1.ctx
    basis: dict[int, list[int]] = {}
    ident = Mat4.identity(ctx)
    _reduce_into(ctx, basis, list(ident.e))
    queue = [ident]
    while queue and len(basis) < 16:
        a = queue.pop()
        for g in (g1, g2):
            b = a * g
            if _reduce_into(ctx, basis, list(b.e)):
                queue.append(b)
    return len(basis)


def is_absolutely_irreducible(g1: Mat4, g2: Mat4) -> bool:
    """True iff the words in g1, g2 span all 4x4 matrices."""
    return enveloping_dimension(g1, g2) == 16


def transvection(ctx: FieldCtx, v: Sequence[int], lam: int) -> Mat4:
    """x -> x + lam (x, v) v, a symplectic transvection."""
    J = gram_matrix(ctx)
    Jv = J.apply(list(v))
    entries = []
    for i in range(4):
        for j in range(4):
            x = ctx.mul(ctx.mul(lam, v[i]), Jv[j])
            entries.append(ctx.add(1 if i == j else 0, x))
    return Mat4.from_codes(ctx, entries)


def standard_generators(ctx: FieldCtx) -> list[Mat4]:
    """A generating set of Sp_4(q) made of root transvections (and their w-scaled forms)."""
    w = ctx.primitive_element().code if ctx.q > 2 else 1
    vecs = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 1, 0), (0, 1, 0, 1), (1, 0, 0, 1)]
    lams = [1] if ctx.q == 2 else [1, w]
    if ctx.m > 1 and ctx.gen().code != w:
        lams.append(ctx.gen().code)
    return [transvection(ctx, v, lam) for v in vecs for lam in lams]


def random_symplectic(ctx: FieldCtx, rng: random.Random, words: int = 40) -> Mat4:
    """Random product of standard generators (for seeding samplers; not uniform)."""
    gens = standard_generators(ctx)
    g = Mat4.identity(ctx)
    for _ in range(words):
        g = g * rng.choice(gens)
    return g


class ProductReplacement:
    """Product replacement random element generator with an accumulator."""

    def __init__(self, gens: Sequence[Mat4], rng: random.Random, slots: int = 10, burn: int = 60):
        self.rng = rng
        gens = list(gens)
        self.state = [gens[i % len(gens)] for i in range(max(slots, len(gens)))]
        self.acc = Mat4.identity(gens[0].ctx)
        for _ in range(burn):
            self.next()

    def next(self) -> Mat4:
        s = self.state
        i, j = self.rng.sample(range(len(s)), 2)
        if self.rng.random() < 0.5:
            s[i] = s[i] * s[j]
        else:
            s[i] = s[j] * s[i]
        self.acc = self.acc * s[i]
        return self.acc


def power_to_order(g: Mat4, k: int, n: int | None = None) -> Mat4 | None:
    """g^(n/k) when k divides the order n of g (an element of order exactly k), else None."""
    if n is None:
        n = order_of_symplectic(g)
    if n % k:
        return None
    return g ** (n // k)


def random_element_of_order(k: int, pr: ProductReplacement, tries: int = 1000) -> Mat4:
    """Element of order exactly k obtained by powering product-replacement samples."""
    for _ in range(tries):
        h = power_to_order(pr.next(), k)
        if h is not None:
            return h
    raise ResourceError(f"no element of order {k} found in {tries} samples")


def character_field_degree(g1: Mat4, g2: Mat4, max_len: int = 8) -> int:
    """Degree over F_p of the field generated by traces of all words of length <= max_len.

    Stops early once the degree reaches that of the ambient field.
    """
    from ._util import lcm
    ctx = g1.ctx
    gens = {1: g1, -1: g1.inverse(), 2: g2, -2: g2.inverse()}
    deg = 1
    layer = [((), Mat4.identity(ctx))]
    for _ in range(max_len):
        nxt = []
        traces = []
        for word, m in layer:
            for a in (1, -1, 2, -2):
                if word and word[-1] == -a:
                    continue
                mm = m * gens[a]
                nxt.append((word + (a,), mm))
                traces.append(mm.trace())
        deg = lcm(deg, generated_subfield_degree(traces))
        if deg == ctx.m:
            break
        layer = nxt
    return deg


def group_order(g1: Mat4, g2: Mat4, strategy: str = "auto", seed: int = 0,
                bfs_limit: int | None = None, target: int | None = None) -> int:
    """Order of <g1, g2>.

    strategy "bfs" enumerates the closure, "schreier" runs randomized Schreier-Sims on
    the action on nonzero vectors, and "auto" uses BFS when |Sp_4(q)| is below the BFS
    limit, else Schreier-Sims.
    """
    from . import stabchain
    limit = stabchain.DEFAULT_BFS_LIMIT if bfs_limit is None else bfs_limit
    gens = [g for g in (g1, g2) if not g.is_identity()]
    if not gens:
        return 1
    if strategy == "auto":
        strategy = "bfs" if sp4_order(g1.ctx.q) <= limit else "schreier"
    if strategy == "bfs":
        return stabchain.bfs_closure(gens, limit)
    if strategy == "schreier":
        return stabchain.schreier_sims_order(gens, seed=seed, target=target)
    raise ValueError(f"unknown strategy {strategy!r}")


def generates_sp4(g1: Mat4, g2: Mat4, seed: int = 0, strategy: str = "auto") -> bool:
    """Whether <g1, g2> = Sp_4(q); cheap necessary conditions are checked first."""
    ctx = g1.ctx
    if not (is_symplectic(g1) and is_symplectic(g2)):
        return False
    # Sp_4(q) acts absolutely irreducibly on the natural module
    if not is_absolutely_irreducible(g1, g2):
        return False
    target = sp4_order(ctx.q)
    return group_order(g1, g2, strategy=strategy, seed=seed, target=target) == target


def is_abc_pair(g1: Mat4, g2: Mat4, a: int, b: int, c: int, seed: int = 0) -> bool:
    """|g1| divides a, |g2| divides b, |g1 g2| divides c, and <g1, g2> = Sp_4(q)."""
    if not ((g1**a).is_identity() and (g2**b).is_identity() and ((g1 * g2) ** c).is_identity()):
        return False
    return generates_sp4(g1, g2, seed=seed)


def psp_quotient_test(q: int, a: int, b: int, c: int, seed: int = 0, **kw) -> bool:
    """Whether PSp_4(q) (q odd) is an (a, b, c)-group, via (a, b, 2c)-generation of Sp_4(q).

    Only odd a, b are supported: then preimages of orders a, b exist and a generating
    pair of the quotient lifts to a generating pair of Sp_4(q), which has no subgroup of
    index 2.
    """
    from .census import find_abc_pair
    if q % 2 == 0:
        raise ValueError("psp_quotient_test needs odd q (PSp_4 = Sp_4 in characteristic 2)")
    if a % 2 == 0 or b % 2 == 0:
        raise NotImplementedError("unsupported: a and b must be odd")
    res = find_abc_pair(q, a, b, 2 * c, seed=seed, projective_c=c, **kw)
    return res.found
