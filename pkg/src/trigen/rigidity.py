"""Rigidity of hyperbolic triples for simple algebraic groups.

A triple (a, b, c) is rigid, reducible or nonrigid for G according as the codimension
sum S = d_a + d_b + d_c equals, exceeds or falls short of dim G, where d_u is the
minimal centralizer dimension of an element of order dividing u.  For adjoint type A
d_u has a closed form; for the other families the classification is carried as
tabulated data (rigid and reducible rows) with provenance strings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional

from ._util import prime_factors

REDUCIBLE = "reducible"
RIGID = "rigid"
NONRIGID = "nonrigid"

G_REDUCIBLE = "G-reducible"
G_RIGID = "G-rigid"
G_NONRIGID = "G-nonrigid"

ADJOINT = "adjoint"
SIMPLY_CONNECTED = "simply_connected"
OTHER = "other"

MINIMAL_TRIPLES = ((2, 3, 7), (2, 4, 5), (3, 3, 4))


@dataclass(frozen=True)
class Triple:
    a: int
    b: int
    c: int

    def __post_init__(self):
        vals = sorted((self.a, self.b, self.c))
        if vals[0] < 1:
            raise ValueError("triple entries must be positive integers")
        object.__setattr__(self, "a", vals[0])
        object.__setattr__(self, "b", vals[1])
        object.__setattr__(self, "c", vals[2])

    @classmethod
    def of(cls, t) -> "Triple":
        if isinstance(t, Triple):
            return t
        if isinstance(t, str):
            t = [int(x) for x in t.replace(" ", "").split(",")]
        a, b, c = t
        return cls(int(a), int(b), int(c))

    @property
    def hyperbolic(self) -> bool:
        # 1/a + 1/b + 1/c < 1, cleared of denominators
        return self.b * self.c + self.a * self.c + self.a * self.b < self.a * self.b * self.c

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __le__(self, other: "Triple") -> bool:
        return self.a <= other.a and self.b <= other.b and self.c <= other.c

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


_COXETER = {"G": {2: 6}, "F": {4: 12}, "E": {6: 12, 7: 18, 8: 30}}
_EXC_DIM = {("G", 2): 14, ("F", 4): 52, ("E", 6): 78, ("E", 7): 133, ("E", 8): 248}
CARTAN_DET = {"A": None, "B": 2, "C": 2, "D": 4, ("G", 2): 1, ("F", 4): 1,
              ("E", 6): 3, ("E", 7): 2, ("E", 8): 1}


@dataclass(frozen=True)
class GroupDescriptor:
    """A simple algebraic group: Lie type, rank, isogeny type and (optionally) characteristic."""

    family: str
    rank: int
    isogeny: str = ADJOINT
    p: Optional[int] = None

    def __post_init__(self):
        fam, l = self.family, self.rank
        ok = {"A": l >= 1, "B": l >= 2, "C": l >= 2, "D": l >= 4,
              "G": l == 2, "F": l == 4, "E": l in (6, 7, 8)}
        if fam not in ok or not ok[fam]:
            raise ValueError(f"no simple group of type {fam}{l}")
        if self.isogeny not in (ADJOINT, SIMPLY_CONNECTED, OTHER):
            raise ValueError(f"unknown isogeny type {self.isogeny!r}")

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def coxeter_h(self) -> int:
        fam, l = self.family, self.rank
        if fam == "A":
            return l + 1
        if fam in "BC":
            return 2 * l
        if fam == "D":
            return 2 * l - 2
        return _COXETER[fam][l]

    @property
    def dim(self) -> int:
        fam, l = self.family, self.rank
        if fam == "A":
            return l * (l + 2)
        if fam in "BC":
            return l * (2 * l + 1)
        if fam == "D":
            return l * (2 * l - 1)
        return _EXC_DIM[(fam, l)]

    @property
    def cartan_det(self) -> int:
        if self.family == "A":
            return self.rank + 1
        d = CARTAN_DET.get(self.family)
        return d if d is not None else CARTAN_DET[(self.family, self.rank)]

    @property
    def both_isogenies(self) -> bool:
        """True when the simply connected and adjoint groups coincide (trivial centre)."""
        return self.cartan_det == 1


def type_A(rank: int, isogeny: str = ADJOINT, p: Optional[int] = None) -> GroupDescriptor:
    return GroupDescriptor("A", rank, isogeny, p)


@dataclass(frozen=True)
class TripleVerdict:
    triple: Triple
    group: GroupDescriptor
    verdict: str
    S: int
    D: int
    du: dict = field(default_factory=dict)

    def __post_init__(self):
        expect = RIGID if self.D == 0 else (REDUCIBLE if self.D > 0 else NONRIGID)
        if expect != self.verdict:
            raise ValueError(f"verdict {self.verdict} inconsistent with D = {self.D}")


# ---------------------------------------------------------------------------
# adjoint type A

def du_type_A(rank: int, u: int) -> int:
    """Minimal centralizer dimension of an element of order dividing u in PGL_{rank+1}."""
    if rank < 1 or u < 1:
        raise ValueError("need rank >= 1 and u >= 1")
    h = rank + 1
    z, e = divmod(h, u)
    return z * z * u + e * (2 * z + 1) - 1


def classify_adjoint_A(rank: int, triple) -> TripleVerdict:
    t = Triple.of(triple)
    if not t.hyperbolic:
        raise ValueError(f"triple {t} is not hyperbolic")
    g = type_A(rank)
    du = {u: du_type_A(rank, u) for u in t.as_tuple()}
    S = du[t.a] + du[t.b] + du[t.c]
    D = S - g.dim
    verdict = RIGID if D == 0 else (REDUCIBLE if D > 0 else NONRIGID)
    return TripleVerdict(t, g, verdict, S, D, du)


def F_bound(h: int, u: int) -> Fraction:
    """Upper bound for d_u(A_{h-1}) obtained by maximizing over the remainder e."""
    return Fraction(u * u - 4 * u + 4 * h * h, 4 * u)


def nonrigidity_bound(h: int, triple) -> Fraction:
    """Exact upper bound F(a) + F(b) + F(c) - dim for D, adjoint type A with Coxeter number h."""
    t = Triple.of(triple)
    if t.as_tuple() not in MINIMAL_TRIPLES:
        raise ValueError(f"unsupported triple {t}: expected one of {MINIMAL_TRIPLES}")
    if h < 2:
        raise ValueError("need h >= 2")
    return F_bound(h, t.a) + F_bound(h, t.b) + F_bound(h, t.c) - (h * h - 1)


# ---------------------------------------------------------------------------
# class dimensions in GL_n / SL_n

def _check_partition(n: int, parts) -> list[int]:
    parts = [int(x) for x in parts]
    if any(x < 0 for x in parts) or sum(parts) != n:
        raise ValueError(f"{parts} is not a partition of {n}")
    return [x for x in parts if x]


def conjugate_partition(parts) -> list[int]:
    parts = sorted((x for x in parts if x), reverse=True)
    return [sum(1 for x in parts if x > i) for i in range(parts[0] if parts else 0)]


def class_dim_semisimple(n: int, mults) -> int:
    """Class dimension of a diagonalizable element with eigenvalue multiplicities mults."""
    mults = _check_partition(n, mults)
    return n * n - sum(m * m for m in mults)


def class_dim_unipotent(n: int, jordan) -> int:
    """Class dimension of a unipotent element with Jordan block sizes jordan."""
    jordan = _check_partition(n, jordan)
    return n * n - sum(x * x for x in conjugate_partition(jordan))


def g_triple_classify(dimH: int, maxdims) -> str:
    """Compare the sum of maximal class dimensions with 2 dim H."""
    s = sum(maxdims)
    if s < 2 * dimH:
        return G_REDUCIBLE
    if s == 2 * dimH:
        return G_RIGID
    return G_NONRIGID


# ---------------------------------------------------------------------------
# tabulated classification

Pred = Callable[[Triple], bool]


def _fixed(*ts) -> Pred:
    wanted = {tuple(sorted(t)) for t in ts}
    return lambda t: t.as_tuple() in wanted


def _fam(a=None, b=None, b_min=None, c_min=None, a_min=None) -> Pred:
    """Family of triples with some entries fixed and lower bounds on others."""
    def pred(t: Triple) -> bool:
        if a is not None and t.a != a:
            return False
        if b is not None and t.b != b:
            return False
        if a_min is not None and t.a < a_min:
            return False
        if b_min is not None and t.b < b_min:
            return False
        if c_min is not None and t.c < c_min:
            return False
        return True
    return pred


def _any(*preds) -> Pred:
    return lambda t: any(p(t) for p in preds)


ANY_P = "any"
P_ODD = "p!=2"
P_TWO = "p=2"


def _p_matches(cond: str, p: int) -> bool:
    if cond == ANY_P:
        return True
    if cond == P_ODD:
        return p != 2
    return p == 2


@dataclass(frozen=True)
class TableRow:
    table: int
    family: str
    rank: int
    pcond: str
    verdict: str
    pred: Pred
    text: str

    @property
    def provenance(self) -> str:
        return f"table {self.table}: {self.family}{self.rank}, {self.pcond}, {self.text}"


def _rows() -> list[TableRow]:
    R = []

    def add(table, fam, rank, pcond, verdict, pred, text):
        R.append(TableRow(table, fam, rank, pcond, verdict, pred, text))

    # rigid triples, adjoint type
    add(1, "A", 1, ANY_P, RIGID, lambda t: True, "(a,b,c)")
    add(1, "A", 2, ANY_P, RIGID, _fam(a=2), "(2,b,c)")
    add(1, "A", 3, ANY_P, RIGID, _fam(a=2, b=3), "(2,3,c)")
    add(1, "A", 4, ANY_P, RIGID, _fam(a=2, b=3), "(2,3,c)")
    add(1, "C", 2, ANY_P, RIGID, _any(_fam(a=2, b=3), _fam(a=3, b=3)), "(2,3,c), (3,3,c)")
    add(1, "G", 2, ANY_P, RIGID, _fixed((2, 4, 5), (2, 5, 5)), "(2,4,5), (2,5,5)")

    # reducible triples, simply connected type
    add(3, "A", 1, P_ODD, REDUCIBLE, _fam(a=2), "(2,b,c)")
    add(3, "C", 2, P_ODD, REDUCIBLE,
        _any(_fam(a=2, b=3), _fam(a=2, b=4), _fixed((3, 3, 4), (3, 4, 4), (4, 4, 4))),
        "(2,3,c), (2,4,c), (3,3,4), (3,4,4), (4,4,4)")
    add(3, "C", 3, P_ODD, REDUCIBLE,
        _any(_fam(a=2, b=3), _fam(a=2, b=4), _fixed((2, 5, 5), (2, 5, 6), (2, 6, 6))),
        "(2,3,c), (2,4,c), (2,5,5), (2,5,6), (2,6,6)")
    add(3, "C", 4, P_ODD, REDUCIBLE, _fixed((2, 3, 7), (2, 3, 8), (2, 4, 5), (2, 4, 6)),
        "(2,3,7), (2,3,8), (2,4,5), (2,4,6)")
    add(3, "C", 5, P_ODD, REDUCIBLE,
        _fixed((2, 3, 7), (2, 3, 8), (2, 3, 9), (2, 3, 10), (2, 4, 5), (2, 4, 6)),
        "(2,3,7), (2,3,8), (2,3,9), (2,3,10), (2,4,5), (2,4,6)")
    for l in (6, 7):
        add(3, "C", l, P_ODD, REDUCIBLE, _fixed((2, 3, 7), (2, 3, 8), (2, 4, 5)),
            "(2,3,7), (2,3,8), (2,4,5)")
    for l in (8, 9, 11):
        add(3, "C", l, P_ODD, REDUCIBLE, _fixed((2, 3, 7)), "(2,3,7)")

    # rigid triples, simply connected type
    add(4, "A", 1, P_TWO, RIGID, lambda t: True, "(a,b,c)")
    add(4, "A", 1, P_ODD, RIGID, _fam(a_min=3), "(a,b,c) a>=3")
    add(4, "A", 2, ANY_P, RIGID, _fam(a=2), "(2,b,c)")
    add(4, "A", 3, P_TWO, RIGID, _fam(a=2, b=3), "(2,3,c)")
    add(4, "A", 3, P_ODD, RIGID,
        _any(_fam(a=2, b=3), _fam(a=2, b=4), _fixed((3, 3, 4), (3, 4, 4), (4, 4, 4))),
        "(2,3,c), (2,4,c), (3,3,4), (3,4,4), (4,4,4)")
    add(4, "A", 4, ANY_P, RIGID, _fam(a=2, b=3), "(2,3,c)")
    add(4, "A", 5, P_ODD, RIGID, _any(_fam(a=2, b=3), _fixed((2, 4, 5), (2, 4, 6))),
        "(2,3,c), (2,4,5), (2,4,6)")
    add(4, "A", 9, P_ODD, RIGID, _fixed((2, 3, 7)), "(2,3,7)")
    add(4, "C", 2, P_TWO, RIGID, _any(_fam(a=2, b=3), _fam(a=3, b=3)), "(2,3,c), (3,3,c)")
    add(4, "C", 2, P_ODD, RIGID,
        _any(_fam(a=2, b_min=5), _fam(a=3, b=3, c_min=5), _fam(a=3, b=4, c_min=5),
             _fam(a=4, b=4, c_min=5)),
        "(2,b,c) b>=5, (3,3,c) c>=5, (3,4,c) c>=5, (4,4,c) c>=5")
    add(4, "C", 3, P_ODD, RIGID,
        _any(_fam(a=2, b=5, c_min=7), _fam(a=2, b=6, c_min=7),
             _fixed((3, 3, 4), (3, 4, 4), (4, 4, 4))),
        "(2,5,c) c>=7, (2,6,c) c>=7, (3,3,4), (3,4,4), (4,4,4)")
    add(4, "C", 4, P_ODD, RIGID,
        _any(_fam(a=2, b=3, c_min=9), _fixed((2, 4, 7), (2, 4, 8), (2, 5, 5), (2, 5, 6), (2, 6, 6))),
        "(2,3,c) c>=9, (2,4,7), (2,4,8), (2,5,5), (2,5,6), (2,6,6)")
    add(4, "C", 5, P_ODD, RIGID,
        _any(_fam(a=2, b=3, c_min=11), _fixed((2, 4, 7), (2, 4, 8))),
        "(2,3,c) c>=11, (2,4,7), (2,4,8)")
    for l in (6, 7):
        add(4, "C", l, P_ODD, RIGID, _fixed((2, 3, 9), (2, 3, 10), (2, 4, 6)),
            "(2,3,9), (2,3,10), (2,4,6)")
    for l in (8, 9):
        add(4, "C", l, P_ODD, RIGID, _fixed((2, 3, 8), (2, 4, 5)), "(2,3,8), (2,4,5)")
    for l in (10, 12, 13):
        add(4, "C", l, P_ODD, RIGID, _fixed((2, 3, 7)), "(2,3,7)")
    add(4, "B", 5, P_ODD, RIGID, _fixed((2, 3, 7)), "(2,3,7)")
    add(4, "D", 6, P_ODD, RIGID, _fixed((2, 3, 7)), "(2,3,7)")
    return R


TABLE_ROWS = _rows()


def table_rows(which: int) -> list[TableRow]:
    if which not in (1, 3, 4):
        raise ValueError("tables are 1 (adjoint rigid), 3 (reducible), 4 (simply connected rigid)")
    return [r for r in TABLE_ROWS if r.table == which]


def _tables_for(group: GroupDescriptor) -> tuple[int, ...]:
    if group.both_isogenies:
        # G2, F4, E8: one group, so both lists apply
        return (1, 3, 4)
    if group.isogeny == ADJOINT:
        return (1,)
    if group.isogeny == SIMPLY_CONNECTED:
        return (3, 4)
    return ()


def _lookup_at(group: GroupDescriptor, t: Triple, p: int) -> tuple[str, Optional[TableRow]]:
    tables = _tables_for(group)
    for table, verdict in ((3, REDUCIBLE), (1, RIGID), (4, RIGID)):
        if table not in tables:
            continue
        for row in TABLE_ROWS:
            if (row.table == table and row.family == group.family and row.rank == group.rank
                    and _p_matches(row.pcond, p) and row.pred(t)):
                return verdict, row
    return NONRIGID, None


def table_lookup_row(group: GroupDescriptor, triple) -> tuple[Optional[str], Optional[TableRow]]:
    """Verdict and matching table row; (None, None) when the tables do not cover the group."""
    t = Triple.of(triple)
    if not t.hyperbolic:
        raise ValueError(f"triple {t} is not hyperbolic")
    if not _tables_for(group):
        return None, None
    if group.p is not None:
        return _lookup_at(group, t, group.p)
    # characteristic unspecified: answer only if it does not matter
    v2, r2 = _lookup_at(group, t, 2)
    vo, ro = _lookup_at(group, t, 3)
    if v2 != vo:
        raise ValueError(f"verdict for {group.name} {t} depends on the characteristic; set p")
    return vo, ro


def table_lookup(group: GroupDescriptor, triple) -> Optional[str]:
    return table_lookup_row(group, triple)[0]


def never_generated(group: GroupDescriptor, triple) -> bool:
    """True when a reducible row applies, so the finite groups G(p^r) are never (a,b,c)-groups."""
    return table_lookup(group, triple) == REDUCIBLE


def excluded_primes(group: GroupDescriptor, triple) -> list[int]:
    """Primes dividing a*b*c*d, d the Cartan determinant."""
    t = Triple.of(triple)
    return prime_factors(t.a * t.b * t.c * group.cartan_det)


def hyperbolic_triples(cmax: int, amin: int = 2) -> Iterator[Triple]:
    for a in range(amin, cmax + 1):
        for b in range(a, cmax + 1):
            for c in range(b, cmax + 1):
                t = Triple(a, b, c)
                if t.hyperbolic:
                    yield t
