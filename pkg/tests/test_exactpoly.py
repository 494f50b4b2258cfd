import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from trigen.exactpoly import (FieldPoly, IntPoly, factor, gcd_q, is_irreducible, lcm_q,
                              roots_in_ext, roots_over, squarefree_decomposition)
from trigen.gf import GF, make_ext, prime_field

T = sympy.Symbol("T")


def P(*coeffs):
    return IntPoly(coeffs)


def test_intpoly_strip_and_degree():
    f = IntPoly([1, 2, 0, 0])
    assert f.coeffs == (1, 2)
    assert f.degree == 1
    assert IntPoly([]).is_zero()


def test_gcd_examples():
    assert gcd_q(P(-4, 1), P(-4, 1)) == P(-4, 1)
    assert gcd_q(P(-16, 0, 1), P(0, -4, 1)) == P(-4, 1)
    assert gcd_q(P(2, 1), P(-1, 1)) == P(1)
    assert gcd_q(IntPoly(), IntPoly()).is_zero()


def test_lcm_examples():
    assert lcm_q([P(-4, 1)]) == P(-4, 1)
    assert lcm_q([P(-4, 1), P(0, 1), P(4, 1)]) == P(0, -16, 0, 1)
    assert lcm_q([P(-1, 1), P(-1, 1), P(2, 1)]) == P(-2, 1, 1)


def test_lcm_rejects_bad_input():
    with pytest.raises(ValueError):
        lcm_q([])
    with pytest.raises(ValueError):
        lcm_q([P(1, 1), IntPoly()])


def test_intpoly_json_roundtrip():
    f = P(0, -16, 0, 1)
    assert f.to_json() == ["0", "-16", "0", "1"]
    assert IntPoly.from_json(f.to_json()) == f


small_polys = st.lists(st.integers(-20, 20), min_size=1, max_size=6).map(IntPoly)


@settings(max_examples=60, deadline=None)
@given(small_polys, small_polys)
def test_gcd_matches_sympy(a, b):
    g = gcd_q(a, b)
    expect = sympy.Poly(sympy.gcd(sympy.Poly(list(reversed(a.coeffs)) or [0], T),
                                  sympy.Poly(list(reversed(b.coeffs)) or [0], T)), T)
    if g.is_zero():
        assert expect.is_zero
        return
    # both primitive up to sign
    ours = sympy.Poly(list(reversed(g.coeffs)), T)
    assert ours.degree() == expect.degree()
    assert sympy.div(ours, expect)[1].is_zero


@settings(max_examples=40, deadline=None)
@given(small_polys, small_polys)
def test_gcd_divides_inputs(a, b):
    g = gcd_q(a, b)
    if g.is_zero():
        return
    gs = sympy.Poly(list(reversed(g.coeffs)), T)
    for f in (a, b):
        if not f.is_zero():
            assert sympy.rem(sympy.Poly(list(reversed(f.coeffs)), T), gs).is_zero


def test_factor_examples():
    F2, F3, F5 = prime_field(2), prime_field(3), prime_field(5)
    fac = factor(FieldPoly.from_ints(F2, [1, 0, 1]))
    assert [(f.c, e) for f, e in fac] == [([1, 1], 2)]
    fac = factor(FieldPoly.from_ints(F3, [1, 0, 1]))
    assert [(f.c, e) for f, e in fac] == [([1, 0, 1], 1)]
    fac = factor(FieldPoly.from_ints(F5, [0, -16, 0, 1]))
    assert sorted(tuple(f.c) for f, _ in fac) == [(0, 1), (1, 1), (4, 1)]


def test_factor_rejects_zero():
    with pytest.raises(ValueError):
        factor(FieldPoly(prime_field(3), []))


@pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
def test_factor_matches_sympy(p):
    rng = random.Random(p)
    Fp = prime_field(p)
    for _ in range(25):
        coeffs = [rng.randrange(p) for _ in range(rng.randint(2, 9))] + [1]
        f = FieldPoly.from_ints(Fp, coeffs)
        ours = sorted((tuple(g.c), e) for g, e in factor(f, seed=p))
        _, theirs = sympy.factor_list(sympy.Poly(list(reversed(coeffs)), T, modulus=p))
        expect = []
        for g, e in theirs:
            g = g.monic()
            expect.append((tuple(int(c) % p for c in reversed(g.all_coeffs())), e))
        assert ours == sorted(expect)


@pytest.mark.parametrize("q", [4, 9, 25, 8])
def test_factor_expands_back_over_extensions(q):
    ctx = GF(q)
    rng = random.Random(q)
    for _ in range(10):
        f = FieldPoly.from_codes(ctx, [rng.randrange(q) for _ in range(6)] + [1])
        fac = factor(f, seed=1)
        assert fac.expand().c == f.c
        for g, _ in fac:
            assert is_irreducible(g)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=2, max_size=5),
       st.lists(st.integers(0, 6), min_size=2, max_size=5))
def test_factor_of_product_is_union(a, b):
    F7 = prime_field(7)
    f, g = FieldPoly.from_ints(F7, a + [1]), FieldPoly.from_ints(F7, b + [1])
    merged = {}
    for h in (f, g):
        for irr, e in factor(h):
            merged[tuple(irr.c)] = merged.get(tuple(irr.c), 0) + e
    assert {tuple(irr.c): e for irr, e in factor(f * g)} == merged


def test_squarefree_decomposition_char_p():
    F3 = prime_field(3)
    # (T+1)^3 (T+2) over F_3 has a p-th power part
    f = FieldPoly.from_ints(F3, [1, 1]) ** 3 * FieldPoly.from_ints(F3, [2, 1])
    parts = {e: g.c for g, e in squarefree_decomposition(f)}
    assert parts == {1: [2, 1], 3: [1, 1]}


def test_roots_in_ext_examples():
    F3 = prime_field(3)
    f = FieldPoly.from_ints(F3, [1, 0, 1])
    assert roots_in_ext(f, 1) == []
    roots = roots_in_ext(f, 2)
    assert len(set(roots)) == 2
    for r in roots:
        assert (r * r + 1).is_zero()
    assert [int(r) for r in roots_in_ext(FieldPoly.from_ints(F3, [-1, 1]), 3)] == [1]


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2), (5, 2), (7, 3)])
def test_roots_in_ext_property(p, m):
    rng = random.Random(p * m)
    Fp = prime_field(p)
    target = make_ext(p, m)
    for _ in range(10):
        f = FieldPoly.from_ints(Fp, [rng.randrange(p) for _ in range(5)] + [1])
        roots = roots_in_ext(f, m, target=target)
        assert len(roots) <= f.degree
        for r in roots:
            acc = target.zero()
            for c in reversed(f.c):
                acc = acc * r + c
            assert acc.is_zero()
        # exhaustive count over the target field agrees
        brute = 0
        for x in target.elements():
            acc = target.zero()
            for c in reversed(f.c):
                acc = acc * x + c
            brute += acc.is_zero()
        assert len(set(roots)) == brute


def test_roots_over_multiplicity():
    F5 = prime_field(5)
    f = FieldPoly.from_ints(F5, [-1, 1]) ** 2 * FieldPoly.from_ints(F5, [1, 0, 1])
    assert sorted(int(r) for r in roots_over(f)) == [1, 1, 2, 3]
