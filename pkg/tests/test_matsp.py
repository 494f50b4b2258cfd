import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from trigen.census import find_abc_pair
from trigen.gf import GF, generated_subfield_degree
from trigen.matsp import (GroupWord, Mat4, ProductReplacement, ResourceError, charpoly,
                          charpoly_by_expansion, element_order, enveloping_dimension, eval_word,
                          generates_sp4, gram_matrix, group_order, is_abc_pair,
                          is_absolutely_irreducible, is_symplectic, mat_from_json,
                          order_of_symplectic, power_to_order, psp_quotient_test,
                          random_element_of_order, random_symplectic, sp4_order,
                          standard_generators, trace_witness, transvection)


def rand_mat(ctx, rng):
    return Mat4.from_codes(ctx, [rng.randrange(ctx.q) for _ in range(16)])


def test_sp4_order_values():
    assert sp4_order(2) == 720
    assert sp4_order(3) == 51840
    assert sp4_order(4) == 979200


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_charpoly_and_det_match_sympy(p):
    ctx = GF(p)
    rng = random.Random(p)
    X = sympy.Symbol("X")
    for _ in range(20):
        g = rand_mat(ctx, rng)
        M = sympy.Matrix([[int(x) for x in row] for row in g.rows()])
        assert int(g.det()) == int(M.det()) % p
        expect = [int(c) % p for c in M.charpoly(X).all_coeffs()]
        cp = charpoly(g)
        ours = [1, (-int(cp.chi3)) % p, int(cp.chi2), (-int(cp.chi1)) % p, int(cp.chi0)]
        assert ours == expect


@pytest.mark.parametrize("q", [4, 9, 25])
def test_charpoly_two_routes_agree(q):
    ctx = GF(q)
    rng = random.Random(q)
    for _ in range(30):
        g = rand_mat(ctx, rng)
        cp = charpoly(g)
        exp = charpoly_by_expansion(g)
        assert exp == [cp.chi0, -cp.chi1, cp.chi2, -cp.chi3, ctx.one()]


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 9, 16, 25])
def test_standard_generators_are_symplectic(q):
    ctx = GF(q)
    for g in standard_generators(ctx):
        assert is_symplectic(g)
    assert is_symplectic(random_symplectic(ctx, random.Random(0)))


def test_gram_matrix_is_alternating():
    J = gram_matrix(GF(5))
    assert J.transpose() == -J
    assert J * J == Mat4.scalar(GF(5), -1)


def test_transvection_is_symplectic_and_unipotent():
    ctx = GF(7)
    t = transvection(ctx, [1, 2, 3, 4], 5)
    assert is_symplectic(t)
    assert element_order(t) == 7


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([3, 5, 7, 9, 25]), st.integers(0, 10**6))
def test_symplectic_group_closure(q, seed):
    ctx = GF(q)
    rng = random.Random(seed)
    a, b = random_symplectic(ctx, rng, words=8), random_symplectic(ctx, rng, words=8)
    assert is_symplectic(a * b)
    assert is_symplectic(a.inverse())
    assert a * a.inverse() == Mat4.identity(ctx)
    assert a.det() == ctx.one()


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([5, 7, 9, 11, 16]), st.integers(0, 10**6))
def test_symplectic_charpoly_is_palindromic(q, seed):
    ctx = GF(q)
    g = random_symplectic(ctx, random.Random(seed), words=8)
    cp = charpoly(g)
    assert cp.chi1 == cp.chi3 and cp.chi0 == ctx.one()


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 81, 125, 32])
def test_trace_witness(q):
    ctx = GF(q)
    g = trace_witness(ctx)
    assert is_symplectic(g)
    assert generated_subfield_degree([g.trace()]) == ctx.m


def test_element_order_examples():
    ctx = GF(5)
    assert element_order(Mat4.identity(ctx)) == 1
    assert element_order(Mat4.scalar(ctx, -1)) == 2
    assert element_order(Mat4.diag(ctx, [2, 3, 2, 3])) == 4
    with pytest.raises(ValueError):
        element_order(Mat4.scalar(ctx, 0))


@pytest.mark.parametrize("q", [3, 4, 5, 7])
def test_element_order_routes_agree(q):
    ctx = GF(q)
    rng = random.Random(q)
    pr = ProductReplacement(standard_generators(ctx), rng)
    for _ in range(20):
        g = pr.next()
        n = order_of_symplectic(g)
        assert element_order(g, bound=sp4_order(q)) == n
        assert sp4_order(q) % n == 0


def test_power_to_order():
    ctx = GF(7)
    g = Mat4.diag(ctx, [3, 5, 1, 1])  # order 6
    assert element_order(power_to_order(g, 3)) == 3
    assert element_order(power_to_order(g, 2)) == 2
    assert power_to_order(g, 4) is None


def test_random_element_of_order():
    ctx = GF(5)
    pr = ProductReplacement(standard_generators(ctx), random.Random(1))
    g = random_element_of_order(13, pr)
    assert order_of_symplectic(g) == 13
    with pytest.raises(ResourceError):
        random_element_of_order(7, pr, tries=50)


def test_group_word_parse_and_eval():
    w = GroupWord.parse("1 -2 1")
    assert w.letters == (1, -2, 1)
    assert len(GroupWord([1, -1, 2])) == 1
    ctx = GF(5)
    rng = random.Random(2)
    a, b = random_symplectic(ctx, rng), random_symplectic(ctx, rng)
    assert eval_word(w, a, b) == a * b.inverse() * a
    assert eval_word(w * w.inverse(), a, b) == Mat4.identity(ctx)


def test_mat_json_roundtrip():
    ctx = GF(9)
    g = trace_witness(ctx)
    assert mat_from_json(g.dumps()) == g
    assert mat_from_json(g.to_json(), ctx) == g


def test_absolute_irreducibility():
    ctx = GF(5)
    assert enveloping_dimension(Mat4.identity(ctx), Mat4.identity(ctx)) == 1
    d = Mat4.diag(ctx, [2, 3, 4, 4])
    assert not is_absolutely_irreducible(d, d)
    # diagonal matrices preserve coordinate lines
    assert enveloping_dimension(d, Mat4.diag(ctx, [1, 2, 3, 4])) == 4


@pytest.mark.parametrize("q", [2, 3])
def test_standard_generators_generate(q):
    ctx = GF(q)
    gens = standard_generators(ctx)
    from trigen.stabchain import bfs_closure, schreier_sims_order
    assert bfs_closure(gens) == sp4_order(q)
    assert schreier_sims_order(gens, seed=1) == sp4_order(q)


def test_group_order_strategies_agree_on_subgroups():
    ctx = GF(3)
    rng = random.Random(5)
    pr = ProductReplacement(standard_generators(ctx), rng)
    for _ in range(6):
        a = pr.next()
        b = power_to_order(pr.next(), 2) or a
        bfs = group_order(a, b, strategy="bfs")
        assert group_order(a, b, strategy="schreier", seed=3) == bfs
        assert sp4_order(3) % bfs == 0
    with pytest.raises(ValueError):
        group_order(a, b, strategy="nope")


def test_is_abc_pair_sp4_7():
    res = find_abc_pair(7, 3, 3, 7, seed=0, max_samples=1500)
    assert res.found
    g1, g2 = res.g1, res.g2
    assert is_abc_pair(g1, g2, 3, 3, 7)
    assert is_absolutely_irreducible(g1, g2) and enveloping_dimension(g1, g2) == 16
    assert generates_sp4(g1, g2, strategy="schreier", seed=4)
    assert order_of_symplectic(g1) == 3 and order_of_symplectic(g2) == 3
    assert not is_abc_pair(g1, g2, 3, 3, 5)
    assert not is_abc_pair(g1, g1, 3, 3, 7)


def test_psp_quotient_test_arguments():
    with pytest.raises(ValueError):
        psp_quotient_test(4, 3, 3, 5)
    with pytest.raises(NotImplementedError):
        psp_quotient_test(5, 2, 3, 5)
