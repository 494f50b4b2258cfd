import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trigen._util import divisors, totient
from trigen.campaigns import conforming_pairs, order3_batch
from trigen.gf import GF, generated_subfield_degree
from trigen.matsp import Mat4, character_field_degree, eval_word
from trigen.traceid import (CASES, NotConforming, TracePoly, TraceSymbol, TraceWord,
                            canonical_cyclic, canonical_words, charfield_generators, classify_case,
                            derived_identity, evaluate, free_reduce_cyclic, generator_set,
                            order3_reduce, parse_indices, procesi_lhs, procesi_sym5, reduce_trace,
                            rho_eval, transcribed_identity)


def necklaces(n, k):
    return sum(totient(d) * k ** (n // d) for d in divisors(n)) // n


def test_parse_indices():
    assert parse_indices("12-1-23") == (1, 2, -1, -2, 3)
    assert parse_indices("") == ()


def test_free_reduce_cyclic():
    assert free_reduce_cyclic([1, -1]) == ()
    assert free_reduce_cyclic([2, 1, 2, -2]) == (2, 1)
    assert free_reduce_cyclic([-2, 1, 2]) == (1,)


def test_order3_reduce():
    assert order3_reduce([1, 1]) == (-1,)
    assert order3_reduce([1, 1, 1]) == ()
    assert order3_reduce([1, 2, -2, 1]) == (-1,)


def test_canonical_cyclic_is_rotation_invariant():
    w = (1, 2, -1, 2)
    for i in range(len(w)):
        assert canonical_cyclic(w[i:] + w[:i]) == canonical_cyclic(w)


def test_canonical_word_counts_match_necklace_formula():
    # cyclically reduced order-3 words alternate between the two generators, so those of
    # length 2k are necklaces of length k over the 4 exponent pairs
    expect = 4
    for n in range(1, 11):
        if n % 2 == 0:
            expect += necklaces(n // 2, 4)
        assert len(canonical_words(n)) == expect
    assert len(canonical_words(10)) == 320
    assert len(canonical_words(10, symplectic=True)) <= 320


def test_generator_set_size():
    X = generator_set()
    assert len(X) == len(canonical_words(4)) + len(canonical_words(2)) == 26
    assert len(set(X)) == 26


def test_trace_symbol_parse():
    s = TraceSymbol.parse("t(1,-2)")
    assert s.kind == "t" and s.word == (1, -2)
    assert str(s) == "t(1,-2)"
    with pytest.raises(ValueError):
        TraceSymbol("x", (1,))


def test_tracepoly_arithmetic_and_json():
    a = TracePoly.symbol(TraceSymbol.parse("t(1)"))
    b = TracePoly.symbol(TraceSymbol.parse("c2(1,2)"))
    f = a * a - 3 * b + 2
    assert f.degree() == 2
    assert TracePoly.from_json(f.to_json()) == f
    assert (f - f).is_zero()
    assert (2 * f).content() == 2


def test_reduce_trace_examples():
    assert str(reduce_trace((1,))) == "t(1)"
    assert str(reduce_trace((1, 2))) == "t(1,2)"
    assert reduce_trace(()) == TracePoly.const(4)
    with pytest.raises(ValueError):
        reduce_trace(TraceWord((1, 2), symplectic=True))


def _random_order3(ctx, rng):
    arr = order3_batch(ctx, 1, np.random.default_rng(rng.randrange(2**32)))[0]
    return Mat4.from_codes(ctx, arr.reshape(-1).tolist())


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([7, 13, 25, 11]), st.integers(0, 10**6),
       st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=12))
def test_reduce_trace_matches_direct_trace(q, seed, letters):
    ctx = GF(q)
    rng = random.Random(seed)
    g1, g2 = _random_order3(ctx, rng), _random_order3(ctx, rng)
    direct = eval_word(letters, g1, g2).trace()
    assert evaluate(reduce_trace(letters), g1, g2) == direct


def test_reduced_polynomials_use_only_generators():
    X = set(generator_set())
    for w in canonical_words(8):
        assert reduce_trace(w).symbols() <= X


@pytest.mark.parametrize("k", [1, 2, 3])
def test_transcribed_identities_equal_derived(k):
    assert transcribed_identity(k) == derived_identity(k)


@pytest.mark.parametrize("k", [2, 3])
def test_uncorrected_identities_differ(k):
    assert transcribed_identity(k, corrected=False) != derived_identity(k)


def _rand_q_mat(rng):
    return tuple(tuple(Fraction(rng.randint(-3, 3)) for _ in range(4)) for _ in range(4))


def test_procesi_rational_examples():
    rng = random.Random(0)
    Z = [_rand_q_mat(rng) for _ in range(5)]
    assert procesi_sym5(*Z) == 0
    ctx = GF(7)
    g = Mat4.diag(ctx, [1, 2, 3, 4])
    h = Mat4.from_rows(ctx, [[1, 1, 0, 2], [0, 1, 1, 0], [0, 0, 1, 1], [0, 0, 0, 1]])
    for k in (1, 2, 3):
        assert procesi_lhs(k, g, h, g * h).is_zero()


def test_uncorrected_identity_fails_numerically():
    ctx = GF(101)
    rng = random.Random(1)
    mats = []
    while len(mats) < 3:
        m = Mat4.from_codes(ctx, [rng.randrange(101) for _ in range(16)])
        if not m.det().is_zero():
            mats.append(m)
    assert not procesi_lhs(2, *mats, corrected=False).is_zero()


def test_procesi_lhs_rejects_bad_input():
    ctx = GF(5)
    with pytest.raises(ValueError):
        procesi_lhs(4, *[Mat4.identity(ctx)] * 3)
    with pytest.raises(ValueError):
        procesi_lhs(1, Mat4.scalar(ctx, 0), Mat4.identity(ctx), Mat4.identity(ctx))


def test_rho_eval_examples():
    F7, F11 = GF(7), GF(11)
    assert rho_eval(F7(0), F7(0), F7(0)).is_zero()
    assert rho_eval(F11(0), F11(0), F11(0)) == F11(7)
    # integer arguments work too; at (x, y) = (4, 6) the cubic is (Z + 5)(Z - 1)^2
    assert rho_eval(4, 6, 1) == rho_eval(4, 6, -5) == 0
    assert rho_eval(4, 6, 2) == 7


@pytest.mark.parametrize("q", [5, 7, 11, 13, 25])
def test_charfield_generators_on_conforming_pairs(q):
    ctx = GF(q)
    rng = random.Random(q)
    n = 0
    for a, b in conforming_pairs(ctx, 20, rng):
        n += 1
        x, y, z = charfield_generators(a, b)
        assert rho_eval(x, y, z).is_zero()
        assert generated_subfield_degree([x, y, z]) == character_field_degree(a, b)
        rep = classify_case(a, b)
        assert rep.case in CASES and rep.ok
    assert n == 20


def test_not_conforming_inputs():
    ctx = GF(7)
    ident = Mat4.identity(ctx)
    with pytest.raises(NotConforming):
        charfield_generators(ident, ident)
    d = Mat4.diag(ctx, [2, 4, 2, 4])  # order 3 and symplectic, but reducible
    with pytest.raises(NotConforming):
        classify_case(d, d)
