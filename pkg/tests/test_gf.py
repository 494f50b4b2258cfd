import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from trigen.exactpoly import FieldPoly, is_irreducible
from trigen.gf import (GF, FieldCtx, FieldError, dumps_element, element_degree, element_from_json,
                       embed, generated_subfield_degree, make_ext, prime_field)

FIELDS = [2, 3, 4, 5, 8, 9, 16, 25, 27, 49, 1024, 3**7]


def test_make_ext_examples():
    F3 = make_ext(3, 1)
    assert F3.q == 3 and F3.m == 1 and F3.modulus is None
    F4 = make_ext(2, 2)
    assert F4.modulus == (1, 1, 1)
    F625 = make_ext(5, 4)
    assert F625.q == 625
    assert is_irreducible(FieldPoly.from_ints(prime_field(5), F625.modulus))


def test_make_ext_is_deterministic_per_seed():
    assert make_ext(7, 3, seed=4) == make_ext(7, 3, seed=4)
    with pytest.raises(FieldError):
        make_ext(6, 2)
    with pytest.raises(FieldError):
        FieldCtx(2, [1, 0, 1])  # T^2 + 1 = (T + 1)^2


def test_gf_rejects_non_prime_power():
    with pytest.raises(FieldError):
        GF(225)


@pytest.mark.parametrize("q", FIELDS)
def test_field_axioms_on_samples(q):
    ctx = GF(q)
    rng = random.Random(q)
    for _ in range(200):
        a, b, c = ctx.random(rng), ctx.random(rng), ctx.random(rng)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) - b == a
        assert a + (-a) == ctx.zero()
        if not a.is_zero():
            assert a * a.inverse() == ctx.one()


@pytest.mark.parametrize("q", [4, 9, 25, 27, 1024])
def test_table_and_digit_multiplication_agree(q):
    ctx = GF(q)
    rng = random.Random(1)
    for _ in range(300):
        a, b = rng.randrange(q), rng.randrange(q)
        assert ctx.mul(a, b) == ctx._slow_mul(a, b)


@pytest.mark.parametrize("q", FIELDS)
def test_frobenius_is_a_ring_map(q):
    ctx = GF(q)
    rng = random.Random(q + 1)
    for _ in range(100):
        a, b = ctx.random(rng), ctx.random(rng)
        assert (a + b).frobenius() == a.frobenius() + b.frobenius()
        assert (a * b).frobenius() == a.frobenius() * b.frobenius()
        assert a.frobenius() == a ** ctx.p


def test_primitive_element_has_full_order():
    for q in (4, 9, 25, 16, 49):
        ctx = GF(q)
        w = ctx.primitive_element()
        orders = [k for k in range(1, q) if (w ** k) == ctx.one()]
        assert orders[0] == q - 1


def test_element_degree_examples():
    F4 = GF(4)
    assert element_degree(F4.zero()) == 1
    assert element_degree(F4.primitive_element()) == 2
    # F_8 with w^3 = w + 1
    F8 = FieldCtx(2, [1, 1, 0, 1])
    w = F8.gen()
    d = element_degree(w + w * w)
    assert 3 % d == 0
    assert (w + w * w) ** (2 ** d) == w + w * w


@pytest.mark.parametrize("q", FIELDS)
def test_element_degree_divides_m_and_counts_subfields(q):
    ctx = GF(q)
    counts = {}
    for x in ctx.elements():
        d = element_degree(x)
        assert ctx.m % d == 0
        counts[d] = counts.get(d, 0) + 1
        if sum(counts.values()) > 5000:
            return
    # elements of degree dividing s are exactly the subfield F_{p^s}
    for s in counts:
        assert sum(v for d, v in counts.items() if s % d == 0) == ctx.p**s


def test_generated_subfield_degree_examples():
    assert generated_subfield_degree([]) == 1
    F9 = GF(9)
    assert generated_subfield_degree([F9.zero(), F9.one(), F9.one()]) == 1
    F64 = GF(64)
    x = next(e for e in F64.elements() if element_degree(e) == 2)
    y = next(e for e in F64.elements() if element_degree(e) == 3)
    assert generated_subfield_degree([x, y]) == 6
    with pytest.raises(FieldError):
        generated_subfield_degree([F9.one(), F64.one()])


def test_embed_examples():
    F5, F25 = GF(5), GF(25)
    assert embed(F5(2), F25) == F25(2)
    F4, F16 = GF(4), GF(16)
    img = embed(F4.gen(), F16)
    assert img * img + img + 1 == F16.zero()
    with pytest.raises(FieldError):
        embed(GF(9).gen(), GF(27))


@pytest.mark.parametrize("src,dst", [(4, 16), (9, 81), (8, 64), (25, 625), (4, 64)])
def test_embed_is_a_ring_homomorphism(src, dst):
    S, D = GF(src), GF(dst)
    rng = random.Random(src * dst)
    for _ in range(100):
        a, b = S.random(rng), S.random(rng)
        assert embed(a + b, D) == embed(a, D) + embed(b, D)
        assert embed(a * b, D) == embed(a, D) * embed(b, D)
    for k in range(S.p):
        assert embed(S(k), D) == D(k)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([3, 4, 9, 25, 27]), st.integers(0, 10**6))
def test_element_json_roundtrip(q, n):
    ctx = GF(q)
    x = ctx.elem(n % q)
    back = element_from_json(json.loads(dumps_element(x)))
    assert back.ctx == ctx and back == x
