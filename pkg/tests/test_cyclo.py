import cmath
import random

import pytest
import sympy

from trigen.cyclo import (CycloElt, annihilation_check, cyclotomic_poly, delta, eval_intpoly,
                          min_poly, theta)
from trigen.exactpoly import IntPoly, gcd_q
from trigen.gf import GF
from trigen.matsp import Mat4, ProductReplacement, order_of_symplectic, power_to_order, standard_generators

T = sympy.Symbol("T")


def as_sympy(f: IntPoly):
    return sympy.Poly(list(reversed(f.coeffs)), T)


def test_cyclotomic_examples():
    assert cyclotomic_poly(1) == IntPoly([-1, 1])
    assert cyclotomic_poly(4) == IntPoly([1, 0, 1])
    assert cyclotomic_poly(12) == IntPoly([1, 0, -1, 0, 1])


@pytest.mark.parametrize("n", range(1, 61))
def test_cyclotomic_matches_sympy(n):
    assert as_sympy(cyclotomic_poly(n)) == sympy.Poly(sympy.cyclotomic_poly(n, T), T)


def test_min_poly_examples():
    assert min_poly(CycloElt.integer(1, 4)) == IntPoly([-4, 1])
    assert min_poly(CycloElt.sum_of_powers(3, [1, -1])) == IntPoly([1, 1])
    assert min_poly(CycloElt.sum_of_powers(5, [1, -1])) == IntPoly([-1, 1, 1])


@pytest.mark.parametrize("c,i,j", [(7, 1, 2), (9, 1, 3), (12, 1, 5), (15, 2, 3), (16, 1, 1)])
def test_min_poly_matches_sympy(c, i, j):
    alpha = CycloElt.sum_of_powers(c, [i, -i, j, -j])
    val = 2 * sympy.cos(2 * sympy.pi * i / c) + 2 * sympy.cos(2 * sympy.pi * j / c)
    expect = sympy.Poly(sympy.minimal_polynomial(val, T), T)
    assert as_sympy(min_poly(alpha)) == expect


def test_theta_examples():
    assert theta(1) == IntPoly([-4, 1])
    assert theta(2) == IntPoly([0, -16, 0, 1])
    assert theta(3) == IntPoly.from_roots([4, 1, -2])


def test_delta_examples():
    assert delta(1) == IntPoly([-6, 1])
    assert delta(2) == IntPoly.from_roots([6, -2])
    assert delta(4)(2) == 0


def _values(c):
    zs = [cmath.exp(2j * cmath.pi * k / c) for k in range(c)]
    th, de = [], []
    for i in range(c):
        for j in range(c):
            th.append(zs[i] + zs[-i] + zs[j] + zs[-j])
            de.append(zs[(i + j) % c] + zs[(i - j) % c] + zs[(j - i) % c] + zs[(-i - j) % c] + 2)
    return th, de


def _eval_complex(f: IntPoly, x: complex) -> complex:
    acc = 0j
    for coef in reversed(f.coeffs):
        acc = acc * x + coef
    return acc


@pytest.mark.parametrize("c", range(1, 31))
def test_theta_delta_vanish_on_generating_values(c):
    th_vals, de_vals = _values(c)
    for f, vals in ((theta(c), th_vals), (delta(c), de_vals)):
        scale = max(1.0, max(abs(x) for x in f.coeffs))
        for v in vals:
            assert abs(_eval_complex(f, v)) < 1e-6 * scale * (1 + abs(v)) ** f.degree


@pytest.mark.parametrize("c", range(1, 25))
def test_theta_delta_squarefree_and_bounded(c):
    for f in (theta(c), delta(c)):
        assert f.lead == 1
        assert gcd_q(f, f.derivative()).degree == 0
        assert f.degree <= c * c


@pytest.mark.parametrize("c", [5, 8, 12, 18])
def test_theta_roots_are_exactly_the_values(c):
    # every root of theta_c is a generating value: compare numerically via sympy's roots
    th_vals, _ = _values(c)
    for r in sympy.Poly(as_sympy(theta(c))).nroots(n=30):
        assert min(abs(complex(r) - v) for v in th_vals) < 1e-8


def test_annihilation_examples():
    F5 = GF(5)
    ident = Mat4.identity(F5)
    assert annihilation_check(ident, 1) == (True, True)
    assert annihilation_check(Mat4.scalar(F5, -1), 2) == (True, True)
    with pytest.raises(ValueError):
        annihilation_check(Mat4.scalar(F5, -1), 1)


def test_annihilation_on_sp4_3_samples():
    ctx = GF(3)
    rng = random.Random(3)
    pr = ProductReplacement(standard_generators(ctx), rng)
    seen = set()
    for _ in range(200):
        g = pr.next()
        n = order_of_symplectic(g)
        for c in (2, 3, 4, 5):
            h = power_to_order(g, c, n)
            if h is not None:
                seen.add(c)
                assert annihilation_check(h, c) == (True, True)
    assert seen == {2, 3, 4, 5}


def test_eval_intpoly_in_extension():
    F9 = GF(9)
    w = F9.gen()
    f = IntPoly(F9.modulus)
    assert eval_intpoly(f, w).is_zero()
