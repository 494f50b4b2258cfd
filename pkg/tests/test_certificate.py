import json

import pytest

from trigen.census import find_abc_pair
from trigen.certificate import (Certificate, build_certificate, certified_bound, minpoly_over_prime,
                                psp_bound, rho_poly, rho_value, witness_matches)
from trigen.cyclo import delta, eval_intpoly, theta
from trigen.gf import GF, element_degree, generated_subfield_degree
from trigen.matsp import ResourceError
from trigen.traceid import charfield_generators, rho_eval


def brute_points(p, c, m):
    """All (x, y, z) over F_{p^m} on the variety, by scanning the field."""
    F = GF(p**m)
    th, de = theta(c), delta(c)
    xs = [x for x in F.elements() if eval_intpoly(th, x).is_zero()]
    ys = [y for y in F.elements() if eval_intpoly(de, y).is_zero()]
    pts = []
    for x in xs:
        for y in ys:
            for z in F.elements():
                if rho_eval(x, y, z).is_zero():
                    pts.append((x, y, z))
    return pts


def test_rho_poly_matches_rho_value():
    F = GF(25)
    for x in list(F.elements())[:6]:
        for y in list(F.elements())[3:8]:
            f = rho_poly(x, y)
            for z in F.elements():
                val = F.zero()
                for coef in reversed(f.c):
                    val = val * z + F.elem(coef)
                assert val == rho_value(x, y, z) == rho_eval(x, y, z)


def test_minpoly_over_prime():
    F9 = GF(9)
    w = F9.gen()
    assert minpoly_over_prime(F9(2)) == (1, 1)
    assert minpoly_over_prime(w) == tuple(F9.modulus)


def test_certificate_c1():
    for p in (2, 3, 5, 7):
        cert = build_certificate(p, 1)
        assert cert.candidate_rs == [1]
        assert cert.verify()


def test_certificate_examples():
    assert build_certificate(7, 2).candidate_rs == [1, 2]
    assert set(build_certificate(7, 2).candidate_rs) <= {1, 2, 3}
    assert build_certificate(2, 7).candidate_rs == [1, 3]
    assert build_certificate(2, 5).candidate_rs == [1, 2]


@pytest.mark.parametrize("p,c,m", [(2, 3, 6), (2, 5, 4), (2, 7, 6), (3, 4, 4), (3, 5, 4),
                                   (5, 3, 2), (5, 4, 2), (7, 2, 2), (7, 3, 2), (13, 4, 1)])
def test_certificate_against_brute_force(p, c, m):
    cert = build_certificate(p, c)
    pts = brute_points(p, c, m)
    brute_rs = {element_degree_of(pt) for pt in pts}
    assert brute_rs == {r for r in cert.candidate_rs if m % r == 0}
    # each certificate point stands for deg(x) points with that x-orbit representative
    assert len(pts) == sum(element_degree(pt.x) for pt in cert.points if m % pt.r == 0)


def element_degree_of(pt):
    return generated_subfield_degree(list(pt))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_certificates_verify(p):
    for c in range(1, 9):
        cert = build_certificate(p, c)
        assert cert.verify()
        assert certified_bound(cert) == max(cert.candidate_rs)


def test_tampered_certificate_fails_verification():
    cert = build_certificate(5, 4)
    cert.candidate_rs = cert.candidate_rs + [99]
    assert not cert.verify()


@pytest.mark.parametrize("seed", [0, 1, 7])
def test_candidate_rs_independent_of_seed(seed):
    assert build_certificate(3, 7, seed=seed).candidate_rs == build_certificate(3, 7).candidate_rs


def test_json_output_is_deterministic():
    a, b = build_certificate(5, 6).dumps(), build_certificate(5, 6).dumps()
    assert a == b
    obj = json.loads(a)
    assert set(obj) == {"p", "c", "candidate_rs", "max_r", "points"}


def test_certificate_errors():
    with pytest.raises(ValueError):
        build_certificate(4, 3)
    with pytest.raises(ValueError):
        build_certificate(5, 0)
    with pytest.raises(ValueError):
        build_certificate(5, 61)
    with pytest.raises(ResourceError):
        build_certificate(2, 13, max_degree=4)


def test_psp_bound():
    with pytest.raises(ValueError):
        psp_bound(2, 5)
    assert psp_bound(5, 3) == certified_bound(build_certificate(5, 6))


@pytest.mark.parametrize("q,c", [(7, 7), (4, 10), (8, 7)])
def test_census_witness_lies_on_certificate(q, c):
    res = find_abc_pair(q, 3, 3, c, max_samples=1500)
    assert res.found
    x, y, z = charfield_generators(res.g1, res.g2)
    cert = build_certificate(GF(q).p, c)
    assert witness_matches(cert, x, y, z)
    assert element_degree_of((x, y, z)) in cert.candidate_rs
    assert not witness_matches(Certificate(cert.p, c), x, y, z)
