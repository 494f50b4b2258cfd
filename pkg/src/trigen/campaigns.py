"""Sampling campaigns that check identities and relations on random matrices.

Each campaign returns a CampaignResult with sample and failure counts plus the first
few violating witnesses, so callers (tests, the command line) can report them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .batch import BatchField
from .cyclo import annihilation_check
from .gf import FieldCtx, GF, generated_subfield_degree
from .matsp import (Mat4, ProductReplacement, character_field_degree, is_absolutely_irreducible,
                    is_symplectic, order_of_symplectic, power_to_order, standard_generators)
from .traceid import (BatchOps, RationalOps, batch_word_product, canonical_words,
                      charfield_generators, classify_case, evaluate_batch, procesi_lhs,
                      procesi_sym5, reduce_trace, rho_eval)

MAX_WITNESSES = 5


@dataclass
class CampaignResult:
    name: str
    samples: int = 0
    failures: int = 0
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def fail(self, witness) -> None:
        self.failures += 1
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append(witness)

    def to_json(self) -> dict:
        return {"name": self.name, "samples": self.samples, "failures": self.failures,
                "ok": self.ok, "witnesses": self.witnesses, "details": self.details}


# -- random matrices -------------------------------------------------------------------

def _omega_code(ctx: FieldCtx) -> int | None:
    if (ctx.q - 1) % 3:
        return None
    w = ctx.primitive_element()
    return (w ** ((ctx.q - 1) // 3)).code


def order3_batch(ctx: FieldCtx, n: int, rng: np.random.Generator) -> np.ndarray:
    """n random elements of GL_4(q) with g^3 = 1 and g != 1, as conjugates of a block form.

    The block form is diagonal in the eigenvalues {1, w, w^2} when the field has a cube
    root of unity w, else built from companion blocks of T^2 + T + 1 and 1s.
    """
    bf = BatchField(ctx)
    om = _omega_code(ctx)
    D = np.zeros((n, 4, 4), dtype=np.int64)
    if om is not None:
        choices = np.array([1, om, ctx.mul(om, om)], dtype=np.int64)
        for i in range(n):
            while True:
                d = rng.integers(0, 3, 4)
                if (d != 0).any():
                    break
            D[i, np.arange(4), np.arange(4)] = choices[d]
    else:
        m1 = ctx.neg(1)
        comp = np.array([[0, m1], [1, m1]], dtype=np.int64)
        for i in range(n):
            blocks = int(rng.integers(1, 3))
            D[i] = np.eye(4, dtype=np.int64)
            D[i, 0:2, 0:2] = comp
            if blocks == 2:
                D[i, 2:4, 2:4] = comp
    P, Pi = bf.random_invertible(rng, n)
    return bf.matmul(bf.matmul(P, D), Pi)


def order3_pool(ctx: FieldCtx, rng: random.Random, size: int = 12) -> tuple[ProductReplacement, list[Mat4]]:
    """Product-replacement sampler of Sp_4(q) and a pool of its elements of order 3."""
    pr = ProductReplacement(standard_generators(ctx), rng)
    pool: list[Mat4] = []
    tries = 0
    while len(pool) < size:
        tries += 1
        if tries > 200 * size:
            raise RuntimeError(f"could not find elements of order 3 in Sp_4({ctx.q})")
        x = power_to_order(pr.next(), 3)
        if x is not None:
            pool.append(x)
    return pr, pool


def conforming_pairs(ctx: FieldCtx, n: int, rng: random.Random, max_tries: int | None = None):
    """Yield up to n absolutely irreducible pairs of order-3 elements of Sp_4(q).

    The second element is a random conjugate of a pool element, so every class met by
    the pool is sampled.  Stops after max_tries candidates (default 50 n).
    """
    pr, pool = order3_pool(ctx, rng)
    max_tries = 50 * n if max_tries is None else max_tries
    found = 0
    for _ in range(max_tries):
        if found >= n:
            return
        h = pr.next()
        a = rng.choice(pool)
        b = h.inverse() * rng.choice(pool) * h
        if is_absolutely_irreducible(a, b):
            found += 1
            yield a, b


# -- campaigns ---------------------------------------------------------------------------

def procesi_campaign(q: int, n: int, seed: int = 0) -> CampaignResult:
    """Sym_5 identity on random quintuples and the three five-term identities on random
    invertible triples, all over F_q, vectorised."""
    ctx = GF(q)
    res = CampaignResult(f"procesi F_{q}")
    rng = np.random.default_rng(seed)
    ops = BatchOps(ctx, n)
    bf = ops.bf
    Z = [bf.random(rng, (n, 4, 4)) for _ in range(5)]
    s = procesi_sym5(*Z, ops=ops)
    bad = np.nonzero(s.a)[0]
    res.samples += n
    for i in bad:
        res.fail({"identity": "sym5", "matrices": [z[i].tolist() for z in Z]})
    M = [bf.random_invertible(rng, n)[0] for _ in range(3)]
    for k in (1, 2, 3):
        v = procesi_lhs(k, *M, ops=ops)
        res.samples += n
        for i in np.nonzero(v.a)[0]:
            res.fail({"identity": k, "matrices": [m[i].tolist() for m in M]})
    return res


def _random_rational_invertible(rng: random.Random):
    while True:
        rows = [[Fraction(rng.randint(-5, 5)) for _ in range(4)] for _ in range(4)]
        try:
            RationalOps().inv(tuple(tuple(r) for r in rows))
        except ZeroDivisionError:
            continue
        return tuple(tuple(r) for r in rows)


def procesi_rational_campaign(n: int, seed: int = 0) -> CampaignResult:
    """The same identities evaluated exactly over Q on small random integer matrices."""
    rng = random.Random(f"procesi-q:{seed}")
    res = CampaignResult("procesi Q")
    for _ in range(n):
        Z = [tuple(tuple(Fraction(rng.randint(-4, 4)) for _ in range(4)) for _ in range(4))
             for _ in range(5)]
        res.samples += 1
        if procesi_sym5(*Z) != 0:
            res.fail({"identity": "sym5", "matrices": [[[str(x) for x in r] for r in z] for z in Z]})
        M = [_random_rational_invertible(rng) for _ in range(3)]
        for k in (1, 2, 3):
            res.samples += 1
            if procesi_lhs(k, *M) != 0:
                res.fail({"identity": k, "matrices": [[[str(x) for x in r] for r in m] for m in M]})
    return res


def reduction_campaign(q: int, n: int, max_len: int = 10, seed: int = 0) -> CampaignResult:
    """Evaluate reduce_trace(w) and the direct trace of w on n random order-3 pairs in GL_4(q)."""
    ctx = GF(q)
    rng = np.random.default_rng(seed)
    ops = BatchOps(ctx, n)
    G1, G2 = order3_batch(ctx, n, rng), order3_batch(ctx, n, rng)
    G = {1: G1, 2: G2, -1: ops.inv(G1), -2: ops.inv(G2)}
    cache: dict = {}
    res = CampaignResult(f"reduce_trace F_{q}")
    words = canonical_words(max_len)
    for w in words:
        direct = ops.trace(batch_word_product(ops, G, w)).a
        val = evaluate_batch(reduce_trace(w), ops, G1, G2, cache=cache).a
        res.samples += n
        for i in np.nonzero(direct != val)[0]:
            res.fail({"word": list(w), "g1": G1[i].tolist(), "g2": G2[i].tolist()})
    res.details["words"] = len(words)
    return res


def charfield_campaign(q: int, n: int, seed: int = 0, max_tries: int | None = None) -> CampaignResult:
    """On absolutely irreducible order-3 pairs of Sp_4(q): rho vanishes at the three
    generators, they generate the sampled character field, and classify_case holds."""
    ctx = GF(q)
    rng = random.Random(f"charfield:{q}:{seed}")
    res = CampaignResult(f"character field Sp_4({q})")
    cases: dict = {}
    for a, b in conforming_pairs(ctx, n, rng, max_tries):
        res.samples += 1
        x, y, z = charfield_generators(a, b, check=False)
        problems = []
        if not rho_eval(x, y, z).is_zero():
            problems.append("rho")
        if generated_subfield_degree([x, y, z]) != character_field_degree(a, b, max_len=8):
            problems.append("degree")
        try:
            rep = classify_case(a, b, check=False)
            cases[rep.case] = cases.get(rep.case, 0) + 1
            problems += [f"{rep.case}:{k}" for k, v in rep.checks.items() if not v]
        except Exception as exc:  # a failed classification is a finding, not a crash
            problems.append(f"classify:{exc}")
        if problems:
            res.fail({"problems": problems, "g1": a.to_json(), "g2": b.to_json()})
    res.details["cases"] = dict(sorted(cases.items()))
    return res


def annihilation_campaign(q: int, c_max: int = 12, samples: int = 300, seed: int = 0) -> CampaignResult:
    """theta_c(chi_3(g)) = delta_c(chi_2(g)) = 0 for sampled g in Sp_4(q) and every c <= c_max
    with g^c = 1.  Elements of each order are reached by powering random elements."""
    ctx = GF(q)
    rng = random.Random(f"annihilation:{q}:{seed}")
    pr = ProductReplacement(standard_generators(ctx), rng)
    res = CampaignResult(f"annihilation Sp_4({q})")
    per_c = {c: 0 for c in range(1, c_max + 1)}
    for _ in range(samples):
        g = pr.next()
        order = order_of_symplectic(g)
        for c in range(1, c_max + 1):
            h = power_to_order(g, c, order)
            if h is None:
                continue
            # h has order exactly c, so h^k = 1 for every multiple k of c
            for k in range(c, c_max + 1, c):
                res.samples += 1
                per_c[k] += 1
                th, de = annihilation_check(h, k)
                if not (th and de):
                    res.fail({"c": k, "g": h.to_json(), "theta": th, "delta": de})
    res.details["per_c"] = per_c
    return res


def trace_witness_check(q: int) -> bool:
    from .matsp import trace_witness
    ctx = GF(q)
    g = trace_witness(ctx)
    return is_symplectic(g) and generated_subfield_degree([g.trace()]) == ctx.m


__all__ = ["CampaignResult", "order3_batch", "order3_pool", "conforming_pairs",
           "procesi_campaign", "procesi_rational_campaign", "reduction_campaign",
           "charfield_campaign", "annihilation_campaign", "trace_witness_check"]
