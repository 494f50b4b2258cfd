"""Search for (a, b, c)-generating pairs of Sp_4(q).

Small groups (|Sp_4(q)| within the BFS limit) are searched exhaustively: the first
element runs over conjugacy-class representatives of elements of order a and the second
over all elements of order b.  Larger groups are sampled: a pool of order-a elements is
built by powering random elements, and the second element is a random conjugate.
A found pair is a proof of generation; "not found" is only exhaustive when flagged so.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .batch import BatchField
from .gf import GF, FieldCtx
from .matsp import (Mat4, ProductReplacement, ResourceError, is_absolutely_irreducible,
                    order_of_symplectic, power_to_order, sp4_order, standard_generators)
from .stabchain import DEFAULT_BFS_LIMIT, VectorAction, schreier_sims_order

# exhaustive search by default only for q <= 3; larger groups are sampled
EXHAUSTIVE_DEFAULT_LIMIT = 100_000


@dataclass
class CensusResult:
    q: int
    a: int
    b: int
    c: int
    found: bool
    exhaustive: bool
    g1: Mat4 | None = None
    g2: Mat4 | None = None
    tried: int = 0
    notes: list = field(default_factory=list)

    def witness_json(self):
        if not self.found:
            return None
        return [self.g1.to_json(), self.g2.to_json()]


def enumerate_group(gens: list[Mat4], limit: int = DEFAULT_BFS_LIMIT) -> np.ndarray:
    """All elements of <gens> as an (N, 4, 4) code array, by BFS closure."""
    ctx = gens[0].ctx
    bf = BatchField(ctx)
    G = np.array([np.array(g.e, dtype=np.int64).reshape(4, 4) for g in gens])
    frontier = bf.identity(1)
    seen = {frontier[0].astype(np.uint16).tobytes()}
    elems = [frontier[0]]
    while frontier.shape[0]:
        new = []
        for k in range(G.shape[0]):
            prods = bf.matmul(frontier, G[k][None])
            for m in prods:
                key = m.astype(np.uint16).tobytes()
                if key not in seen:
                    seen.add(key)
                    new.append(m)
        if len(seen) > limit:
            raise ResourceError(f"group enumeration exceeded {limit} elements")
        elems.extend(new)
        frontier = np.array(new) if new else np.empty((0, 4, 4), dtype=np.int64)
    return np.array(elems)


def batch_power(bf: BatchField, A: np.ndarray, k: int) -> np.ndarray:
    out = bf.identity(A.shape[0])
    base = A
    while k:
        if k & 1:
            out = bf.matmul(out, base)
        k >>= 1
        if k:
            base = bf.matmul(base, base)
    return out


def _is_identity_batch(A: np.ndarray, sign: int = 1, p: int = 0) -> np.ndarray:
    d = 1 if sign == 1 else p - 1
    eye = np.eye(4, dtype=np.int64) * d
    return np.all(A == eye, axis=(1, 2))


def exact_order_mask(bf: BatchField, A: np.ndarray, k: int) -> np.ndarray:
    """Mask of elements of order exactly k."""
    from ._util import prime_factors
    mask = _is_identity_batch(batch_power(bf, A, k))
    for r in prime_factors(k):
        mask &= ~_is_identity_batch(batch_power(bf, A, k // r))
    return mask


def _to_mat(ctx: FieldCtx, arr: np.ndarray) -> Mat4:
    return Mat4.from_codes(ctx, arr.reshape(-1).tolist())


def class_representatives(ctx: FieldCtx, elems: np.ndarray, gens: list[Mat4]) -> list[np.ndarray]:
    """Conjugacy-class representatives among a conjugation-closed set of elements."""
    bf = BatchField(ctx)
    keys = {e.astype(np.uint16).tobytes(): i for i, e in enumerate(elems)}
    G = np.array([np.array(g.e, dtype=np.int64).reshape(4, 4) for g in gens])
    Gi = np.array([np.array(g.inverse().e, dtype=np.int64).reshape(4, 4) for g in gens])
    cls = np.full(len(elems), -1)
    reps = []
    for start in range(len(elems)):
        if cls[start] >= 0:
            continue
        reps.append(elems[start])
        cls[start] = len(reps) - 1
        frontier = elems[start][None]
        while frontier.shape[0]:
            new = []
            for k in range(len(gens)):
                conj = bf.matmul(bf.matmul(Gi[k][None], frontier), G[k][None])
                for m in conj:
                    i = keys[m.astype(np.uint16).tobytes()]
                    if cls[i] < 0:
                        cls[i] = len(reps) - 1
                        new.append(m)
            frontier = np.array(new) if new else np.empty((0, 4, 4), dtype=np.int64)
    return reps


def _product_condition(bf: BatchField, P: np.ndarray, c: int, projective_c: int | None, p: int):
    if projective_c is None:
        return _is_identity_batch(batch_power(bf, P, c))
    Q = batch_power(bf, P, projective_c)
    return _is_identity_batch(Q) | _is_identity_batch(Q, sign=-1, p=p)


def _generates(g1: Mat4, g2: Mat4, seed: int, action: VectorAction) -> bool:
    if not is_absolutely_irreducible(g1, g2):
        return False
    target = sp4_order(g1.ctx.q)
    return schreier_sims_order([g1, g2], seed=seed, target=target, action=action) == target


def find_abc_pair(q: int, a: int, b: int, c: int, seed: int = 0, exhaustive: bool | None = None,
                  max_samples: int = 3000, projective_c: int | None = None,
                  bfs_limit: int = DEFAULT_BFS_LIMIT) -> CensusResult:
    """Look for g1, g2 in Sp_4(q) of orders a, b with (g1 g2)^c = 1 generating Sp_4(q).

    With projective_c set, the product condition becomes (g1 g2)^projective_c = +-1.
    """
    ctx = GF(q)
    gens = standard_generators(ctx)
    action = VectorAction(ctx)
    if exhaustive is None:
        exhaustive = sp4_order(q) <= EXHAUSTIVE_DEFAULT_LIMIT
    if exhaustive:
        return _exhaustive(ctx, gens, a, b, c, seed, projective_c, action, bfs_limit)
    return _sampled(ctx, gens, a, b, c, seed, max_samples, projective_c, action)


def _exhaustive(ctx, gens, a, b, c, seed, projective_c, action, bfs_limit) -> CensusResult:
    bf = BatchField(ctx)
    elems = enumerate_group(gens, bfs_limit)
    if len(elems) != sp4_order(ctx.q):
        raise AssertionError("standard generators do not give Sp_4(q)")  # pragma: no cover
    A = elems[exact_order_mask(bf, elems, a)]
    B = A if b == a else elems[exact_order_mask(bf, elems, b)]
    res = CensusResult(ctx.q, a, b, c, False, True)
    if len(A) == 0 or len(B) == 0:
        res.notes.append("no elements of the required orders")
        return res
    for rep in class_representatives(ctx, A, gens):
        P = bf.matmul(rep[None], B)
        ok = _product_condition(bf, P, c, projective_c, ctx.p)
        g1 = _to_mat(ctx, rep)
        for idx in np.nonzero(ok)[0]:
            res.tried += 1
            g2 = _to_mat(ctx, B[idx])
            if _generates(g1, g2, seed, action):
                res.found, res.g1, res.g2 = True, g1, g2
                return res
    return res


def _sampled(ctx, gens, a, b, c, seed, max_samples, projective_c, action) -> CensusResult:
    rng = random.Random(f"census:{ctx.q}:{a}:{b}:{c}:{seed}")
    pr = ProductReplacement(gens, rng)
    res = CensusResult(ctx.q, a, b, c, False, False)

    def pool(k, size=12):
        out = []
        for _ in range(400 * size):
            h = pr.next()
            x = power_to_order(h, k, order_of_symplectic(h))
            if x is not None:
                out.append(x)
                if len(out) >= size:
                    break
        return out

    pool_a = pool(a)
    pool_b = pool_a if b == a else pool(b)
    if not pool_a or not pool_b:
        res.notes.append("no elements of the required orders were sampled")
        return res
    minus = Mat4.scalar(ctx, -1)
    for _ in range(max_samples):
        g1 = rng.choice(pool_a)
        h = pr.next()
        g2 = h.inverse() * rng.choice(pool_b) * h
        prod = g1 * g2
        if projective_c is None:
            good = (prod**c).is_identity()
        else:
            pc = prod**projective_c
            good = pc.is_identity() or pc == minus
        if not good:
            continue
        res.tried += 1
        if _generates(g1, g2, seed, action):
            res.found, res.g1, res.g2 = True, g1, g2
            return res
    res.notes.append(f"sampling: no generating pair among {max_samples} samples (not a proof of absence)")
    return res


def projective_points_action(ctx: FieldCtx):
    """Index map for the action on 1-dimensional subspaces (normalised representatives)."""
    q = ctx.q
    reps = []
    for k in range(4):
        # first nonzero coordinate equal to 1 at position k
        for tail in range(q ** (3 - k)):
            v = [0] * k + [1]
            t = tail
            for _ in range(3 - k):
                v.append(t % q)
                t //= q
            reps.append(tuple(v))
    index = {v: i for i, v in enumerate(reps)}
    return reps, index


def projective_order(g1: Mat4, g2: Mat4, limit: int = 2_000_000) -> int:
    """Order of the image of <g1, g2> acting on projective points, by BFS on permutations."""
    ctx = g1.ctx
    reps, index = projective_points_action(ctx)

    def normalise(v):
        k = next(i for i, x in enumerate(v) if x)
        inv = ctx.inv(v[k])
        return tuple(ctx.mul(x, inv) for x in v)

    perms = []
    for g in (g1, g2):
        perms.append(tuple(index[normalise(g.apply(list(v)))] for v in reps))
    n = len(reps)
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for s in perms:
                y = tuple(s[i] for i in x)
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        if len(seen) > limit:
            raise ResourceError("projective closure too large")
        frontier = new
    return len(seen)
