"""Group orders for subgroups of GL_4(q): BFS closure and randomized Schreier-Sims.

The Schreier-Sims variant works on the permutation action on nonzero vectors, which
is faithful for linear groups.  Permutations are numpy int arrays; composing "apply g,
then h" is h[g].  Orbits are stored as Schreier vectors (generator label and parent
point for every orbit point), so no transversal is materialised.
"""

from __future__ import annotations

import random
from typing import Sequence

import numpy as np

from .batch import BatchField
from .matsp import Mat4, ResourceError

DEFAULT_BFS_LIMIT = 1_000_000


def bfs_closure(gens: Sequence[Mat4], limit: int = DEFAULT_BFS_LIMIT) -> int:
    """Order of <gens> by breadth-first closure over a hash set of matrices.

    Right multiplication by the generators from the identity reaches every element of a
    finite group, so no inverses are needed.
    """
    if not gens:
        return 1
    ctx = gens[0].ctx
    bf = BatchField(ctx)
    G = np.array([np.array(g.e, dtype=np.int64).reshape(4, 4) for g in gens])
    ident = bf.identity(1)
    width = 1 if ctx.q <= 256 else 2
    dtype = np.uint8 if width == 1 else np.uint16
    seen = {ident.astype(dtype).tobytes()}
    frontier = ident
    while frontier.shape[0]:
        new = []
        for k in range(G.shape[0]):
            prods = bf.matmul(frontier, G[k][None, :, :])
            raw = prods.astype(dtype).reshape(prods.shape[0], -1)
            for idx in range(raw.shape[0]):
                key = raw[idx].tobytes()
                if key not in seen:
                    seen.add(key)
                    new.append(prods[idx])
            if len(seen) > limit:
                raise ResourceError(f"BFS closure exceeded {limit} elements")
        frontier = np.array(new, dtype=np.int64) if new else np.empty((0, 4, 4), dtype=np.int64)
    return len(seen)


class VectorAction:
    """Permutation action of 4x4 matrices on the q^4 - 1 nonzero vectors of F_q^4."""

    def __init__(self, ctx):
        self.ctx = ctx
        self.bf = BatchField(ctx)
        q = ctx.q
        self.n = q**4 - 1
        if self.n > 5_000_000:
            raise ResourceError("vector action too large")
        idx = np.arange(1, q**4, dtype=np.int64)
        self.vecs = np.stack([(idx // q**k) % q for k in range(4)], axis=1)
        self.weights = np.array([q**k for k in range(4)], dtype=np.int64)

    def perm(self, g: Mat4) -> np.ndarray:
        bf = self.bf
        M = np.array(g.e, dtype=np.int64).reshape(4, 4)
        cols = []
        for i in range(4):
            acc = bf.mul(np.full(self.n, M[i, 0]), self.vecs[:, 0])
            for k in range(1, 4):
                acc = bf.add(acc, bf.mul(np.full(self.n, M[i, k]), self.vecs[:, k]))
            cols.append(acc)
        images = np.stack(cols, axis=1) @ self.weights
        return (images - 1).astype(np.int32)

    def point_of(self, v: Sequence[int]) -> int:
        return int(sum(int(x) * w for x, w in zip(v, self.weights))) - 1


def _invert(perm: np.ndarray) -> np.ndarray:
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.shape[0], dtype=perm.dtype)
    return inv


class _Level:
    def __init__(self, base: int, n: int):
        self.base = base
        self.gens: list[np.ndarray] = []
        self.invs: list[np.ndarray] = []
        self.label = np.full(n, -1, dtype=np.int32)   # generator index reaching the point
        self.parent = np.full(n, -1, dtype=np.int32)  # preimage point
        self.label[base] = -2
        self.orbit = [base]

    def add_gen(self, g: np.ndarray):
        self.gens.append(g)
        self.invs.append(_invert(g))
        self._extend()

    def _extend(self):
        label, parent = self.label, self.parent
        frontier = np.array(self.orbit, dtype=np.int32)
        while frontier.size:
            found = []
            for k, g in enumerate(self.gens):
                imgs = g[frontier]
                mask = label[imgs] == -1
                if not mask.any():
                    continue
                imgs_m, src = imgs[mask], frontier[mask]
                imgs_u, first = np.unique(imgs_m, return_index=True)
                label[imgs_u] = k
                parent[imgs_u] = src[first]
                found.append(imgs_u)
            if not found:
                break
            frontier = np.concatenate(found)
            self.orbit.extend(frontier.tolist())

    @property
    def size(self) -> int:
        return len(self.orbit)

    def strip(self, g: np.ndarray):
        """Multiply g by a transversal inverse so that the base point is fixed, or None."""
        x = int(g[self.base])
        if self.label[x] == -1:
            return None
        while x != self.base:
            k = int(self.label[x])
            g = self.invs[k][g]
            x = int(self.parent[x])
        return g


class StabChain:
    """Randomized Schreier-Sims on a permutation group given by generators."""

    def __init__(self, gens: list[np.ndarray], n: int, base_hint: Sequence[int] = (), seed: int = 0):
        self.n = n
        self.gens = gens
        self.rng = random.Random(f"schreier:{seed}")
        self.levels: list[_Level] = []
        self.base_hint = list(base_hint)
        self.identity = np.arange(n, dtype=np.int32)

    def order(self) -> int:
        out = 1
        for lv in self.levels:
            out *= lv.size
        return out

    def _new_base_point(self, g: np.ndarray) -> int:
        used = {lv.base for lv in self.levels}
        for b in self.base_hint:
            if b not in used and g[b] != b:
                return b
        moved = np.nonzero(g != self.identity)[0]
        return int(moved[0])

    def sift(self, g: np.ndarray):
        """Return (residue, level index where sifting stopped)."""
        for i, lv in enumerate(self.levels):
            h = lv.strip(g)
            if h is None:
                return g, i
            g = h
        return g, len(self.levels)

    def add_residue(self, g: np.ndarray, depth: int) -> None:
        if depth == len(self.levels):
            if np.array_equal(g, self.identity):
                return
            self.levels.append(_Level(self._new_base_point(g), self.n))
        for i in range(depth + 1):
            self.levels[i].add_gen(g)

    def _random_elements(self, slots: int = 10, burn: int = 30):
        state = [self.gens[i % len(self.gens)] for i in range(max(slots, len(self.gens)))]
        acc = self.identity.copy()
        rng = self.rng
        step = 0
        while True:
            i, j = rng.sample(range(len(state)), 2)
            if rng.random() < 0.5:
                state[i] = state[j][state[i]]
            else:
                state[i] = state[i][state[j]]
            acc = state[i][acc]
            step += 1
            if step > burn:
                yield acc

    def run(self, target: int | None = None, confirm: int = 40, max_rounds: int = 20000) -> int:
        for g in self.gens:
            res, depth = self.sift(g)
            if depth < len(self.levels) or not np.array_equal(res, self.identity):
                self.add_residue(res, depth)
        if target is not None and self.order() == target:
            return target
        streak = 0
        for rounds, h in enumerate(self._random_elements()):
            if rounds > max_rounds:
                raise ResourceError("Schreier-Sims did not stabilise")
            res, depth = self.sift(h)
            if depth == len(self.levels) and np.array_equal(res, self.identity):
                streak += 1
                if streak >= confirm:
                    break
                continue
            streak = 0
            self.add_residue(res, depth)
            if target is not None and self.order() >= target:
                break
        return self.order()


def schreier_sims_order(gens: Sequence[Mat4], seed: int = 0, target: int | None = None,
                        action: VectorAction | None = None) -> int:
    """Order of <gens> via the action on nonzero vectors.

    Reaching the target proves the order (the computed product of basic orbit lengths
    never exceeds the true order).  Otherwise the answer is Monte Carlo, and a second
    seed is run as confirmation.
    """
    if action is None:
        action = VectorAction(gens[0].ctx)
    perms = [action.perm(g) for g in gens]
    ident = np.arange(action.n, dtype=np.int32)
    perms = [p for p in perms if not np.array_equal(p, ident)]
    if not perms:
        return 1
    hint = [action.point_of(v) for v in ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))]
    first = StabChain(perms, action.n, hint, seed).run(target)
    if target is not None and first == target:
        return first
    second = StabChain(perms, action.n, hint, seed + 1).run(target)
    return max(first, second)
