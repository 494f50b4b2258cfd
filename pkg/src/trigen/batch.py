"""Vectorised finite-field arithmetic on numpy arrays of element codes.

Used by the sampling campaigns and the group-order machinery, where millions of field
operations would be too slow one element at a time.
"""

from __future__ import annotations

import numpy as np

from .gf import FieldCtx

ADD_TABLE_LIMIT = 1024


class BatchField:
    """Elementwise arithmetic on integer-code arrays for one field."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.p, self.m, self.q = ctx.p, ctx.m, ctx.q
        self.prime = ctx.m == 1
        if not self.prime:
            exp, log = ctx.tables if ctx.tables is not None else (None, None)
            if exp is None:
                raise ValueError(f"field {ctx} too large for batch arithmetic")
            self.exp = np.array(exp, dtype=np.int64)
            self.log = np.array(log, dtype=np.int64)
            self.char2 = ctx.p == 2
            if not self.char2:
                q = ctx.q
                self.pw = np.array([ctx.p**i for i in range(ctx.m)], dtype=np.int64)
                if q <= ADD_TABLE_LIMIT:
                    codes = np.arange(q, dtype=np.int64)
                    da = self.digits(codes)
                    s = (da[:, None, :] + da[None, :, :]) % ctx.p
                    self.add_table = (s * self.pw).sum(-1)
                else:
                    self.add_table = None
                self.neg_table = self._neg_digits(np.arange(q, dtype=np.int64))

    # digit helpers for odd-characteristic extensions
    def digits(self, a: np.ndarray) -> np.ndarray:
        out = np.empty(a.shape + (self.m,), dtype=np.int64)
        x = a.astype(np.int64)
        for i in range(self.m):
            out[..., i] = x % self.p
            x = x // self.p
        return out

    def _neg_digits(self, a):
        return ((-self.digits(a)) % self.p * self.pw).sum(-1)

    def asarray(self, a) -> np.ndarray:
        return np.asarray(a, dtype=np.int64)

    def add(self, a, b):
        if self.prime:
            return (a + b) % self.p
        if self.char2:
            return a ^ b
        if self.add_table is not None:
            return self.add_table[a, b]
        return ((self.digits(a) + self.digits(b)) % self.p * self.pw).sum(-1)

    def neg(self, a):
        if self.prime:
            return (-a) % self.p
        if self.char2:
            return a
        return self.neg_table[a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.prime:
            return a * b % self.p
        la = self.log[a]
        lb = self.log[b]
        out = self.exp[la + lb]
        return np.where((a == 0) | (b == 0), 0, out)

    def scale(self, k: int, a):
        """Multiply by a prime-field integer."""
        k %= self.p
        if self.prime:
            return a * k % self.p
        if k == 0:
            return np.zeros_like(a)
        return self.mul(a, np.full_like(a, k))

    def inv(self, a):
        if self.prime:
            return _pow_mod(a, self.p - 2, self.p)
        if np.any(a == 0):
            raise ZeroDivisionError("zero has no inverse")
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def pow(self, a, e: int):
        if self.prime:
            return _pow_mod(a, e % (self.p - 1) if e < 0 else e, self.p)
        e_mod = e % (self.q - 1)
        out = self.exp[(self.log[a] * e_mod) % (self.q - 1)]
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, out)

    def sum(self, a, axis):
        """Field sum along an axis."""
        a = np.moveaxis(a, axis, 0)
        if self.prime:
            return a.sum(0) % self.p
        acc = a[0]
        for x in a[1:]:
            acc = self.add(acc, x)
        return acc

    def random(self, rng: np.random.Generator, shape, nonzero=False):
        lo = 1 if nonzero else 0
        return rng.integers(lo, self.q, size=shape, dtype=np.int64)

    # -- matrices: arrays of shape (..., 4, 4) -------------------------------------
    def matmul(self, A, B):
        if self.prime:
            return np.einsum("...ij,...jk->...ik", A, B) % self.p
        prod = self.mul(A[..., :, :, None], B[..., None, :, :])  # (..., i, j, k)
        return self.sum(prod, axis=-2)

    def trace(self, A):
        d = np.stack([A[..., i, i] for i in range(A.shape[-1])], axis=-1)
        return self.sum(d, axis=-1)

    def det2(self, a, b, c, d):
        return self.sub(self.mul(a, d), self.mul(b, c))

    def chi2(self, A):
        """Sum of principal 2x2 minors."""
        n = A.shape[-1]
        acc = None
        for i in range(n):
            for j in range(i + 1, n):
                m = self.det2(A[..., i, i], A[..., i, j], A[..., j, i], A[..., j, j])
                acc = m if acc is None else self.add(acc, m)
        return acc

    def adjugate_det(self, A):
        """(adj(A), det(A)) for 4x4 batches via cofactor expansion."""
        n = 4
        cof = np.empty_like(A)
        for i in range(n):
            for j in range(n):
                rows = [r for r in range(n) if r != i]
                cols = [c for c in range(n) if c != j]
                sub = A[..., rows, :][..., :, cols]
                d = self.det3(sub)
                cof[..., i, j] = d if (i + j) % 2 == 0 else self.neg(d)
        det = self.sum(self.mul(A[..., 0, :], cof[..., 0, :]), axis=-1)
        return np.swapaxes(cof, -1, -2), det

    def det3(self, M):
        a = M
        t1 = self.mul(a[..., 0, 0], self.det2(a[..., 1, 1], a[..., 1, 2], a[..., 2, 1], a[..., 2, 2]))
        t2 = self.mul(a[..., 0, 1], self.det2(a[..., 1, 0], a[..., 1, 2], a[..., 2, 0], a[..., 2, 2]))
        t3 = self.mul(a[..., 0, 2], self.det2(a[..., 1, 0], a[..., 1, 1], a[..., 2, 0], a[..., 2, 1]))
        return self.add(self.sub(t1, t2), t3)

    def inverse(self, A):
        adj, det = self.adjugate_det(A)
        if np.any(det == 0):
            raise ZeroDivisionError("singular matrix in batch")
        dinv = self.inv(det)
        return self.mul(adj, dinv[..., None, None])

    def random_invertible(self, rng: np.random.Generator, n: int):
        """n uniformly random invertible 4x4 matrices and their inverses."""
        out = np.empty((0, 4, 4), dtype=np.int64)
        dets = np.empty((0,), dtype=np.int64)
        adjs = np.empty((0, 4, 4), dtype=np.int64)
        while out.shape[0] < n:
            A = self.random(rng, (2 * (n - out.shape[0]) + 8, 4, 4))
            adj, det = self.adjugate_det(A)
            ok = det != 0
            out = np.concatenate([out, A[ok]])
            adjs = np.concatenate([adjs, adj[ok]])
            dets = np.concatenate([dets, det[ok]])
        out, adjs, dets = out[:n], adjs[:n], dets[:n]
        inv = self.mul(adjs, self.inv(dets)[:, None, None])
        return out, inv

    def identity(self, n_batch: int):
        eye = np.zeros((n_batch, 4, 4), dtype=np.int64)
        for i in range(4):
            eye[:, i, i] = 1
        return eye


def _pow_mod(a, e: int, p: int):
    a = np.asarray(a, dtype=np.int64) % p
    result = np.ones_like(a)
    while e:
        if e & 1:
            result = result * a % p
        e >>= 1
        if e:
            a = a * a % p
    return result
