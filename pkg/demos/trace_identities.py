"""
Trace identities for pairs of order-3 matrices
==============================================

The trace of any word in two order-3 matrices of GL_4 is a polynomial in
26 basic traces.  This script prints a few reductions and checks them on
random matrices over F_13.
"""

import random

import numpy as np

from trigen.campaigns import order3_batch
from trigen.gf import GF
from trigen.matsp import Mat4, eval_word
from trigen.traceid import canonical_words, evaluate, generator_set, reduce_trace

print(f"{len(generator_set())} generators, {len(canonical_words(10))} canonical words up to length 10")

for w in [(1, 2, 1, 2, 1, 2), (1, 2, -1, -2, 1, -2)]:
    f = reduce_trace(w)
    print(f"tr{w} has {len(f.terms)} terms, degree {f.degree()}")

ctx = GF(13)
rng = np.random.default_rng(1)
g1, g2 = (Mat4.from_codes(ctx, m.reshape(-1).tolist()) for m in order3_batch(ctx, 2, rng))
pick = random.Random(2)
for _ in range(5):
    w = tuple(pick.choice((1, -1, 2, -2)) for _ in range(pick.randint(4, 10)))
    direct = eval_word(w, g1, g2).trace()
    print(f"{w}: direct {direct}, reduced {evaluate(reduce_trace(w), g1, g2)}")
