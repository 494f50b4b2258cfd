"""
Rigid, reducible and nonrigid triples
=====================================

Walks through the dimension count for adjoint type A, the closed-form
bound for the three minimal hyperbolic triples and a lookup in the
tabulated classification.
"""

from trigen.rigidity import (GroupDescriptor, classify_adjoint_A, du_type_A, hyperbolic_triples,
                             nonrigidity_bound, table_lookup)

# d_u for PGL_3: the smallest centralizer of an element of order dividing u
for u in (2, 3, 4, 7):
    print(f"d_{u}(A_2) = {du_type_A(2, u)}")

# the verdict compares d_a + d_b + d_c with dim G
v = classify_adjoint_A(2, (2, 3, 7))
print(f"A_2, {v.triple}: S = {v.S}, dim = {v.group.dim}, verdict {v.verdict}")

# count verdicts over small hyperbolic triples for the first few ranks
for rank in range(1, 6):
    counts = {}
    for t in hyperbolic_triples(12):
        verdict = classify_adjoint_A(rank, t).verdict
        counts[verdict] = counts.get(verdict, 0) + 1
    print(f"rank {rank}: {counts}")

# past these Coxeter numbers the bound is negative, so every larger triple is nonrigid
for triple in ((2, 3, 7), (2, 4, 5), (3, 3, 4)):
    h = next(h for h in range(2, 100) if nonrigidity_bound(h, triple) < 0)
    print(f"{triple}: bound negative from h = {h}, value there {nonrigidity_bound(h, triple)}")

# Sp_4 in odd characteristic, read off the tables
sp4 = GroupDescriptor("C", 2, "simply_connected", p=5)
for t in ((3, 3, 4), (3, 3, 5), (2, 3, 7)):
    print(f"Sp_4, p = 5, {t}: {table_lookup(sp4, t)}")
