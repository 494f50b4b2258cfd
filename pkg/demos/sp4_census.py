"""
(3,3,c)-generation of Sp_4(q): search and certificate
=====================================================

Looks for generating pairs of order-3 elements with (g1 g2)^c = 1 in
small symplectic groups, then compares the field degree of each witness
with the candidate degrees enumerated from the constraint polynomials.
"""

from trigen.census import find_abc_pair
from trigen.certificate import build_certificate
from trigen.gf import GF, generated_subfield_degree
from trigen.traceid import charfield_generators

c = 7
for q in (2, 4, 7, 8):
    res = find_abc_pair(q, 3, 3, c, seed=0, max_samples=1500)
    how = "exhaustive" if res.exhaustive else "sampled"
    print(f"Sp_4({q}), (3,3,{c}): found={res.found} ({how})")
    if not res.found:
        continue
    x, y, z = charfield_generators(res.g1, res.g2)
    r = generated_subfield_degree([x, y, z])
    cert = build_certificate(GF(q).p, c)
    print(f"  character field degree {r}, certificate allows r in {cert.candidate_rs}")

# the certificate alone bounds r for every p
for p in (2, 3, 5, 7, 11):
    cert = build_certificate(p, c)
    print(f"p = {p}: candidate r for (3,3,{c}) = {cert.candidate_rs}")
