"""Generation of finite symplectic groups by triangle groups.

Finite fields and exact polynomials, 4x4 symplectic matrices, trace identities
for pairs of order-3 matrices, rigidity of hyperbolic triples, and the
finiteness certificate for (3,3,c)-generation of Sp_4(p^r).
"""

__version__ = "0.1.0"

from .gf import GF, FieldCtx, FieldElement, generated_subfield_degree, make_ext
from .matsp import Mat4, is_abc_pair, generates_sp4, trace_witness
from .rigidity import Triple, GroupDescriptor, classify_adjoint_A, table_lookup
from .certificate import build_certificate, certified_bound, psp_bound

__all__ = [
    "GF", "FieldCtx", "FieldElement", "generated_subfield_degree", "make_ext",
    "Mat4", "is_abc_pair", "generates_sp4", "trace_witness",
    "Triple", "GroupDescriptor", "classify_adjoint_A", "table_lookup",
    "build_certificate", "certified_bound", "psp_bound",
]
