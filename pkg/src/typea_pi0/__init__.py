"""Connected components of tame type-A eigenvalue data, with certificates.

Vertices are elements ``w`` of the twisted Weyl group W0; each carries a
finite torsor ``S_w`` inside the diagonal torus of SL_n, modeled as an affine
system over Q/Z. Two vertices are joined when their torsors share a point over
a field of some allowed residue characteristic.
"""

from .abelian import FgAbGroup, cokernel, smith_normal_form, solve_affine_torsion
from .chains import Chain, ChainStep, chain_to_base, congruence_sum_1, congruence_sum_2, helper_edge, split_cycle
from .checker import verify_solution
from .errors import CapacityError, ContractViolation, UnsupportedModeError, VerificationError
from .lparam import (
    AllowedChars,
    EdgeWitness,
    RawSetup,
    TypeASetup,
    build_system,
    candidate_chars,
    direct_edge,
    exact_images_edge,
    make_setup,
    normalize_alpha,
    prime_power_alpha_hub,
    reduce_setup,
    verify_edge_witness,
)
from .report import ComponentReport, components, theorem_check
from .torus import TorusAction, cocycle_group, is_connected_over
from .weyl import Perm, enumerate_W0, s_cycle_decomposition

__all__ = [
    "AllowedChars",
    "CapacityError",
    "Chain",
    "ChainStep",
    "ComponentReport",
    "ContractViolation",
    "EdgeWitness",
    "FgAbGroup",
    "Perm",
    "RawSetup",
    "TorusAction",
    "TypeASetup",
    "UnsupportedModeError",
    "VerificationError",
    "build_system",
    "candidate_chars",
    "chain_to_base",
    "cocycle_group",
    "cokernel",
    "components",
    "congruence_sum_1",
    "congruence_sum_2",
    "direct_edge",
    "enumerate_W0",
    "exact_images_edge",
    "helper_edge",
    "is_connected_over",
    "make_setup",
    "normalize_alpha",
    "prime_power_alpha_hub",
    "reduce_setup",
    "s_cycle_decomposition",
    "smith_normal_form",
    "solve_affine_torsion",
    "split_cycle",
    "theorem_check",
    "verify_edge_witness",
    "verify_solution",
]
