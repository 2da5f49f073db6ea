"""Quantum discord of qubit-qudit (2 x d) states.

Entropic discord with candidate / theta-only / full optimization modes
exploiting X-structure fast paths, plus the closed-form geometric
(Hilbert-Schmidt) discord with its nearest classical state.
"""

from .entropic import (
    CANDIDATE,
    FULL,
    THETA_ONLY,
    DiscordResult,
    MeasurementAngles,
    classical_correlation,
    conditional_entropy,
    conditional_state,
    entropic_discord,
    measurement_projector,
    mutual_information,
    phi_independence_check,
    z_vector,
)
from .geometric import (
    BlochDecomposition,
    ClassicalState,
    bloch_decompose,
    bloch_reconstruct,
    geometric_discord,
    geometric_discord_x_compact,
    operator_basis,
    oracle_min_over_classical,
)
from .matcore import (
    hermitian_eigenvalues,
    hs_inner,
    hs_norm_sq,
    kron,
    partial_trace,
    von_neumann_entropy,
)
from .states import (
    DensityMatrix,
    StructureClass,
    bell,
    classical_quantum,
    classify_structure,
    derive_seed,
    ghz,
    maximally_mixed,
    named_state,
    parameter_count,
    product,
    project_to_extended_x,
    project_to_x,
    sample_hs_random,
    validate,
    w_state,
    werner,
)
from .xblocks import OrbitDecomposition, eigenvalues_extended_x, eigenvalues_x, extended_x_orbits

__version__ = "0.1.0"

__all__ = [
    "CANDIDATE",
    "FULL",
    "THETA_ONLY",
    "BlochDecomposition",
    "ClassicalState",
    "DensityMatrix",
    "DiscordResult",
    "MeasurementAngles",
    "OrbitDecomposition",
    "StructureClass",
    "bell",
    "bloch_decompose",
    "bloch_reconstruct",
    "classical_correlation",
    "classical_quantum",
    "classify_structure",
    "conditional_entropy",
    "conditional_state",
    "derive_seed",
    "eigenvalues_extended_x",
    "eigenvalues_x",
    "entropic_discord",
    "extended_x_orbits",
    "geometric_discord",
    "geometric_discord_x_compact",
    "ghz",
    "hermitian_eigenvalues",
    "hs_inner",
    "hs_norm_sq",
    "kron",
    "maximally_mixed",
    "measurement_projector",
    "mutual_information",
    "named_state",
    "operator_basis",
    "oracle_min_over_classical",
    "parameter_count",
    "partial_trace",
    "phi_independence_check",
    "product",
    "project_to_extended_x",
    "project_to_x",
    "sample_hs_random",
    "validate",
    "von_neumann_entropy",
    "w_state",
    "werner",
    "z_vector",
]
