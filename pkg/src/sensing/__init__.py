"""
Sensing — frames, D-RIP certification, l1-analysis recovery and the error bound
"""

from .bounds import BoundConstants, TheoremCheck, constants, tail_l1, theorem_check
from .decompose import (
    DecompositionReport,
    SparseDecomposition,
    convex_k_sparse_decompose,
    validate_decomposition,
)
from .drip import (
    DripCertificate,
    classical_rip_constant,
    delta_exact,
    delta_lower_mc,
    theorem_hypothesis_holds,
)
from .frames import (
    Frame,
    SupportSet,
    analysis,
    build_frame,
    identity_frame,
    mercedes_benz_frame,
    random_tight_frame,
    restrict_columns,
    synthesis,
    top_k_support,
)
from .measurement import (
    MeasurementMatrix,
    SignalInstance,
    gaussian_measurement,
    measure,
    orthonormal_measurement,
)
from .numerics import SeededRng, operator_norm_sq, orthonormal_column_basis, symmetric_eig_extremes
from .solver import RecoveryResult, SolverConfig, check_optimality_witness, solve_l1_analysis

__all__ = [
    "BoundConstants",
    "TheoremCheck",
    "constants",
    "tail_l1",
    "theorem_check",
    "DecompositionReport",
    "SparseDecomposition",
    "convex_k_sparse_decompose",
    "validate_decomposition",
    "DripCertificate",
    "classical_rip_constant",
    "delta_exact",
    "delta_lower_mc",
    "theorem_hypothesis_holds",
    "Frame",
    "SupportSet",
    "analysis",
    "build_frame",
    "identity_frame",
    "mercedes_benz_frame",
    "random_tight_frame",
    "restrict_columns",
    "synthesis",
    "top_k_support",
    "MeasurementMatrix",
    "SignalInstance",
    "gaussian_measurement",
    "measure",
    "orthonormal_measurement",
    "SeededRng",
    "operator_norm_sq",
    "orthonormal_column_basis",
    "symmetric_eig_extremes",
    "RecoveryResult",
    "SolverConfig",
    "check_optimality_witness",
    "solve_l1_analysis",
]
