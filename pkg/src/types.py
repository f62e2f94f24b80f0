"""
Types for D-RIP Toolkit
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional, TypeAlias, TypedDict

import numpy as np
import numpy.typing as npt


# ======================================
# Type Aliases
# ======================================

DenseMatrix: TypeAlias = npt.NDArray[np.float64]
Vector: TypeAlias = npt.NDArray[np.float64]
CertificateMethod: TypeAlias = Literal["exact", "lower_bound"]
TrialStatus: TypeAlias = Literal["checked", "bound_violated", "hypothesis_failed", "not_converged"]


# ======================================
# TypedDicts (JSON records)
# ======================================

class FrameSidecar(TypedDict):
    """Sidecar written next to a frame CSV"""
    label: str
    p: int
    d: int


class CertificateDict(TypedDict):
    """Serialized DripCertificate"""
    k: int
    delta: float
    method: CertificateMethod
    supports_examined: int
    samples: int
    rank_tol: float


class RecoveryDict(TypedDict, total=False):
    """Serialized RecoveryResult"""
    gamma_hat: list[float]
    iters_used: int
    objective: float
    feas_residual: float
    converged: bool
    primal_change: float
    dual_change: float
    tau: float
    sigma: float
    best_objective_trace: list[float]


class TheoremCheckDict(TypedDict):
    """Serialized TheoremCheck with every intermediate quantity"""
    delta: float
    c0: float
    c1: float
    tail: float
    eps: float
    k: int
    lhs: float
    rhs: float
    margin: float
    holds: bool
    tube_residual: Optional[float]
    cone_residual: float


class SummaryRow(TypedDict):
    """One plot-ready CSV row of an experiment"""
    seed: int
    delta2k: float
    eps: float
    tail: Optional[float]
    lhs: Optional[float]
    rhs: Optional[float]
    margin: Optional[float]
    holds: Optional[bool]


# ======================================
# Reports
# ======================================

@dataclass(frozen=True)
class CheckResult:
    """One named check with its measured residual"""
    name: str
    residual: float
    tolerance: float
    passed: bool

    @classmethod
    def within(cls, name: str, residual: float, tolerance: float) -> CheckResult:
        """Pass iff residual <= tolerance"""
        residual = float(residual)
        return cls(name=name, residual=residual, tolerance=tolerance, passed=residual <= tolerance)

    def to_dict(self) -> dict[str, object]:
        return {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }
