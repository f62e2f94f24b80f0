"""
Bounds — error constants and the reconstruction inequality

    ||beta - beta_hat||_2 <= C0 eps + C1 ||D^T beta - (D^T beta)_max(k)||_1 / sqrt(k)

with C0 = 2 c0', C1 = 2 (c1' + 1) and, for 0 <= delta_2k < 2/3,

    c0' = 4 sqrt(1 + delta) / (3 (2/3 - delta))
    c1' = (4 delta + sqrt(6 delta (2/3 - delta))) / (3 (2/3 - delta))
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..core.constants import DEFAULT_CHECK_TOL, THEOREM_DELTA_BOUND
from ..core.errors import InvalidInputError, OutOfDomainError
from ..types import TheoremCheckDict
from .drip import DripCertificate
from .frames import Frame, analysis, top_k_support
from .measurement import MeasurementMatrix, SignalInstance
from .solver import RecoveryResult


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundConstants:
    delta: float
    c0_prime: float
    c1_prime: float
    c0: float
    c1: float


@dataclass(frozen=True)
class TheoremCheck:
    """Both sides of the bound for one recovery, plus proof-side diagnostics"""
    measured_error: float
    rhs: float
    margin: float
    holds: bool
    delta: float
    c0: float
    c1: float
    tail: float
    eps: float
    k: int
    cone_residual: float
    tube_residual: float | None = None


def constants(delta: float) -> BoundConstants:
    """Closed-form constants for 0 <= delta < 2/3"""
    if not math.isfinite(delta) or delta < 0:
        raise InvalidInputError(f"delta must be a finite value >= 0, got {delta}")
    if delta >= THEOREM_DELTA_BOUND:
        raise OutOfDomainError(f"constants need delta < 2/3, got {delta}")

    gap = THEOREM_DELTA_BOUND - delta
    c0_prime = 4.0 * math.sqrt(1.0 + delta) / (3.0 * gap)
    c1_prime = (4.0 * delta + math.sqrt(6.0 * delta * gap)) / (3.0 * gap)
    return BoundConstants(
        delta=delta,
        c0_prime=c0_prime,
        c1_prime=c1_prime,
        c0=2.0 * c0_prime,
        c1=2.0 * (c1_prime + 1.0),
    )


def tail_l1(frame: Frame, beta: npt.ArrayLike, k: int) -> float:
    """l1 norm of D^T beta outside its k largest-magnitude entries"""
    coeffs = analysis(frame, beta)
    top = top_k_support(coeffs, k)
    return float(np.abs(coeffs[~top.mask]).sum())


def theorem_check(
    inst: SignalInstance,
    result: RecoveryResult,
    cert: DripCertificate,
    frame: Frame,
    k: int,
    check_tol: float = DEFAULT_CHECK_TOL,
    phi: MeasurementMatrix | None = None,
) -> TheoremCheck:
    """
    Evaluate the reconstruction bound on one solved instance.

    Needs an exact certificate of delta_2k below 2/3 and a converged run.
    A failing bound on such inputs is a defect and is logged at ERROR.
    tube_residual is only computed when phi is given.
    """
    if cert.k != 2 * k:
        raise InvalidInputError(f"certificate is for delta_{cert.k}, the bound needs delta_{2 * k}")
    if not cert.is_exact:
        raise InvalidInputError("the bound needs an exact certificate, got a lower bound")
    if cert.delta >= THEOREM_DELTA_BOUND:
        raise InvalidInputError(f"delta_{cert.k} = {cert.delta:.6g} is not below 2/3")
    if not result.converged:
        raise InvalidInputError("the bound applies to converged recoveries only")
    if check_tol < 0:
        raise InvalidInputError(f"check_tol must be >= 0, got {check_tol}")

    consts = constants(cert.delta)
    beta = inst.beta
    h = result.gamma_hat - beta
    measured = float(np.linalg.norm(h))

    beta_coeffs = analysis(frame, beta)
    omega = top_k_support(beta_coeffs, k).mask
    tail = float(np.abs(beta_coeffs[~omega]).sum())
    rhs = consts.c0 * inst.eps + consts.c1 * tail / math.sqrt(k)
    margin = rhs - measured

    # side conditions for any minimiser; reported, not enforced
    h_coeffs = analysis(frame, h)
    tube: float | None = None
    if phi is not None:
        tube = float(np.linalg.norm(phi.Phi @ h)) - 2.0 * inst.eps
    cone = (
        float(np.abs(h_coeffs[~omega]).sum())
        - 2.0 * tail
        - float(np.abs(h_coeffs[omega]).sum())
    )

    check = TheoremCheck(
        measured_error=measured,
        rhs=rhs,
        margin=margin,
        holds=margin >= -check_tol,
        delta=cert.delta,
        c0=consts.c0,
        c1=consts.c1,
        tail=tail,
        eps=inst.eps,
        k=k,
        tube_residual=tube,
        cone_residual=cone,
    )
    if not check.holds:
        logger.error(
            "reconstruction bound violated: error %.12g > rhs %.12g (delta_%d = %.6g); "
            "this indicates a defect",
            measured, rhs, cert.k, cert.delta,
        )
    return check


def theorem_check_to_dict(check: TheoremCheck) -> TheoremCheckDict:
    return {
        "delta": check.delta,
        "c0": check.c0,
        "c1": check.c1,
        "tail": check.tail,
        "eps": check.eps,
        "k": check.k,
        "lhs": check.measured_error,
        "rhs": check.rhs,
        "margin": check.margin,
        "holds": check.holds,
        "tube_residual": check.tube_residual,
        "cone_residual": check.cone_residual,
    }
