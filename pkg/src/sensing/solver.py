"""
Solver — l1-analysis recovery

    minimize ||D^T gamma||_1  subject to  ||y - Phi gamma||_2 <= eps

solved with the primal-dual hybrid gradient (Chambolle-Pock) iteration on

    min_gamma F(K gamma),  K = [D^T; Phi],  F(a, b) = ||a||_1 + I{||b - y|| <= eps}

with no primal term. The dual prox of the l1 block is clipping to [-1, 1];
the dual prox of the ball block comes from the ball projection through the
Moreau identity. eps = 0 is the ball of radius zero, no special case.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from ..core.constants import (
    DEFAULT_FEAS_SLACK,
    DEFAULT_MAX_ITERS,
    DEFAULT_NORM_ITERS,
    DEFAULT_SOLVER_TOL,
    DEFAULT_STEP_RATIO,
    NORM_PADDING,
)
from ..core.errors import InvalidInputError
from ..types import RecoveryDict, Vector
from .frames import Frame, analysis
from .measurement import MeasurementMatrix
from .numerics import SeededRng, as_vector, operator_norm_sq


logger = logging.getLogger(__name__)

# Fixed start vector for the step-size power iteration
_NORM_SEED = 0


@dataclass(frozen=True)
class SolverConfig:
    """PDHG settings"""
    max_iters: int = DEFAULT_MAX_ITERS
    tol: float = DEFAULT_SOLVER_TOL
    feas_slack: float = DEFAULT_FEAS_SLACK
    step_ratio: float = DEFAULT_STEP_RATIO
    norm_iters: int = DEFAULT_NORM_ITERS

    def __post_init__(self) -> None:
        if self.max_iters < 1:
            raise InvalidInputError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.tol > 0:
            raise InvalidInputError(f"tol must be > 0, got {self.tol}")
        if not self.feas_slack >= 0:
            raise InvalidInputError(f"feas_slack must be >= 0, got {self.feas_slack}")
        if not self.step_ratio > 0:
            raise InvalidInputError(f"step_ratio must be > 0, got {self.step_ratio}")
        if self.norm_iters < 1:
            raise InvalidInputError(f"norm_iters must be >= 1, got {self.norm_iters}")


@dataclass(frozen=True, eq=False)
class RecoveryResult:
    """Solver output and diagnostics"""
    gamma_hat: Vector
    iters_used: int
    objective: float
    feas_residual: float
    converged: bool
    primal_change: float = 0.0
    dual_change: float = 0.0
    tau: float = 0.0
    sigma: float = 0.0
    best_objective_trace: tuple[float, ...] = field(default=())


def project_ball(x: Vector, center: Vector, radius: float) -> Vector:
    """Euclidean projection onto {u : ||u - center|| <= radius}"""
    offset = x - center
    norm = float(np.linalg.norm(offset))
    if norm <= radius:
        return x.copy()
    return center + offset * (radius / norm)


def _feasibility_gap(phi: npt.NDArray[np.float64], y: Vector, eps: float, gamma: Vector) -> float:
    return max(0.0, float(np.linalg.norm(y - phi @ gamma)) - eps)


def solve_l1_analysis(
    phi: MeasurementMatrix,
    frame: Frame,
    y: npt.ArrayLike,
    eps: float,
    cfg: SolverConfig | None = None,
) -> RecoveryResult:
    """
    Run PDHG from gamma_0 = Phi^T y with zero duals.

    Stops when the relative primal and dual iterate changes are both below
    cfg.tol and the constraint is met within cfg.feas_slack, or after
    cfg.max_iters. Not converging is reported in the result, not raised.
    """
    cfg = cfg or SolverConfig()
    if phi.p != frame.p:
        raise InvalidInputError(f"Phi has {phi.p} columns but the frame has {frame.p} rows")
    if eps < 0:
        raise InvalidInputError(f"eps must be >= 0, got {eps}")
    yv = as_vector(y, phi.n, name="y")

    A = phi.Phi
    D = frame.D

    def apply_k(x: Vector) -> Vector:
        return np.concatenate([D.T @ x, A @ x])

    def apply_kt(q: Vector) -> Vector:
        return D @ q[: frame.d] + A.T @ q[frame.d:]

    norm_sq = operator_norm_sq(apply_k, apply_kt, frame.p, cfg.norm_iters, SeededRng(_NORM_SEED))
    norm = math.sqrt(NORM_PADDING * norm_sq)
    tau = 1.0 / (cfg.step_ratio * norm)
    sigma = cfg.step_ratio / norm

    gamma = A.T @ yv
    gamma_bar = gamma.copy()
    q1 = np.zeros(frame.d)
    q2 = np.zeros(phi.n)

    best = math.inf
    trace: list[float] = []
    converged = False
    primal_change = dual_change = math.inf
    iters = 0

    for iters in range(1, cfg.max_iters + 1):
        # dual ascent
        q1_new = np.clip(q1 + sigma * (D.T @ gamma_bar), -1.0, 1.0)
        w = q2 + sigma * (A @ gamma_bar)
        q2_new = w - sigma * project_ball(w / sigma, yv, eps)

        # primal descent (no primal prox)
        gamma_new = gamma - tau * (D @ q1_new + A.T @ q2_new)
        gamma_bar = 2.0 * gamma_new - gamma

        primal_change = float(np.linalg.norm(gamma_new - gamma)) / max(1.0, float(np.linalg.norm(gamma_new)))
        dual_change = float(
            math.hypot(np.linalg.norm(q1_new - q1), np.linalg.norm(q2_new - q2))
        ) / max(1.0, float(math.hypot(np.linalg.norm(q1_new), np.linalg.norm(q2_new))))

        gamma, q1, q2 = gamma_new, q1_new, q2_new

        gap = _feasibility_gap(A, yv, eps, gamma)
        if gap <= cfg.feas_slack:
            obj = float(np.abs(D.T @ gamma).sum())
            if obj < best:
                best = obj
                trace.append(obj)

        if primal_change < cfg.tol and dual_change < cfg.tol and gap <= cfg.feas_slack:
            converged = True
            break

    objective = float(np.abs(analysis(frame, gamma)).sum())
    feas = _feasibility_gap(A, yv, eps, gamma)
    if converged:
        logger.info("PDHG converged in %d iterations, objective %.12g", iters, objective)
    else:
        logger.warning(
            "PDHG stopped after %d iterations without converging "
            "(primal %.3e, dual %.3e, feasibility %.3e)",
            iters, primal_change, dual_change, feas,
        )

    return RecoveryResult(
        gamma_hat=gamma,
        iters_used=iters,
        objective=objective,
        feas_residual=feas,
        converged=converged,
        primal_change=primal_change,
        dual_change=dual_change,
        tau=tau,
        sigma=sigma,
        best_objective_trace=tuple(trace),
    )


def check_optimality_witness(
    result: RecoveryResult,
    reference_gamma: npt.ArrayLike,
    frame: Frame,
    phi: MeasurementMatrix,
    y: npt.ArrayLike,
    eps: float,
    tol: float,
) -> bool:
    """
    True iff the solver objective does not exceed that of a feasible reference.
    """
    ref = as_vector(reference_gamma, phi.p, name="reference")
    yv = as_vector(y, phi.n, name="y")
    residual = float(np.linalg.norm(yv - phi.Phi @ ref))
    if residual > eps + tol:
        raise InvalidInputError(
            f"reference is infeasible: ||y - Phi ref|| = {residual:.6g} > eps + tol = {eps + tol:.6g}"
        )
    ref_objective = float(np.abs(analysis(frame, ref)).sum())
    return result.objective <= ref_objective + tol


def recovery_to_dict(result: RecoveryResult, include_trace: bool = False) -> RecoveryDict:
    data: RecoveryDict = {
        "gamma_hat": [float(x) for x in result.gamma_hat],
        "iters_used": result.iters_used,
        "objective": result.objective,
        "feas_residual": result.feas_residual,
        "converged": result.converged,
        "primal_change": _finite(result.primal_change),
        "dual_change": _finite(result.dual_change),
        "tau": result.tau,
        "sigma": result.sigma,
    }
    if include_trace:
        data["best_objective_trace"] = list(result.best_objective_trace)
    return data


def _finite(x: float) -> float:
    # JSON has no infinity; a run with zero iterations never sets a change
    return x if math.isfinite(x) else -1.0
