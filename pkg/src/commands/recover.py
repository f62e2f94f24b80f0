"""
Recover command — l1-analysis recovery from a measurement
"""

from __future__ import annotations

import argparse

from ..core.config import get_config
from ..core.constants import COLORS
from ..core.matrix_io import format_matrix_csv, read_matrix, read_vector
from ..sensing.frames import load_frame
from ..sensing.measurement import MeasurementMatrix
from ..sensing.solver import RecoveryResult, SolverConfig, recovery_to_dict, solve_l1_analysis
from .output import emit, emit_record, status


def solver_config(tol: float | None = None, max_iters: int | None = None) -> SolverConfig:
    """SolverConfig from drip.yaml with optional overrides"""
    config = get_config()
    return SolverConfig(
        max_iters=max_iters if max_iters is not None else config.max_iters,
        tol=tol if tol is not None else config.solver_tol,
        feas_slack=config.feas_slack,
        step_ratio=config.step_ratio,
        norm_iters=config.norm_iters,
    )


def cmd_recover(args: argparse.Namespace) -> bool:
    """Solve and emit the recovery diagnostics"""
    phi = MeasurementMatrix(read_matrix(args.phi))
    frame = load_frame(args.frame)
    y = read_vector(args.y)
    eps = args.eps if args.eps is not None else get_config().eps

    result: RecoveryResult = solve_l1_analysis(phi, frame, y, eps, solver_config(args.tol, args.max_iters))
    if result.converged:
        status(COLORS.success(f"converged in {result.iters_used} iterations, objective {result.objective:.10g}"))
    else:
        status(COLORS.warning(
            f"not converged after {result.iters_used} iterations "
            f"(feasibility residual {result.feas_residual:.3e})"
        ))

    if args.format == "csv":
        emit(args, format_matrix_csv(result.gamma_hat))
    else:
        emit_record(args, recovery_to_dict(result, include_trace=args.trace))
    return True
