"""
Decompose command — convex k-sparse decomposition of a vector
"""

from __future__ import annotations

import argparse

import numpy as np

from ..core.config import get_config
from ..core.constants import COLORS
from ..core.matrix_io import read_vector
from ..sensing.decompose import (
    convex_k_sparse_decompose,
    decomposition_to_dict,
    validate_decomposition,
)
from .output import emit_record, status


def cmd_decompose(args: argparse.Namespace) -> bool:
    """Decompose, re-validate, and emit atoms plus the check report"""
    config = get_config()
    v = read_vector(args.vector)
    # smallest cap that satisfies both preconditions
    cap = args.cap if args.cap is not None else max(
        float(np.abs(v).sum()), args.k * float(np.abs(v).max(initial=0.0))
    )
    strategy = args.strategy or config.decompose_strategy

    dec = convex_k_sparse_decompose(
        v, args.k, cap,
        strategy=strategy,
        zero_tol=config.zero_tol,
        atom_budget=config.atom_budget,
    )
    report = validate_decomposition(v, dec, zero_tol=config.zero_tol)

    if report.passed:
        status(COLORS.success(f"{dec.size} atoms, all checks passed"))
    else:
        status(COLORS.error(f"failed checks: {', '.join(report.failed_checks)}"))

    if args.format == "csv":
        emit_record(args, {
            "k": dec.k,
            "cap": dec.cap,
            "size": dec.size,
            "strategy": strategy,
            "passed": report.passed,
        })
    else:
        record = decomposition_to_dict(dec, zero_tol=config.zero_tol)
        record["checks"] = [c.to_dict() for c in report.checks]
        emit_record(args, record)
    return report.passed
