"""
D-RIP command — certify delta_k for a (Phi, frame) pair
"""

from __future__ import annotations

import argparse

from ..core.config import get_config
from ..core.constants import COLORS, THEOREM_DELTA_BOUND
from ..core.matrix_io import read_matrix
from ..sensing.drip import DripCertificate, certificate_to_dict, delta_exact, delta_lower_mc
from ..sensing.frames import Frame, load_frame
from ..sensing.measurement import MeasurementMatrix
from ..sensing.numerics import SeededRng
from .output import emit_record, status


def certify(
    phi: MeasurementMatrix,
    frame: Frame,
    k: int,
    method: str = "exact",
    samples: int | None = None,
    seed: int = 0,
    workers: int = 1,
) -> DripCertificate:
    """Exact enumeration or a Monte-Carlo lower bound, with configured tolerances"""
    config = get_config()
    if method == "exact":
        return delta_exact(
            phi, frame, k,
            rank_tol=config.rank_tol,
            budget=config.enumeration_budget,
            workers=workers,
        )
    return delta_lower_mc(
        phi, frame, k,
        samples=samples if samples is not None else config.mc_samples,
        rng=SeededRng(seed),
        rank_tol=config.rank_tol,
    )


def cmd_drip(args: argparse.Namespace) -> bool:
    """drip certify"""
    phi = MeasurementMatrix(read_matrix(args.phi))
    cert = certify(phi, load_frame(args.frame), args.k, args.method, args.samples, args.seed, args.workers)

    if cert.delta >= THEOREM_DELTA_BOUND:
        status(COLORS.warning(f"delta_{cert.k} = {cert.delta:.6g} is not below 2/3"))
    elif cert.is_exact:
        status(COLORS.success(f"delta_{cert.k} = {cert.delta:.6g} < 2/3 (exact)"))
    else:
        status(COLORS.info(f"delta_{cert.k} >= {cert.delta:.6g} (lower bound, cannot certify)"))

    emit_record(args, certificate_to_dict(cert))
    return True
