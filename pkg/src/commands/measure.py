"""
Measure command — sensing matrices and noisy measurements
"""

from __future__ import annotations

import argparse

from ..core.config import get_config
from ..core.constants import COLORS
from ..core.matrix_io import format_matrix_csv, read_matrix, read_vector
from ..sensing.measurement import (
    MeasurementMatrix,
    SignalInstance,
    gaussian_measurement,
    instance_to_dict,
    measure,
    orthonormal_measurement,
)
from ..sensing.numerics import SeededRng
from .output import emit, emit_record, status


def draw_matrix(n: int, p: int, seed: int, orthonormal: bool = False) -> MeasurementMatrix:
    """Gaussian N(0, 1/n) draw, or orthonormal columns when requested"""
    rng = SeededRng(seed)
    if orthonormal:
        return orthonormal_measurement(n, p, rng)
    return gaussian_measurement(n, p, rng)


def cmd_measure(args: argparse.Namespace) -> bool:
    """measure matrix | measure signal"""
    config = get_config()

    if args.measure_command == "matrix":
        n = args.n if args.n is not None else config.n
        p = args.p if args.p is not None else config.p
        phi = draw_matrix(n, p, args.seed, orthonormal=args.orthonormal)
        status(COLORS.info(f"{'orthonormal' if args.orthonormal else 'gaussian'} Phi {phi.n}x{phi.p}"))
        emit(args, format_matrix_csv(phi.Phi))
        return True

    # signal
    phi = MeasurementMatrix(read_matrix(args.phi))
    beta = read_vector(args.beta)
    eps = args.eps if args.eps is not None else config.eps
    fraction = args.noise_fraction if args.noise_fraction is not None else config.noise_fraction
    inst: SignalInstance = measure(phi, beta, eps, fraction, SeededRng(args.seed))

    if args.format == "csv":
        emit(args, format_matrix_csv(inst.y))
    else:
        emit_record(args, instance_to_dict(inst))
    return True
