"""
Frame command — generate a normalized tight frame
"""

from __future__ import annotations

import argparse

from ..core.config import get_config
from ..core.constants import COLORS
from ..core.matrix_io import format_matrix_csv
from ..sensing.frames import Frame, build_frame, save_frame
from ..sensing.numerics import SeededRng
from .output import emit, status


def generate_frame(kind: str, p: int, d: int, seed: int) -> Frame:
    """
    Build a frame of the given kind

    Args:
        kind: identity | mercedes_benz | random_tight
        p: Signal dimension
        d: Number of frame vectors
        seed: Seed for random_tight (ignored by the fixed frames)
    """
    return build_frame(kind, p, d, SeededRng(seed))


def _shape(args: argparse.Namespace) -> tuple[int, int]:
    if args.kind == "mercedes_benz":
        return args.p or 2, args.d or 3
    p = args.p if args.p is not None else get_config().p
    if args.kind == "identity":
        return p, args.d or p
    return p, args.d if args.d is not None else get_config().d


def cmd_frame(args: argparse.Namespace) -> bool:
    """frame gen"""
    p, d = _shape(args)
    frame = generate_frame(args.kind, p, d, args.seed)
    status(COLORS.info(
        f"{frame.label} frame {frame.p}x{frame.d}, tightness residual {frame.tightness_residual():.3e}"
    ))

    # matrices are always written in the CSV format
    if args.out is not None:
        save_frame(frame, args.out)
        status(COLORS.success(f"Wrote {args.out} (+ sidecar)"))
    else:
        emit(args, format_matrix_csv(frame.D))
    return True
