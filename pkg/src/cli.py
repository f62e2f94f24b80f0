#!/usr/bin/env python3
"""
D-RIP Toolkit — CLI
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .commands import (
    cmd_decompose,
    cmd_drip,
    cmd_experiment,
    cmd_frame,
    cmd_measure,
    cmd_recover,
    cmd_selftest,
)
from .core.config import Config, get_config, set_config
from .core.constants import (
    COLORS,
    DECOMPOSE_STRATEGIES,
    EXIT_BUDGET,
    EXIT_INVALID_CONFIG,
    EXIT_OK,
    EXIT_SELFTEST_FAILED,
    FRAME_KINDS,
    VERSION,
)
from .core.errors import BudgetExceededError, DripError, InvalidInputError
from .core.log import setup_logger


EXIT_FAILED = 1


def build_parser() -> argparse.ArgumentParser:
    """Argument tree: global flags, then one subparser per command"""
    parser = argparse.ArgumentParser(
        prog="drip-toolkit",
        description="D-RIP toolkit: tight frames, delta_k certificates, l1-analysis recovery",
    )
    parser.add_argument("-V", "--version", action="version", version=f"D-RIP Toolkit v{VERSION}")
    parser.add_argument("--seed", type=int, default=None, help="Seed (default: drip.yaml)")
    parser.add_argument("--out", "-o", type=Path, default=None, help="Output file (default: stdout)")
    parser.add_argument("--format", "-f", default="json", choices=["json", "csv"])
    parser.add_argument("--config", "-c", type=Path, default=None, help="Config file (default: drip.yaml)")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="Warnings only")

    subparsers = parser.add_subparsers(dest="command", help="Commands")

    # frame
    frame_p = subparsers.add_parser("frame", help="Tight frames")
    frame_sub = frame_p.add_subparsers(dest="frame_command", required=True)
    gen_p = frame_sub.add_parser("gen", help="Generate a frame")
    gen_p.add_argument("--kind", "-k", default="random_tight", choices=sorted(FRAME_KINDS))
    gen_p.add_argument("-p", type=int, default=None, help="Signal dimension")
    gen_p.add_argument("-d", type=int, default=None, help="Number of frame vectors")

    # measure
    measure_p = subparsers.add_parser("measure", help="Sensing matrices and measurements")
    measure_sub = measure_p.add_subparsers(dest="measure_command", required=True)
    matrix_p = measure_sub.add_parser("matrix", help="Draw Phi")
    matrix_p.add_argument("-n", type=int, default=None, help="Measurements")
    matrix_p.add_argument("-p", type=int, default=None, help="Signal dimension")
    matrix_p.add_argument("--orthonormal", action="store_true", help="Orthonormal columns (needs n >= p)")
    signal_p = measure_sub.add_parser("signal", help="y = Phi beta + z")
    signal_p.add_argument("--phi", type=Path, required=True)
    signal_p.add_argument("--beta", type=Path, required=True)
    signal_p.add_argument("--eps", type=float, default=None)
    signal_p.add_argument("--noise-fraction", type=float, default=None, dest="noise_fraction")

    # drip
    drip_p = subparsers.add_parser("drip", help="D-RIP constants")
    drip_sub = drip_p.add_subparsers(dest="drip_command", required=True)
    certify_p = drip_sub.add_parser("certify", help="Certify delta_k")
    certify_p.add_argument("--phi", type=Path, required=True)
    certify_p.add_argument("--frame", type=Path, required=True)
    certify_p.add_argument("-k", type=int, required=True)
    certify_p.add_argument("--method", default="exact", choices=["exact", "mc"])
    certify_p.add_argument("--samples", type=int, default=None)
    certify_p.add_argument("--workers", type=int, default=1)

    # decompose
    decompose_p = subparsers.add_parser("decompose", help="Convex k-sparse decomposition")
    decompose_p.add_argument("--vector", type=Path, required=True)
    decompose_p.add_argument("-k", type=int, required=True)
    decompose_p.add_argument("--cap", type=float, default=None, help="C (default: smallest valid)")
    decompose_p.add_argument("--strategy", default=None, choices=list(DECOMPOSE_STRATEGIES))

    # recover
    recover_p = subparsers.add_parser("recover", help="l1-analysis recovery")
    recover_p.add_argument("--phi", type=Path, required=True)
    recover_p.add_argument("--frame", type=Path, required=True)
    recover_p.add_argument("--y", type=Path, required=True)
    recover_p.add_argument("--eps", type=float, default=None)
    recover_p.add_argument("--tol", type=float, default=None)
    recover_p.add_argument("--max-iters", type=int, default=None, dest="max_iters")
    recover_p.add_argument("--trace", action="store_true", help="Include the best-objective trace")

    # experiment
    exp_p = subparsers.add_parser("experiment", help="End-to-end bound check")
    exp_p.add_argument("-p", type=int, default=None)
    exp_p.add_argument("-d", type=int, default=None)
    exp_p.add_argument("-n", type=int, default=None)
    exp_p.add_argument("-k", type=int, default=None)
    exp_p.add_argument("--eps", type=float, default=None)
    exp_p.add_argument("--frame-kind", default=None, choices=sorted(FRAME_KINDS), dest="frame_kind")
    exp_p.add_argument("--noise-fraction", type=float, default=None, dest="noise_fraction")
    exp_p.add_argument("--trials", type=int, default=None)
    exp_p.add_argument("--orthonormal-phi", action="store_true", dest="orthonormal_phi")
    exp_p.add_argument("--workers", type=int, default=1)
    exp_p.add_argument("--timing", action="store_true", help="Record wall time per trial")
    exp_p.add_argument("--csv", type=Path, default=None, help="Also write the CSV summary here")

    # selftest
    selftest_p = subparsers.add_parser("selftest", help="Run the built-in checks")
    selftest_p.add_argument("--inject-fault", action="store_true", dest="inject_fault")

    return parser


def _load_config(path: Optional[Path]) -> Config:
    if path is None:
        return get_config()
    if not path.exists():
        raise InvalidInputError(f"config file not found: {path}")
    config = Config.load(path)
    set_config(config)
    return config


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse, dispatch and map errors to exit codes"""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logger(verbose=args.verbose, quiet=args.quiet)

    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_INVALID_CONFIG

    try:
        config = _load_config(args.config)
        if args.seed is None:
            args.seed = config.seed

        if args.command == "frame":
            ok = cmd_frame(args)

        elif args.command == "measure":
            ok = cmd_measure(args)

        elif args.command == "drip":
            ok = cmd_drip(args)

        elif args.command == "decompose":
            ok = cmd_decompose(args)

        elif args.command == "recover":
            ok = cmd_recover(args)

        elif args.command == "experiment":
            ok = cmd_experiment(args)

        elif args.command == "selftest":
            return EXIT_OK if cmd_selftest(args) else EXIT_SELFTEST_FAILED

        else:
            parser.error(f"unknown command {args.command!r}")

    except InvalidInputError as e:
        print(COLORS.error(str(e)), file=sys.stderr)
        return EXIT_INVALID_CONFIG
    except BudgetExceededError as e:
        print(COLORS.error(str(e)), file=sys.stderr)
        return EXIT_BUDGET
    except DripError as e:
        print(COLORS.error(str(e)), file=sys.stderr)
        return EXIT_FAILED

    return EXIT_OK if ok else EXIT_FAILED


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Entry point"""
    try:
        sys.exit(run(argv))
    except KeyboardInterrupt:
        print(f"\n{COLORS.colorize('Goodbye!', COLORS.CYAN)}", file=sys.stderr)
        sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
