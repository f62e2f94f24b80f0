"""
Experiment command — end-to-end runs of the reconstruction bound

Each trial builds a frame, draws Phi and a k-sparse synthesis signal,
measures it, certifies delta_2k exactly, solves the l1-analysis program and
checks the bound. Trials are independent: trial t draws everything from its
own seed derive_seed(seed, t), so records do not depend on how many workers
ran them. Records are always returned in trial order.
"""

from __future__ import annotations

import argparse
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from ..core.config import Config, get_config
from ..core.constants import (
    COLORS,
    DEFAULT_CHECK_TOL,
    DEFAULT_ENUMERATION_BUDGET,
    DEFAULT_RANK_TOL,
    FRAME_KINDS,
    SCHEMA_VERSION,
    THEOREM_DELTA_BOUND,
)
from ..core.errors import InvalidInputError
from ..core.matrix_io import dumps_json, write_text
from ..sensing.bounds import tail_l1, theorem_check, theorem_check_to_dict
from ..sensing.drip import certificate_to_dict, check_enumeration_budget, delta_exact
from ..sensing.frames import build_frame
from ..sensing.measurement import draw_sparse_signal, gaussian_measurement, measure, orthonormal_measurement
from ..sensing.numerics import SeededRng, derive_seed
from ..sensing.solver import SolverConfig, recovery_to_dict, solve_l1_analysis
from ..types import SummaryRow, TrialStatus
from .output import csv_table, emit, status
from .recover import solver_config


logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ["seed", "delta2k", "eps", "tail", "lhs", "rhs", "margin", "holds"]


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of one experiment run"""
    p: int
    d: int
    n: int
    k: int
    eps: float
    frame_kind: str
    noise_fraction: float
    trials: int
    seed: int
    solver: SolverConfig = field(default_factory=SolverConfig)
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET
    orthonormal_phi: bool = False
    workers: int = 1
    timing: bool = False
    rank_tol: float = DEFAULT_RANK_TOL
    check_tol: float = DEFAULT_CHECK_TOL

    def __post_init__(self) -> None:
        if min(self.p, self.d, self.n, self.k) < 1:
            raise InvalidInputError("p, d, n and k must all be >= 1")
        if self.d < self.p:
            raise InvalidInputError(f"need d >= p, got p={self.p}, d={self.d}")
        if 2 * self.k > self.d:
            raise InvalidInputError(f"need 2k <= d for delta_2k, got k={self.k}, d={self.d}")
        if self.frame_kind not in FRAME_KINDS:
            raise InvalidInputError(f"unknown frame kind {self.frame_kind!r}")
        if self.frame_kind == "identity" and self.d != self.p:
            raise InvalidInputError(f"identity frame needs d == p, got p={self.p}, d={self.d}")
        if self.frame_kind == "mercedes_benz" and (self.p, self.d) != (2, 3):
            raise InvalidInputError("mercedes_benz frame needs p=2, d=3")
        if self.orthonormal_phi and self.n < self.p:
            raise InvalidInputError(f"orthonormal Phi needs n >= p, got n={self.n}, p={self.p}")
        if self.eps < 0:
            raise InvalidInputError(f"eps must be >= 0, got {self.eps}")
        if not 0.0 <= self.noise_fraction <= 1.0:
            raise InvalidInputError(f"noise_fraction must be in [0, 1], got {self.noise_fraction}")
        if self.trials < 1:
            raise InvalidInputError(f"trials must be >= 1, got {self.trials}")
        if self.workers < 1:
            raise InvalidInputError(f"workers must be >= 1, got {self.workers}")
        if not 0 <= self.seed < 2**64:
            raise InvalidInputError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @classmethod
    def from_config(cls, config: Config, **overrides: Any) -> ExperimentConfig:
        """Defaults from drip.yaml; overrides that are None are ignored"""
        values: dict[str, Any] = {
            "p": config.p,
            "d": config.d,
            "n": config.n,
            "k": config.k,
            "eps": config.eps,
            "frame_kind": config.frame_kind,
            "noise_fraction": config.noise_fraction,
            "trials": config.trials,
            "seed": config.seed,
            "solver": solver_config(),
            "enumeration_budget": config.enumeration_budget,
            "rank_tol": config.rank_tol,
            "check_tol": config.check_tol,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def to_dict(self) -> dict[str, Any]:
        """Config echo written into every record"""
        return {
            "p": self.p,
            "d": self.d,
            "n": self.n,
            "k": self.k,
            "eps": self.eps,
            "frame_kind": self.frame_kind,
            "noise_fraction": self.noise_fraction,
            "trials": self.trials,
            "seed": self.seed,
            "orthonormal_phi": self.orthonormal_phi,
            "enumeration_budget": self.enumeration_budget,
            "rank_tol": self.rank_tol,
            "check_tol": self.check_tol,
            "solver": {
                "max_iters": self.solver.max_iters,
                "tol": self.solver.tol,
                "feas_slack": self.solver.feas_slack,
                "step_ratio": self.solver.step_ratio,
                "norm_iters": self.solver.norm_iters,
            },
        }


@dataclass(frozen=True)
class ExperimentRecord:
    """Outcome of one trial"""
    trial: int
    seed: int
    status: TrialStatus
    config: dict[str, Any]
    certificate: dict[str, Any]
    recovery: dict[str, Any]
    tail: float
    measured_error: float
    check: Optional[dict[str, Any]] = None
    wall_time_s: Optional[float] = None

    @property
    def holds(self) -> Optional[bool]:
        return None if self.check is None else bool(self.check["holds"])

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "trial": self.trial,
            "seed": self.seed,
            "status": self.status,
            "config": self.config,
            "certificate": self.certificate,
            "recovery": self.recovery,
            "tail": self.tail,
            "measured_error": self.measured_error,
            "check": self.check,
        }
        if self.wall_time_s is not None:
            data["wall_time_s"] = self.wall_time_s
        return data

    def summary_row(self) -> SummaryRow:
        check = self.check or {}
        return {
            "seed": self.seed,
            "delta2k": float(self.certificate["delta"]),
            "eps": float(self.config["eps"]),
            "tail": self.tail,
            "lhs": check.get("lhs"),
            "rhs": check.get("rhs"),
            "margin": check.get("margin"),
            "holds": check.get("holds"),
        }


def run_trial(cfg: ExperimentConfig, trial: int) -> ExperimentRecord:
    """One independent trial; every draw comes from derive_seed(cfg.seed, trial)"""
    started = time.perf_counter()
    seed = derive_seed(cfg.seed, trial)
    rng = SeededRng(seed)

    frame = build_frame(cfg.frame_kind, cfg.p, cfg.d, rng.child(0))
    if cfg.orthonormal_phi:
        phi = orthonormal_measurement(cfg.n, cfg.p, rng.child(1))
    else:
        phi = gaussian_measurement(cfg.n, cfg.p, rng.child(1))
    _, beta = draw_sparse_signal(frame, cfg.k, rng.child(2))
    inst = measure(phi, beta, cfg.eps, cfg.noise_fraction, rng.child(3))

    cert = delta_exact(phi, frame, 2 * cfg.k, rank_tol=cfg.rank_tol, budget=cfg.enumeration_budget)
    result = solve_l1_analysis(phi, frame, inst.y, inst.eps, cfg.solver)
    measured = float(np.linalg.norm(result.gamma_hat - inst.beta))

    check = None
    trial_status: TrialStatus
    if cert.delta >= THEOREM_DELTA_BOUND:
        trial_status = "hypothesis_failed"
    elif not result.converged:
        trial_status = "not_converged"
    else:
        tc = theorem_check(inst, result, cert, frame, cfg.k, cfg.check_tol, phi=phi)
        check = dict(theorem_check_to_dict(tc))
        trial_status = "checked" if tc.holds else "bound_violated"

    logger.debug("trial %d (seed %d): %s, delta_2k %.6g", trial, seed, trial_status, cert.delta)
    return ExperimentRecord(
        trial=trial,
        seed=seed,
        status=trial_status,
        config=cfg.to_dict(),
        certificate=dict(certificate_to_dict(cert)),
        recovery=dict(recovery_to_dict(result)),
        tail=tail_l1(frame, inst.beta, cfg.k),
        measured_error=measured,
        check=check,
        wall_time_s=time.perf_counter() - started if cfg.timing else None,
    )


def run_experiment(cfg: ExperimentConfig) -> list[ExperimentRecord]:
    """
    Run cfg.trials trials and return their records in trial order.

    Refuses up front (BudgetExceededError) when exact certification of
    delta_2k would enumerate more than cfg.enumeration_budget supports.
    """
    check_enumeration_budget(cfg.d, 2 * cfg.k, cfg.enumeration_budget)

    if cfg.workers <= 1:
        records = [run_trial(cfg, t) for t in range(cfg.trials)]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(lambda t: run_trial(cfg, t), range(cfg.trials)))

    counts: dict[str, int] = {}
    for rec in records:
        counts[rec.status] = counts.get(rec.status, 0) + 1
    logger.info("experiment finished: %s", ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    return records


def records_to_jsonl(records: list[ExperimentRecord]) -> str:
    return "".join(dumps_json(r.to_dict()) + "\n" for r in records)


def summary_csv(records: list[ExperimentRecord]) -> str:
    return csv_table([dict(r.summary_row()) for r in records], columns=SUMMARY_COLUMNS)


def cmd_experiment(args: argparse.Namespace) -> bool:
    """Run the experiment and write JSONL (or the CSV summary with --format csv)"""
    cfg = ExperimentConfig.from_config(
        get_config(),
        p=args.p,
        d=args.d,
        n=args.n,
        k=args.k,
        eps=args.eps,
        frame_kind=args.frame_kind,
        noise_fraction=args.noise_fraction,
        trials=args.trials,
        seed=args.seed,
        orthonormal_phi=args.orthonormal_phi,
        workers=args.workers,
        timing=args.timing,
    )
    status(COLORS.info(
        f"{cfg.trials} trials: p={cfg.p} d={cfg.d} n={cfg.n} k={cfg.k} eps={cfg.eps} "
        f"frame={cfg.frame_kind} seed={cfg.seed}"
    ))
    records = run_experiment(cfg)

    if args.format == "csv":
        emit(args, summary_csv(records))
    else:
        emit(args, records_to_jsonl(records))
    csv_path: Optional[Path] = args.csv
    if csv_path is not None:
        write_text(csv_path, summary_csv(records))
        status(COLORS.success(f"Wrote summary {csv_path}"))

    violated = [r.trial for r in records if r.status == "bound_violated"]
    checked = sum(1 for r in records if r.status == "checked")
    if violated:
        status(COLORS.error(f"bound violated on trials {violated}"))
    else:
        status(COLORS.success(f"bound held on all {checked} checked trials"))
    return not violated
