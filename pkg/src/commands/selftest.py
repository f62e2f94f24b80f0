"""
Selftest command — executable checks of the identities the toolkit relies on

Every check is a CheckResult (name, residual, tolerance, passed). A failed
check is a report line and exit status 4, never an exception.
"""

from __future__ import annotations

import argparse
import logging
import math
from dataclasses import dataclass

import numpy as np

from ..core.constants import COLORS
from ..core.errors import OutOfDomainError
from ..core.matrix_io import dumps_json
from ..sensing.bounds import constants
from ..sensing.decompose import SparseDecomposition, convex_k_sparse_decompose, validate_decomposition
from ..sensing.drip import classical_rip_constant, delta_exact, delta_lower_mc
from ..sensing.frames import (
    Frame,
    analysis,
    identity_frame,
    mercedes_benz_frame,
    random_tight_frame,
    split_relation_terms,
)
from ..sensing.measurement import draw_sparse_signal, gaussian_measurement, measure
from ..sensing.numerics import SeededRng
from ..sensing.solver import SolverConfig, solve_l1_analysis
from ..types import CheckResult
from .output import csv_table, emit, status


logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-9
DECOMPOSE_TOL = 1e-10
RIP_TOL = 1e-10
CONSTANTS_TOL = 1e-12


@dataclass(frozen=True)
class SelftestReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict[str, object]:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def _frames(rng: SeededRng) -> list[Frame]:
    return [
        identity_frame(5),
        mercedes_benz_frame(),
        random_tight_frame(4, 7, rng.child(0)),
        random_tight_frame(6, 9, rng.child(1)),
    ]


def check_frame_identities(rng: SeededRng, inject_fault: bool = False) -> list[CheckResult]:
    """Parseval and the top-k split relation on random vectors"""
    # the fault flips the sign of the split relation's left-hand side
    sign = -1.0 if inject_fault else 1.0
    parseval = relation = 0.0
    draws = rng.child(2)
    for frame in _frames(rng):
        for k in range(1, frame.d + 1):
            h = draws.standard_normal(frame.p)
            coeffs = analysis(frame, h)
            parseval = max(parseval, abs(float(np.linalg.norm(coeffs)) - float(np.linalg.norm(h))))
            lhs, rhs = split_relation_terms(frame, h, k)
            relation = max(relation, abs(sign * lhs - rhs))
    return [
        CheckResult.within("frame_parseval", parseval, IDENTITY_TOL),
        CheckResult.within("frame_split_relation", relation, IDENTITY_TOL),
    ]


def check_decompositions(rng: SeededRng, rounds: int = 40) -> list[CheckResult]:
    """Round trips through both strategies plus two negative controls"""
    worst = 0.0
    failures = 0
    last_v: np.ndarray | None = None
    last_dec: SparseDecomposition | None = None
    for r in range(rounds):
        sub = rng.child(100 + r)
        strategy = "pairwise" if r % 4 == 0 else "peel"
        n = int(sub.uniform(1)[0] * (7 if strategy == "pairwise" else 16)) + 2
        k = int(sub.uniform(1)[0] * (n - 1)) + 1
        v = sub.standard_normal(n)
        cap = max(float(np.abs(v).sum()), k * float(np.abs(v).max()))
        dec = convex_k_sparse_decompose(v, k, cap, strategy=strategy)
        report = validate_decomposition(v, dec, tol=DECOMPOSE_TOL)
        failures += 0 if report.passed else 1
        worst = max(worst, report.get("reconstruction").residual)
        if dec.size > 1:
            last_v, last_dec = v, dec

    # negative controls: a perturbed weight and a dropped atom must both be caught
    if last_v is not None and last_dec is not None:
        weights = list(last_dec.weights)
        weights[0] += 1e-3
        bumped = SparseDecomposition(last_dec.atoms, tuple(weights), last_dec.k, last_dec.cap)
        dropped = SparseDecomposition(last_dec.atoms[1:], last_dec.weights[1:], last_dec.k, last_dec.cap)
        missed = float(sum(validate_decomposition(last_v, bad, tol=DECOMPOSE_TOL).passed for bad in (bumped, dropped)))
    else:
        missed = 1.0

    return [
        CheckResult.within("decomposition_round_trips", float(failures), 0.0),
        CheckResult.within("decomposition_reconstruction", worst, DECOMPOSE_TOL),
        CheckResult.within("decomposition_negative_controls", missed, 0.0),
    ]


def check_rip_reduction(rng: SeededRng, instances: int = 10) -> CheckResult:
    """delta_k of the identity frame against the column-slice RIP constant"""
    worst = 0.0
    for i in range(instances):
        sub = rng.child(200 + i)
        p = 3 + i % 5
        n = 2 + (i * 3) % 7
        k = 1 + i % 3
        phi = gaussian_measurement(n, p, sub)
        exact = delta_exact(phi, identity_frame(p), min(k, p)).delta
        classical = classical_rip_constant(phi, min(k, p))
        worst = max(worst, abs(exact - classical))
    return CheckResult.within("rip_reduction", worst, RIP_TOL)


def check_constants() -> list[CheckResult]:
    """Spot values, and the refusal at 2/3"""
    c = constants(0.0)
    at_zero = max(abs(c.c0_prime - 2.0), abs(c.c1_prime), abs(c.c0 - 4.0), abs(c.c1 - 2.0))
    third = abs(constants(1.0 / 3.0).c0_prime - 8.0 / math.sqrt(3.0))
    try:
        constants(2.0 / 3.0)
        refused = 1.0
    except OutOfDomainError:
        refused = 0.0
    return [
        CheckResult.within("constants_at_zero", at_zero, CONSTANTS_TOL),
        CheckResult.within("constants_at_one_third", third, CONSTANTS_TOL),
        CheckResult.within("constants_refuse_two_thirds", refused, 0.0),
    ]


def check_sampling_soundness(rng: SeededRng, instances: int = 5) -> CheckResult:
    """Monte-Carlo lower bounds never exceed the exact constant"""
    excess = 0.0
    for i in range(instances):
        sub = rng.child(300 + i)
        frame = random_tight_frame(4, 6, sub.child(0))
        phi = gaussian_measurement(5, 4, sub.child(1))
        exact = delta_exact(phi, frame, 2).delta
        lower = delta_lower_mc(phi, frame, 2, 500, sub.child(2)).delta
        excess = max(excess, lower - exact)
    return CheckResult.within("sampling_soundness", max(excess, 0.0), 1e-9)


def check_solver(rng: SeededRng) -> list[CheckResult]:
    """Feasibility and the minimality witness on a small noisy instance"""
    frame = random_tight_frame(6, 8, rng.child(400))
    phi = gaussian_measurement(6, 6, rng.child(401))
    _, beta = draw_sparse_signal(frame, 1, rng.child(402))
    inst = measure(phi, beta, 0.05, 1.0, rng.child(403))
    cfg = SolverConfig()
    result = solve_l1_analysis(phi, frame, inst.y, inst.eps, cfg)

    reference = float(np.abs(analysis(frame, beta)).sum())
    return [
        CheckResult.within("solver_converged", 0.0 if result.converged else 1.0, 0.0),
        CheckResult.within("solver_feasibility", result.feas_residual, cfg.feas_slack),
        CheckResult.within("solver_minimality", max(result.objective - reference, 0.0), 1e-6),
    ]


def run_selftest(seed: int = 0, inject_fault: bool = False) -> SelftestReport:
    """Run every check; inject_fault breaks the split-relation check on purpose"""
    rng = SeededRng(seed)
    checks: list[CheckResult] = []
    checks += check_frame_identities(rng.child(0), inject_fault=inject_fault)
    checks += check_decompositions(rng.child(1))
    checks.append(check_rip_reduction(rng.child(2)))
    checks += check_constants()
    checks.append(check_sampling_soundness(rng.child(3)))
    checks += check_solver(rng.child(4))

    failed = [c.name for c in checks if not c.passed]
    if failed:
        logger.error("selftest failed: %s", ", ".join(failed))
    return SelftestReport(checks=tuple(checks))


def cmd_selftest(args: argparse.Namespace) -> bool:
    """Print one line per check to stderr and the report to --out/stdout"""
    report = run_selftest(seed=args.seed, inject_fault=args.inject_fault)
    for c in report.checks:
        line = f"{c.name}: residual {c.residual:.3e} (tolerance {c.tolerance:.1e})"
        status(COLORS.success(line) if c.passed else COLORS.error(line))

    if args.format == "csv":
        emit(args, csv_table([c.to_dict() for c in report.checks]))
    else:
        emit(args, dumps_json(report.to_dict()))
    return report.passed
