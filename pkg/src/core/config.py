"""
Configuration management
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import yaml

from .constants import (
    DEFAULT_ATOM_BUDGET,
    DEFAULT_CHECK_TOL,
    DEFAULT_ENUMERATION_BUDGET,
    DEFAULT_FEAS_SLACK,
    DEFAULT_MAX_ITERS,
    DEFAULT_MC_SAMPLES,
    DEFAULT_NORM_ITERS,
    DEFAULT_RANK_TOL,
    DEFAULT_SOLVER_TOL,
    DEFAULT_STEP_RATIO,
    DEFAULT_ZERO_TOL,
    VERSION,
)


logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).parent.parent.parent / "drip.yaml"


@dataclass
class Config:
    """Main toolkit config"""
    version: str = VERSION

    # Numerics
    rank_tol: float = DEFAULT_RANK_TOL
    norm_iters: int = DEFAULT_NORM_ITERS

    # D-RIP certification
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET
    mc_samples: int = DEFAULT_MC_SAMPLES

    # Sparse decomposition
    atom_budget: int = DEFAULT_ATOM_BUDGET
    zero_tol: float = DEFAULT_ZERO_TOL
    decompose_strategy: str = "peel"

    # Solver
    max_iters: int = DEFAULT_MAX_ITERS
    solver_tol: float = DEFAULT_SOLVER_TOL
    feas_slack: float = DEFAULT_FEAS_SLACK
    step_ratio: float = DEFAULT_STEP_RATIO

    # Theorem check
    check_tol: float = DEFAULT_CHECK_TOL

    # Experiment defaults
    p: int = 8
    d: int = 8
    n: int = 8
    k: int = 1
    eps: float = 0.0
    frame_kind: str = "identity"
    noise_fraction: float = 1.0
    trials: int = 20
    seed: int = 1

    @classmethod
    def load(cls, path: Optional[Path] = None) -> Config:
        """Load config from file"""
        if path is None:
            path = DEFAULT_CONFIG_PATH

        if not path.exists():
            return cls()

        try:
            with open(path, encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
            return cls.from_dict(data)
        except Exception as e:
            logger.warning("Ignoring unreadable config %s: %s", path, e)
            return cls()

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Config:
        """Build config from the nested YAML layout"""
        numerics = data.get("numerics", {}) or {}
        drip = data.get("drip", {}) or {}
        decompose = data.get("decompose", {}) or {}
        solver = data.get("solver", {}) or {}
        bounds = data.get("bounds", {}) or {}
        experiment = data.get("experiment", {}) or {}
        default = cls()

        return cls(
            version=str(data.get("version", default.version)),
            rank_tol=float(numerics.get("rank_tol", default.rank_tol)),
            norm_iters=int(numerics.get("norm_iters", default.norm_iters)),
            enumeration_budget=int(drip.get("enumeration_budget", default.enumeration_budget)),
            mc_samples=int(drip.get("mc_samples", default.mc_samples)),
            atom_budget=int(decompose.get("atom_budget", default.atom_budget)),
            zero_tol=float(decompose.get("zero_tol", default.zero_tol)),
            decompose_strategy=str(decompose.get("strategy", default.decompose_strategy)),
            max_iters=int(solver.get("max_iters", default.max_iters)),
            solver_tol=float(solver.get("tol", default.solver_tol)),
            feas_slack=float(solver.get("feas_slack", default.feas_slack)),
            step_ratio=float(solver.get("step_ratio", default.step_ratio)),
            check_tol=float(bounds.get("check_tol", default.check_tol)),
            p=int(experiment.get("p", default.p)),
            d=int(experiment.get("d", default.d)),
            n=int(experiment.get("n", default.n)),
            k=int(experiment.get("k", default.k)),
            eps=float(experiment.get("eps", default.eps)),
            frame_kind=str(experiment.get("frame_kind", default.frame_kind)),
            noise_fraction=float(experiment.get("noise_fraction", default.noise_fraction)),
            trials=int(experiment.get("trials", default.trials)),
            seed=int(experiment.get("seed", default.seed)),
        )

    def to_dict(self) -> dict[str, Any]:
        """Nested YAML layout"""
        return {
            "version": self.version,
            "numerics": {
                "rank_tol": self.rank_tol,
                "norm_iters": self.norm_iters,
            },
            "drip": {
                "enumeration_budget": self.enumeration_budget,
                "mc_samples": self.mc_samples,
            },
            "decompose": {
                "atom_budget": self.atom_budget,
                "zero_tol": self.zero_tol,
                "strategy": self.decompose_strategy,
            },
            "solver": {
                "max_iters": self.max_iters,
                "tol": self.solver_tol,
                "feas_slack": self.feas_slack,
                "step_ratio": self.step_ratio,
            },
            "bounds": {
                "check_tol": self.check_tol,
            },
            "experiment": {
                "p": self.p,
                "d": self.d,
                "n": self.n,
                "k": self.k,
                "eps": self.eps,
                "frame_kind": self.frame_kind,
                "noise_fraction": self.noise_fraction,
                "trials": self.trials,
                "seed": self.seed,
            },
        }

    def save(self, path: Optional[Path] = None) -> None:
        """Save config to file"""
        if path is None:
            path = DEFAULT_CONFIG_PATH

        with open(path, "w", encoding="utf-8") as f:
            yaml.safe_dump(self.to_dict(), f, default_flow_style=False, sort_keys=False)


# === Global state ===

_config: Optional[Config] = None


def get_config() -> Config:
    """Get global config"""
    global _config
    if _config is None:
        _config = Config.load()
    return _config


def set_config(config: Optional[Config]) -> None:
    """Replace the global config (None resets to the file on next access)"""
    global _config
    _config = config
