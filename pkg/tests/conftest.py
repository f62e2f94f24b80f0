"""
Shared fixtures
"""

from __future__ import annotations

import itertools
from pathlib import Path
from typing import Callable, Optional

import numpy as np
import pytest

from src.core.config import Config, set_config
from src.core.matrix_io import write_matrix
from src.sensing.frames import (
    Frame,
    identity_frame,
    mercedes_benz_frame,
    random_tight_frame,
    save_frame,
)
from src.sensing.numerics import SeededRng


@pytest.fixture(autouse=True)
def default_config():
    """Every test sees the built-in defaults, never a local drip.yaml"""
    set_config(Config())
    yield
    set_config(None)


@pytest.fixture
def rng() -> SeededRng:
    return SeededRng(12345)


@pytest.fixture
def temp_dir(tmp_path: Path) -> Path:
    return tmp_path


@pytest.fixture
def identity8() -> Frame:
    return identity_frame(8)


@pytest.fixture
def mercedes() -> Frame:
    return mercedes_benz_frame()


@pytest.fixture
def tight_4x7(rng: SeededRng) -> Frame:
    return random_tight_frame(4, 7, rng.child(99))


@pytest.fixture
def all_frames(rng: SeededRng) -> list[Frame]:
    """One frame per constructor"""
    return [
        identity_frame(6),
        mercedes_benz_frame(),
        random_tight_frame(5, 9, rng.child(7)),
    ]


@pytest.fixture
def small_problem_files(temp_dir: Path, rng: SeededRng):
    """Phi, frame and a 1-sparse beta on disk for CLI tests"""
    frame = identity_frame(6)
    phi = rng.child(1).standard_normal((6, 6)) / np.sqrt(6)
    beta = np.zeros(6)
    beta[2] = 1.5

    paths = {
        "phi": temp_dir / "phi.csv",
        "frame": temp_dir / "frame.csv",
        "beta": temp_dir / "beta.csv",
        "y": temp_dir / "y.csv",
    }
    write_matrix(paths["phi"], phi)
    save_frame(frame, paths["frame"])
    write_matrix(paths["beta"], beta)
    write_matrix(paths["y"], phi @ beta)
    return paths


def _lp_vertices(phi: np.ndarray, y: np.ndarray, tol: float):
    """Basic feasible solutions of min ||g||_1 s.t. Phi g = y, with their l1 norms"""
    n, p = phi.shape
    if not np.any(y):
        yield np.zeros(p), 0.0
        return
    for size in range(1, min(n, p) + 1):
        for support in itertools.combinations(range(p), size):
            cols = phi[:, list(support)]
            if np.linalg.matrix_rank(cols) < size:
                continue
            coef, *_ = np.linalg.lstsq(cols, y, rcond=None)
            if np.linalg.norm(cols @ coef - y) > tol * max(1.0, float(np.linalg.norm(y))):
                continue
            g = np.zeros(p)
            g[list(support)] = coef
            yield g, float(np.abs(coef).sum())


@pytest.fixture
def lp_oracle() -> Callable[..., tuple[np.ndarray, float, Optional[float]]]:
    """
    Exact l1 minimiser (identity frame, eps = 0) by vertex enumeration.

    Returns (minimiser, optimal value, best value among vertices that are
    a different point). The minimiser is unique when the last value is
    strictly larger than the optimum or None.
    """
    def solve(phi: np.ndarray, y: np.ndarray, tol: float = 1e-10):
        best: Optional[np.ndarray] = None
        best_val = np.inf
        vertices = list(_lp_vertices(phi, y, tol))
        for g, val in vertices:
            if val < best_val:
                best, best_val = g, val
        assert best is not None, "no feasible vertex"
        others = [val for g, val in vertices if np.max(np.abs(g - best)) > 1e-8]
        return best, best_val, (min(others) if others else None)

    return solve
