"""
Frames — normalized tight frames and their analysis/synthesis views

A frame here is a p x d matrix D (d >= p) with orthonormal rows, D D^T = I.
Column restriction keeps the full p x d shape and zeroes the dropped
columns, so indices line up with the coefficient vector D^T x.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np
import numpy.typing as npt

from ..core.constants import FRAME_DRAW_ATTEMPTS, FRAME_KINDS, TIGHTNESS_TOL
from ..core.errors import DegenerateFrameError, InvalidInputError
from ..core.matrix_io import read_json, read_matrix, write_json, write_matrix
from ..types import DenseMatrix, FrameSidecar, Vector
from .numerics import SeededRng, as_dense, as_vector


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Frame:
    """Normalized tight frame (read-only after construction)"""
    D: DenseMatrix
    label: str

    def __post_init__(self) -> None:
        d_mat = as_dense(self.D, name="frame")
        p, d = d_mat.shape
        if p < 1:
            raise InvalidInputError("frame needs at least one row")
        if d < p:
            raise InvalidInputError(f"frame must have d >= p, got {p}x{d}")
        residual = _tightness_residual(d_mat)
        if residual > TIGHTNESS_TOL:
            raise InvalidInputError(
                f"frame '{self.label}' is not a normalized tight frame "
                f"(max |D D^T - I| = {residual:.3e})"
            )
        d_mat.setflags(write=False)
        object.__setattr__(self, "D", d_mat)

    @property
    def p(self) -> int:
        return int(self.D.shape[0])

    @property
    def d(self) -> int:
        return int(self.D.shape[1])

    def tightness_residual(self) -> float:
        """max |D D^T - I|"""
        return _tightness_residual(self.D)

    def sidecar(self) -> FrameSidecar:
        return {"label": self.label, "p": self.p, "d": self.d}


@dataclass(frozen=True)
class SupportSet:
    """Ordered set of distinct column indices in range(d)"""
    indices: tuple[int, ...]
    d: int
    _mask: npt.NDArray[np.bool_] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        idx = tuple(int(i) for i in self.indices)
        if len(set(idx)) != len(idx):
            raise InvalidInputError(f"support has repeated indices: {idx}")
        bad = [i for i in idx if not 0 <= i < self.d]
        if bad:
            raise InvalidInputError(f"support indices {bad} out of range for d = {self.d}")
        idx = tuple(sorted(idx))
        mask = np.zeros(self.d, dtype=bool)
        mask[list(idx)] = True
        mask.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "_mask", mask)

    @classmethod
    def from_indices(cls, indices: Iterable[int], d: int) -> SupportSet:
        return cls(tuple(indices), d)

    @property
    def mask(self) -> npt.NDArray[np.bool_]:
        return self._mask

    def __len__(self) -> int:
        return len(self.indices)

    def complement(self) -> SupportSet:
        return SupportSet(tuple(int(i) for i in np.flatnonzero(~self._mask)), self.d)


def _tightness_residual(d_mat: DenseMatrix) -> float:
    return float(np.max(np.abs(d_mat @ d_mat.T - np.eye(d_mat.shape[0]))))


# ══════════════════════════════════════════════════════════════
# Constructors
# ══════════════════════════════════════════════════════════════

def identity_frame(p: int) -> Frame:
    """D = I_p"""
    if p < 1:
        raise InvalidInputError(f"p must be >= 1, got {p}")
    return Frame(np.eye(p), label="identity")


def random_tight_frame(p: int, d: int, rng: SeededRng) -> Frame:
    """
    Polar factor U V^T of a p x d standard-normal draw.

    Rank-deficient draws are retried with fresh randomness.
    """
    if not d >= p >= 1:
        raise InvalidInputError(f"need d >= p >= 1, got p={p}, d={d}")

    for attempt in range(1, FRAME_DRAW_ATTEMPTS + 1):
        g = rng.standard_normal((p, d))
        u, s, vt = np.linalg.svd(g, full_matrices=False)
        if s[0] > 0 and s[-1] > TIGHTNESS_TOL * s[0]:
            return Frame(u @ vt, label="random_tight")
        logger.debug("random_tight_frame: draw %d rank-deficient, retrying", attempt)

    raise DegenerateFrameError(
        f"random_tight_frame({p}, {d}) drew {FRAME_DRAW_ATTEMPTS} rank-deficient matrices"
    )


def mercedes_benz_frame() -> Frame:
    """sqrt(2/3) * [[1, -1/2, -1/2], [0, sqrt(3)/2, -sqrt(3)/2]]"""
    h = math.sqrt(3.0) / 2.0
    d_mat = math.sqrt(2.0 / 3.0) * np.array([[1.0, -0.5, -0.5], [0.0, h, -h]])
    return Frame(d_mat, label="mercedes_benz")


def build_frame(kind: str, p: int, d: int, rng: SeededRng) -> Frame:
    """Dispatch on frame kind"""
    if kind == "identity":
        if d != p:
            raise InvalidInputError(f"identity frame needs d == p, got p={p}, d={d}")
        return identity_frame(p)
    if kind == "mercedes_benz":
        if (p, d) != (2, 3):
            raise InvalidInputError(f"mercedes_benz frame is 2x3, got p={p}, d={d}")
        return mercedes_benz_frame()
    if kind == "random_tight":
        return random_tight_frame(p, d, rng)
    raise InvalidInputError(f"unknown frame kind {kind!r}, expected one of {sorted(FRAME_KINDS)}")


# ══════════════════════════════════════════════════════════════
# Operators
# ══════════════════════════════════════════════════════════════

def analysis(frame: Frame, x: npt.ArrayLike) -> Vector:
    """D^T x"""
    return frame.D.T @ as_vector(x, frame.p, name="signal")


def synthesis(frame: Frame, v: npt.ArrayLike) -> Vector:
    """D v"""
    return frame.D @ as_vector(v, frame.d, name="coefficients")


def restrict_columns(frame: Frame, support: SupportSet) -> DenseMatrix:
    """D on the columns in support, zero elsewhere"""
    if support.d != frame.d:
        raise InvalidInputError(f"support is over {support.d} columns, frame has {frame.d}")
    out = np.zeros_like(frame.D)
    out[:, support.mask] = frame.D[:, support.mask]
    return out


def top_k_support(coeffs: npt.ArrayLike, k: int) -> SupportSet:
    """Indices of the k largest-magnitude entries; ties go to the lowest index"""
    c = as_vector(coeffs, name="coefficients")
    d = c.shape[0]
    if not 1 <= k <= d:
        raise InvalidInputError(f"k must be in [1, {d}], got {k}")
    order = np.argsort(-np.abs(c), kind="stable")
    return SupportSet(tuple(int(i) for i in order[:k]), d)


def split_relation_terms(frame: Frame, h: npt.ArrayLike, k: int) -> tuple[float, float]:
    """
    Both sides of the top-k split relation for a vector h.

    With T = top_k_support(D^T h, k) and D_T the column restriction:
    lhs = <D D_T^T h, D D_{T^C}^T h>, rhs = ||D_T^T h||^2 - ||D D_T^T h||^2.
    """
    hv = as_vector(h, frame.p, name="h")
    t = top_k_support(analysis(frame, hv), k)
    on_t = restrict_columns(frame, t).T @ hv
    off_t = restrict_columns(frame, t.complement()).T @ hv
    d_on = frame.D @ on_t
    d_off = frame.D @ off_t
    lhs = float(np.dot(d_on, d_off))
    rhs = float(np.dot(on_t, on_t)) - float(np.dot(d_on, d_on))
    return lhs, rhs


def frame_identity_residuals(frame: Frame, h: npt.ArrayLike, k: int) -> tuple[float, float]:
    """(Parseval residual | ||D^T h|| - ||h|| |, split relation residual |lhs - rhs|)"""
    hv = as_vector(h, frame.p, name="h")
    parseval = abs(float(np.linalg.norm(analysis(frame, hv))) - float(np.linalg.norm(hv)))
    lhs, rhs = split_relation_terms(frame, hv, k)
    return parseval, abs(lhs - rhs)


# ══════════════════════════════════════════════════════════════
# Files
# ══════════════════════════════════════════════════════════════

def sidecar_path(path: Path) -> Path:
    return path.with_suffix(".json")


def save_frame(frame: Frame, path: Path) -> None:
    """Write the frame matrix CSV and its JSON sidecar"""
    write_matrix(path, frame.D)
    write_json(sidecar_path(path), frame.sidecar())


def load_frame(path: Path) -> Frame:
    """Read a frame matrix (sidecar optional) and re-validate tightness"""
    d_mat = read_matrix(path)
    label = "loaded"
    side = sidecar_path(path)
    if side.exists():
        meta = read_json(side)
        label = str(meta.get("label", label))
        if (meta.get("p"), meta.get("d")) != d_mat.shape:
            raise InvalidInputError(
                f"{side}: sidecar says {meta.get('p')}x{meta.get('d')}, matrix is "
                f"{d_mat.shape[0]}x{d_mat.shape[1]}"
            )
    return Frame(d_mat, label=label)
