"""
Numerics — small dense linear-algebra kernels and seeded randomness

Everything here is a pure function of its inputs. Matrices are plain float64
numpy arrays; the problems this toolkit works on are desk scale (a few
hundred rows at most), so nothing is sparse or matrix-free except the
power iteration, which only needs the map and its adjoint.
"""

from __future__ import annotations

import logging
from typing import Callable

import numpy as np
import numpy.typing as npt
import scipy.linalg

from ..core.constants import DEFAULT_RANK_TOL, SYMMETRY_TOL
from ..core.errors import InvalidInputError
from ..types import DenseMatrix, Vector


logger = logging.getLogger(__name__)

LinearMap = Callable[[Vector], Vector]

_SEED_LIMIT = 2**64


class SeededRng:
    """
    Reproducible random stream.

    Wraps numpy's PCG64 bit generator, whose output sequence is documented
    and identical on every platform; normals come from numpy's ziggurat
    sampler. Two instances built from the same seed produce bit-identical
    draws.
    """

    def __init__(self, seed: int, spawn_key: tuple[int, ...] = ()) -> None:
        if not 0 <= int(seed) < _SEED_LIMIT:
            raise InvalidInputError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = int(seed)
        self.spawn_key = tuple(int(i) for i in spawn_key)
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=self.spawn_key)
        self._gen = np.random.Generator(np.random.PCG64(sequence))

    def __repr__(self) -> str:
        return f"SeededRng(seed={self.seed}, spawn_key={self.spawn_key})"

    def child(self, index: int) -> SeededRng:
        """Independent sub-stream keyed by (seed, spawn_key, index)"""
        return SeededRng(self.seed, self.spawn_key + (int(index),))

    def standard_normal(self, shape: int | tuple[int, ...]) -> npt.NDArray[np.float64]:
        return self._gen.standard_normal(shape)

    def uniform(self, shape: int | tuple[int, ...]) -> npt.NDArray[np.float64]:
        """Uniform draws on [0, 1)"""
        return self._gen.random(shape)

    def random_support(self, d: int, k: int) -> tuple[int, ...]:
        """Uniformly random k-subset of range(d), sorted"""
        if not 0 <= k <= d:
            raise InvalidInputError(f"cannot draw {k} indices out of {d}")
        keys = self.uniform(d)
        return tuple(sorted(int(i) for i in np.argsort(keys, kind="stable")[:k]))


def derive_seed(seed: int, index: int) -> int:
    """Deterministic 64-bit seed for sub-run `index` of a run seeded with `seed`"""
    state = np.random.SeedSequence([int(seed), int(index)]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def as_dense(matrix: npt.ArrayLike, name: str = "matrix") -> DenseMatrix:
    """Validated float64 2-D copy"""
    m = np.array(matrix, dtype=np.float64)
    if m.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return m


def as_vector(vector: npt.ArrayLike, length: int | None = None, name: str = "vector") -> Vector:
    """Validated float64 1-D copy, optionally with a required length"""
    v = np.array(vector, dtype=np.float64).reshape(-1)
    if length is not None and v.shape[0] != length:
        raise InvalidInputError(f"{name} has length {v.shape[0]}, expected {length}")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return v


def orthonormal_column_basis(
    matrix: npt.ArrayLike,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> tuple[DenseMatrix, int]:
    """
    Orthonormal basis of the column space of a matrix.

    Singular directions with singular value <= rank_tol * (largest singular
    value) are dropped.

    Returns:
        (Q, rank) with Q of shape (rows, rank)
    """
    if rank_tol <= 0:
        raise InvalidInputError(f"rank_tol must be positive, got {rank_tol}")
    m = as_dense(matrix)
    rows = m.shape[0]
    if m.size == 0:
        return np.zeros((rows, 0)), 0

    u, s, _ = np.linalg.svd(m, full_matrices=False)
    if s[0] == 0.0:
        return np.zeros((rows, 0)), 0

    rank = int(np.count_nonzero(s > rank_tol * s[0]))
    return u[:, :rank].copy(), rank


def symmetric_eig_extremes(matrix: npt.ArrayLike) -> tuple[float, float]:
    """Smallest and largest eigenvalue of a symmetric matrix"""
    s = as_dense(matrix)
    if s.shape[0] != s.shape[1] or s.shape[0] == 0:
        raise InvalidInputError(f"expected a non-empty square matrix, got shape {s.shape}")

    scale = max(1.0, float(np.max(np.abs(s))))
    asym = float(np.max(np.abs(s - s.T)))
    if asym > SYMMETRY_TOL * scale:
        raise InvalidInputError(f"matrix is not symmetric (max |S - S^T| = {asym:.3e})")

    w = scipy.linalg.eigh(0.5 * (s + s.T), eigvals_only=True, check_finite=False)
    return float(w[0]), float(w[-1])


def operator_norm_sq(
    apply: LinearMap,
    apply_adjoint: LinearMap,
    dim: int,
    iters: int,
    seed: SeededRng,
) -> float:
    """
    Squared spectral norm of a linear map by power iteration on A*A.

    The estimate is the running maximum of the Rayleigh quotients ||A x||^2
    over unit iterates, so it never decreases as iters grows.
    """
    if iters < 1:
        raise InvalidInputError(f"iters must be >= 1, got {iters}")
    if dim < 1:
        raise InvalidInputError(f"dim must be >= 1, got {dim}")

    x = seed.standard_normal(dim)
    x /= np.linalg.norm(x)
    estimate = 0.0

    for _ in range(iters):
        ax = apply(x)
        estimate = max(estimate, float(np.dot(ax, ax)))
        y = apply_adjoint(ax)
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            break
        x = y / norm

    logger.debug("operator_norm_sq(dim=%d, iters=%d) = %.12g", dim, iters, estimate)
    return estimate
