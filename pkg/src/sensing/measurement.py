"""
Measurement — sensing matrices and noisy measurements y = Phi beta + z
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from ..core.errors import InvalidInputError
from ..core.matrix_io import format_matrix_csv, parse_vector_csv
from ..types import DenseMatrix, Vector
from .frames import Frame, synthesis
from .numerics import SeededRng, as_dense, as_vector


logger = logging.getLogger(__name__)

# Relative slack when checking ||z|| <= eps on a stored instance
_NOISE_NORM_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class MeasurementMatrix:
    """The n x p sensing operator Phi"""
    Phi: DenseMatrix

    def __post_init__(self) -> None:
        phi = as_dense(self.Phi, name="Phi")
        if phi.shape[0] < 1 or phi.shape[1] < 1:
            raise InvalidInputError(f"Phi must be at least 1x1, got {phi.shape}")
        phi.setflags(write=False)
        object.__setattr__(self, "Phi", phi)

    @property
    def n(self) -> int:
        return int(self.Phi.shape[0])

    @property
    def p(self) -> int:
        return int(self.Phi.shape[1])


@dataclass(frozen=True, eq=False)
class SignalInstance:
    """A signal, its measurement, the noise and the noise budget"""
    beta: Vector
    y: Vector
    z: Vector
    eps: float

    def __post_init__(self) -> None:
        if self.eps < 0:
            raise InvalidInputError(f"eps must be >= 0, got {self.eps}")
        beta = as_vector(self.beta, name="beta")
        y = as_vector(self.y, name="y")
        z = as_vector(self.z, y.shape[0], name="z")
        if float(np.linalg.norm(z)) > self.eps * (1.0 + _NOISE_NORM_RTOL):
            raise InvalidInputError(f"||z|| = {np.linalg.norm(z):.17g} exceeds eps = {self.eps}")
        for name, arr in (("beta", beta), ("y", y), ("z", z)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "eps", float(self.eps))

    def residual_norm(self, phi: MeasurementMatrix) -> float:
        """||y - Phi beta||"""
        return float(np.linalg.norm(self.y - phi.Phi @ self.beta))


def gaussian_measurement(n: int, p: int, rng: SeededRng) -> MeasurementMatrix:
    """i.i.d. N(0, 1/n) entries"""
    if n < 1 or p < 1:
        raise InvalidInputError(f"n and p must be >= 1, got n={n}, p={p}")
    return MeasurementMatrix(rng.standard_normal((n, p)) / np.sqrt(n))


def orthonormal_measurement(n: int, p: int, rng: SeededRng) -> MeasurementMatrix:
    """Phi with orthonormal columns (Phi^T Phi = I_p), needs n >= p"""
    if not n >= p >= 1:
        raise InvalidInputError(f"orthonormal Phi needs n >= p >= 1, got n={n}, p={p}")
    q, r = np.linalg.qr(rng.standard_normal((n, p)))
    signs = np.where(np.diag(r) < 0, -1.0, 1.0)
    return MeasurementMatrix(q * signs)


def measure(
    phi: MeasurementMatrix,
    beta: npt.ArrayLike,
    eps: float,
    noise_fraction: float,
    rng: SeededRng,
) -> SignalInstance:
    """
    y = Phi beta + z with z uniform on the sphere of radius noise_fraction * eps.
    """
    if eps < 0:
        raise InvalidInputError(f"eps must be >= 0, got {eps}")
    if not 0.0 <= noise_fraction <= 1.0:
        raise InvalidInputError(f"noise_fraction must be in [0, 1], got {noise_fraction}")

    b = as_vector(beta, phi.p, name="beta")
    radius = noise_fraction * eps
    z = np.zeros(phi.n)
    if radius > 0:
        g = rng.standard_normal(phi.n)
        while not np.any(g):
            g = rng.standard_normal(phi.n)
        z = radius * g / np.linalg.norm(g)
        # rounding may push the norm a hair over eps
        norm = float(np.linalg.norm(z))
        if norm > eps:
            z *= eps / norm

    y = phi.Phi @ b + z
    return SignalInstance(beta=b, y=y, z=z, eps=eps)


def draw_sparse_signal(frame: Frame, k: int, rng: SeededRng) -> tuple[Vector, Vector]:
    """
    k-sparse synthesis coefficients v and the signal beta = D v.

    Support uniform over k-subsets, values standard normal.
    """
    if not 1 <= k <= frame.d:
        raise InvalidInputError(f"k must be in [1, {frame.d}], got {k}")
    support = list(rng.random_support(frame.d, k))
    v = np.zeros(frame.d)
    v[support] = rng.standard_normal(k)
    return v, synthesis(frame, v)


def instance_to_dict(inst: SignalInstance) -> dict[str, Any]:
    """JSON form with CSV-format vectors embedded as strings"""
    return {
        "eps": inst.eps,
        "beta": format_matrix_csv(inst.beta),
        "y": format_matrix_csv(inst.y),
        "z": format_matrix_csv(inst.z),
    }


def instance_from_dict(data: dict[str, Any]) -> SignalInstance:
    try:
        return SignalInstance(
            beta=parse_vector_csv(data["beta"], "beta"),
            y=parse_vector_csv(data["y"], "y"),
            z=parse_vector_csv(data["z"], "z"),
            eps=float(data["eps"]),
        )
    except KeyError as e:
        raise InvalidInputError(f"signal instance is missing field {e}") from e
