"""
D-RIP — the dictionary-restricted isometry constant delta_k

delta_k is the smallest delta with

    (1 - delta) ||D v||^2 <= ||Phi D v||^2 <= (1 + delta) ||D v||^2

for every k-sparse v. Over a fixed support S the vectors D v range over the
column space of D_S, so with Q an orthonormal basis of that space the
constant for S is the largest deviation from 1 of the eigenvalues of
Q^T Phi^T Phi Q. Directions with D v = 0 satisfy the inequality trivially
and drop out through the rank truncation.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Any, Iterable, Iterator

import numpy as np

from ..core.constants import (
    DEFAULT_ENUMERATION_BUDGET,
    DEFAULT_RANK_TOL,
    THEOREM_DELTA_BOUND,
)
from ..core.errors import BudgetExceededError, IndeterminateError, InvalidInputError
from ..types import CertificateDict, CertificateMethod, DenseMatrix
from .frames import Frame
from .measurement import MeasurementMatrix
from .numerics import SeededRng, orthonormal_column_basis, symmetric_eig_extremes


logger = logging.getLogger(__name__)

_SUPPORT_CHUNK = 4096
_MC_BATCH = 4096


@dataclass(frozen=True)
class DripCertificate:
    """A certified (exact) or sampled (lower bound) value of delta_k"""
    k: int
    delta: float
    method: CertificateMethod
    supports_examined: int
    samples: int
    rank_tol: float

    def __post_init__(self) -> None:
        if self.delta < 0:
            raise InvalidInputError(f"delta must be >= 0, got {self.delta}")
        if self.method not in ("exact", "lower_bound"):
            raise InvalidInputError(f"unknown certificate method {self.method!r}")
        if self.k < 1:
            raise InvalidInputError(f"k must be >= 1, got {self.k}")
        if self.supports_examined < 0 or self.samples < 0:
            raise InvalidInputError("supports_examined and samples must be >= 0")
        if self.method == "exact" and (self.samples != 0 or self.supports_examined < 1):
            raise InvalidInputError(
                f"exact certificate needs samples = 0 and at least one support, "
                f"got samples={self.samples}, supports_examined={self.supports_examined}"
            )

    @property
    def is_exact(self) -> bool:
        return self.method == "exact"


def certificate_to_dict(cert: DripCertificate) -> CertificateDict:
    return {
        "k": cert.k,
        "delta": cert.delta,
        "method": cert.method,
        "supports_examined": cert.supports_examined,
        "samples": cert.samples,
        "rank_tol": cert.rank_tol,
    }


def certificate_from_dict(data: dict[str, Any], d: int | None = None) -> DripCertificate:
    """
    Rebuild a certificate. With the frame width d, an exact certificate must
    have examined all C(d, k) supports.
    """
    try:
        cert = DripCertificate(
            k=int(data["k"]),
            delta=float(data["delta"]),
            method=data["method"],
            supports_examined=int(data["supports_examined"]),
            samples=int(data["samples"]),
            rank_tol=float(data["rank_tol"]),
        )
    except KeyError as e:
        raise InvalidInputError(f"certificate is missing field {e}") from e
    if d is not None and cert.is_exact and cert.supports_examined != math.comb(d, cert.k):
        raise InvalidInputError(
            f"exact certificate examined {cert.supports_examined} supports, "
            f"C({d}, {cert.k}) = {math.comb(d, cert.k)}"
        )
    return cert


def check_enumeration_budget(d: int, k: int, budget: int) -> int:
    """Number of k-subsets of d columns; refuses when it exceeds the budget"""
    total = math.comb(d, k)
    if total > budget:
        raise BudgetExceededError(
            f"C({d}, {k}) = {total} supports exceeds the enumeration budget {budget}",
            required=total,
            budget=budget,
        )
    return total


def _check_pair(phi: MeasurementMatrix, frame: Frame, k: int) -> None:
    if phi.p != frame.p:
        raise InvalidInputError(f"Phi has {phi.p} columns but the frame has {frame.p} rows")
    if not 1 <= k <= frame.d:
        raise InvalidInputError(f"k must be in [1, {frame.d}], got {k}")


def _chunks(items: Iterable[tuple[int, ...]], size: int) -> Iterator[list[tuple[int, ...]]]:
    it = iter(items)
    while chunk := list(itertools.islice(it, size)):
        yield chunk


def _support_deviation(
    gram: DenseMatrix,
    frame_matrix: DenseMatrix,
    supports: Iterable[tuple[int, ...]],
    rank_tol: float,
) -> float:
    """max over supports of max(lambda_max - 1, 1 - lambda_min) on col(D_S)"""
    worst = 0.0
    for support in supports:
        q, rank = orthonormal_column_basis(frame_matrix[:, list(support)], rank_tol)
        if rank == 0:
            continue
        lo, hi = symmetric_eig_extremes(q.T @ gram @ q)
        dev = max(hi - 1.0, 1.0 - lo)
        if dev > worst:
            worst = dev
            logger.debug("support %s raises delta to %.12g", support, dev)
    return worst


def delta_exact(
    phi: MeasurementMatrix,
    frame: Frame,
    k: int,
    rank_tol: float = DEFAULT_RANK_TOL,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    workers: int = 1,
) -> DripCertificate:
    """
    Exact delta_k by enumerating every support of size k in lexicographic order.

    Args:
        phi: Sensing matrix
        frame: Tight frame
        k: Sparsity level
        rank_tol: Relative rank cut-off for the basis of col(D_S)
        budget: Largest C(d, k) accepted
        workers: Threads sharing the support stream (result does not depend on it)
    """
    _check_pair(phi, frame, k)
    if rank_tol <= 0:
        raise InvalidInputError(f"rank_tol must be positive, got {rank_tol}")
    total = check_enumeration_budget(frame.d, k, budget)

    gram = phi.Phi.T @ phi.Phi
    supports = itertools.combinations(range(frame.d), k)
    if workers <= 1:
        delta = _support_deviation(gram, frame.D, supports, rank_tol)
    else:
        job = partial(_support_deviation, gram, frame.D, rank_tol=rank_tol)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            delta = max(pool.map(job, _chunks(supports, _SUPPORT_CHUNK)), default=0.0)

    logger.info("delta_%d exact over %d supports: %.12g", k, total, delta)
    return DripCertificate(
        k=k,
        delta=float(delta),
        method="exact",
        supports_examined=total,
        samples=0,
        rank_tol=rank_tol,
    )


def classical_rip_constant(
    phi: MeasurementMatrix,
    k: int,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> float:
    """
    Classical RIP constant of Phi from column slices Phi_S (no basis step).

    Equal to delta_k for the identity frame; kept as an independent path.
    """
    p = phi.p
    if not 1 <= k <= p:
        raise InvalidInputError(f"k must be in [1, {p}], got {k}")
    check_enumeration_budget(p, k, budget)

    worst = 0.0
    for support in itertools.combinations(range(p), k):
        cols = phi.Phi[:, list(support)]
        w = np.linalg.eigvalsh(cols.T @ cols)
        worst = max(worst, float(w[-1]) - 1.0, 1.0 - float(w[0]))
    return worst


def delta_lower_mc(
    phi: MeasurementMatrix,
    frame: Frame,
    k: int,
    samples: int,
    rng: SeededRng,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> DripCertificate:
    """
    Monte-Carlo lower bound on delta_k.

    Each sample is a k-sparse v with a uniformly random support and
    standard-normal values; samples with ||D v|| <= rank_tol are skipped.
    Supports and values come from two child streams of rng, so a longer run
    repeats a shorter one sample for sample before extending it.
    """
    _check_pair(phi, frame, k)
    if samples < 1:
        raise InvalidInputError(f"samples must be >= 1, got {samples}")

    d = frame.d
    support_rng, value_rng = rng.child(0), rng.child(1)
    delta = 0.0
    kept = 0
    remaining = samples

    while remaining > 0:
        batch = min(remaining, _MC_BATCH)
        keys = support_rng.uniform((batch, d))
        idx = np.argsort(keys, axis=1, kind="stable")[:, :k]
        v = np.zeros((batch, d))
        np.put_along_axis(v, idx, value_rng.standard_normal((batch, k)), axis=1)

        dv = v @ frame.D.T
        pdv = dv @ phi.Phi.T
        den = np.einsum("ij,ij->i", dv, dv)
        num = np.einsum("ij,ij->i", pdv, pdv)
        keep = np.sqrt(den) > rank_tol
        if np.any(keep):
            delta = max(delta, float(np.max(np.abs(num[keep] / den[keep] - 1.0))))
            kept += int(np.count_nonzero(keep))
        remaining -= batch

    logger.info("delta_%d lower bound from %d samples: %.12g", k, samples, delta)
    return DripCertificate(
        k=k,
        delta=delta,
        method="lower_bound",
        supports_examined=kept,
        samples=samples,
        rank_tol=rank_tol,
    )


def theorem_hypothesis_holds(cert: DripCertificate) -> bool:
    """
    Whether the certificate establishes delta < 2/3.

    A lower bound at or above 2/3 refutes the hypothesis; a lower bound
    below it settles nothing and raises IndeterminateError.
    """
    if cert.delta >= THEOREM_DELTA_BOUND:
        return False
    if cert.is_exact:
        return True
    raise IndeterminateError(
        f"lower bound delta_{cert.k} >= {cert.delta:.6g} cannot certify delta_{cert.k} < 2/3"
    )
