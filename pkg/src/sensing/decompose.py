"""
Decompose — l1-norm invariant convex k-sparse decomposition

Given v with ||v||_1 <= C and ||v||_inf <= C/k, write v as a convex
combination of k-sparse atoms w_t with ||w_t||_1 = ||v||_1 and
||w_t||_inf <= C/k.

Both strategies only ever split a vector u into two points a, b of the
segment u + t e where e moves magnitude between coordinates without
changing signs, so every endpoint keeps ||.||_1 and the C/k cap exactly.
Each split pins at least one more coordinate at 0 or at C/k; a vector whose
nonzeros are all pinned has at most k of them.

  pairwise  e = sign(u_i) e_i - sign(u_j) e_j for the two smallest free
            coordinates; both endpoints recurse (tree, exponential worst case).
  peel      e points at a k-sparse vertex of u's own feasible set, so that
            endpoint is already an atom and only the residual recurses
            (at most nnz(v) atoms).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from ..core.constants import (
    DECOMPOSE_STRATEGIES,
    DEFAULT_ATOM_BUDGET,
    DEFAULT_MAX_DECOMPOSE_DIM,
    DEFAULT_ZERO_TOL,
)
from ..core.errors import BudgetExceededError, DripError, InvalidInputError
from ..types import CheckResult, Vector
from .numerics import as_vector


logger = logging.getLogger(__name__)

# Slack on the l1 / linf preconditions
_PRECONDITION_TOL = 1e-12
# Atoms closer than this per coordinate are merged
_MERGE_DECIMALS = 12


@dataclass(frozen=True, eq=False)
class SparseDecomposition:
    """v = sum_t weights[t] * atoms[t]"""
    atoms: tuple[Vector, ...]
    weights: tuple[float, ...]
    k: int
    cap: float

    @property
    def size(self) -> int:
        """Number of atoms M"""
        return len(self.atoms)

    @property
    def linf_cap(self) -> float:
        """C / k"""
        return self.cap / self.k

    def reconstruct(self) -> Vector:
        if not self.atoms:
            return np.zeros(0)
        return np.sum([x * w for x, w in zip(self.weights, self.atoms)], axis=0)


@dataclass(frozen=True)
class DecompositionReport:
    """Independent re-check of every decomposition clause"""
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed_checks(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def get(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)


# ══════════════════════════════════════════════════════════════
# Helpers
# ══════════════════════════════════════════════════════════════

def _nonzero(u: Vector, zero_tol: float) -> npt.NDArray[np.bool_]:
    return np.abs(u) > zero_tol


def _working_tol(zero_tol: float, cap: float) -> float:
    """Snap threshold for working vectors; round-off grows with the cap"""
    return zero_tol * max(1.0, cap)


def _snap(u: Vector, cap: float, tiny: float) -> Vector:
    """Put coordinates within tiny of 0 or of the cap exactly there"""
    out = u.copy()
    mag = np.abs(out)
    out[mag <= tiny] = 0.0
    near_cap = (mag >= cap - tiny) & (mag > tiny)
    out[near_cap] = np.sign(out[near_cap]) * cap
    return out


def _merge_key(u: Vector) -> tuple[float, ...]:
    # + 0.0 folds -0.0 into 0.0
    return tuple(float(x) + 0.0 for x in np.round(u, _MERGE_DECIMALS))


def _accumulate(bucket: dict[tuple[float, ...], list[Any]], u: Vector, weight: float) -> None:
    key = _merge_key(u)
    if key in bucket:
        bucket[key][1] += weight
    else:
        bucket[key] = [u, weight]


def _canonical(
    pairs: list[tuple[Vector, float]],
    zero_tol: float,
) -> tuple[tuple[Vector, ...], tuple[float, ...]]:
    """Merge identical atoms, drop zero weights, sort by (support, values)"""
    bucket: dict[tuple[float, ...], list[Any]] = {}
    for atom, weight in pairs:
        if weight > 0.0:
            _accumulate(bucket, atom, weight)

    def sort_key(item: list[Any]) -> tuple[tuple[int, ...], tuple[float, ...]]:
        atom = item[0]
        support = tuple(int(i) for i in np.flatnonzero(_nonzero(atom, zero_tol)))
        return support, tuple(float(atom[i]) for i in support)

    ordered = sorted(bucket.values(), key=sort_key)
    return tuple(a for a, _ in ordered), tuple(float(w) for _, w in ordered)


# ══════════════════════════════════════════════════════════════
# Strategies
# ══════════════════════════════════════════════════════════════

def _free_mask(u: Vector, cap: float, tiny: float) -> npt.NDArray[np.bool_]:
    mag = np.abs(u)
    return (mag > tiny) & (mag < cap - tiny)


def _split_pair(u: Vector, i: int, j: int, cap: float) -> tuple[Vector, float, Vector, float]:
    """Endpoints of the segment moving magnitude between coordinates i and j"""
    si, sj = np.sign(u[i]), np.sign(u[j])
    ui, uj = abs(u[i]), abs(u[j])

    # t > 0: |u_i| grows, |u_j| shrinks
    t_plus = min(cap - ui, uj)
    a = u.copy()
    a[i] = si * cap if t_plus == cap - ui else si * (ui + t_plus)
    a[j] = 0.0 if t_plus == uj else sj * (uj - t_plus)

    # t < 0: |u_i| shrinks, |u_j| grows
    t_minus = min(ui, cap - uj)
    b = u.copy()
    b[i] = 0.0 if t_minus == ui else si * (ui - t_minus)
    b[j] = sj * cap if t_minus == cap - uj else sj * (uj + t_minus)

    total = t_plus + t_minus
    return a, t_minus / total, b, t_plus / total


def _pairwise(
    v: Vector,
    k: int,
    cap: float,
    zero_tol: float,
    atom_budget: int,
) -> list[tuple[Vector, float]]:
    tiny = _working_tol(zero_tol, cap)
    frontier: dict[tuple[float, ...], list[Any]] = {}
    _accumulate(frontier, _snap(v, cap, tiny), 1.0)
    leaves: dict[tuple[float, ...], list[Any]] = {}
    depth = 0

    while frontier:
        nxt: dict[tuple[float, ...], list[Any]] = {}
        for u, weight in frontier.values():
            if np.count_nonzero(_nonzero(u, tiny)) <= k:
                _accumulate(leaves, u, weight)
                continue

            free = np.flatnonzero(_free_mask(u, cap, tiny))
            if free.size < 2:
                raise DripError(
                    f"pairwise split found {free.size} free coordinates in a vector "
                    f"with more than {k} nonzeros; l1 precondition is violated"
                )
            order = free[np.argsort(np.abs(u[free]), kind="stable")]
            a, wa, b, wb = _split_pair(u, int(order[0]), int(order[1]), cap)
            _accumulate(nxt, _snap(a, cap, tiny), weight * wa)
            _accumulate(nxt, _snap(b, cap, tiny), weight * wb)

        depth += 1
        if len(nxt) + len(leaves) > atom_budget:
            raise BudgetExceededError(
                f"pairwise decomposition needs more than {atom_budget} atoms at depth {depth}",
                required=len(nxt) + len(leaves),
                budget=atom_budget,
            )
        frontier = nxt

    logger.debug("pairwise decomposition: depth %d, %d leaves", depth, len(leaves))
    return [(u, w) for u, w in leaves.values()]


def _vertex(u: Vector, k: int, cap: float, tiny: float) -> Vector:
    """
    k-sparse vertex sharing u's signs, capped coordinates and l1 norm.

    Capped coordinates stay; the free mass is poured into the largest free
    coordinates, C/k at a time, using only the k - (#capped) slots left.
    """
    mag = np.abs(u)
    free = _free_mask(u, cap, tiny)
    w = np.where(free, 0.0, u)
    mass = float(mag[free].sum())
    slots = k - int(np.count_nonzero(_nonzero(w, tiny)))

    for i in np.argsort(-mag, kind="stable"):
        if mass <= tiny or slots <= 0:
            break
        if not free[i]:
            continue
        slots -= 1
        take = min(cap, mass)
        w[i] = np.sign(u[i]) * take
        mass -= take
    return _snap(w, cap, tiny)


def _peel(
    v: Vector,
    k: int,
    cap: float,
    zero_tol: float,
    atom_budget: int,
) -> list[tuple[Vector, float]]:
    tiny = _working_tol(zero_tol, cap)
    pairs: list[tuple[Vector, float]] = []
    remaining = 1.0
    u = _snap(v, cap, tiny)

    for _ in range(v.size + 1):
        if np.count_nonzero(_nonzero(u, tiny)) <= k:
            pairs.append((u, remaining))
            return pairs
        if len(pairs) >= atom_budget:
            raise BudgetExceededError(
                f"peel decomposition needs more than {atom_budget} atoms",
                required=len(pairs) + 1,
                budget=atom_budget,
            )

        free = _free_mask(u, cap, tiny)
        w = _vertex(u, k, cap, tiny)
        if np.count_nonzero(_nonzero(np.where(free, 0.0, u), tiny)) >= k:
            # k coordinates already at the cap: the free remainder is round-off
            pairs.append((w, remaining))
            return pairs
        mu, mw = np.abs(u), np.abs(w)

        # largest step keeping every free residual coordinate in [0, cap]
        bounds = np.full(u.size, np.inf)
        to_zero = free & (mw > mu)
        to_cap = free & (mw < mu)
        bounds[to_zero] = mu[to_zero] / mw[to_zero]
        bounds[to_cap] = (cap - mu[to_cap]) / (cap - mw[to_cap])
        stop = int(np.argmin(bounds))
        lam = float(bounds[stop])

        if not lam < 1.0:
            pairs.append((w, remaining))
            return pairs

        pairs.append((w, remaining * lam))
        remaining *= 1.0 - lam
        r = (u - lam * w) / (1.0 - lam)

        # the limiting coordinate lands exactly on its bound; the rest snap within tiny
        hit = np.isclose(bounds, lam, rtol=1e-12, atol=0.0)
        hit[stop] = True
        r[hit & to_zero] = 0.0
        r[hit & to_cap] = np.sign(u[hit & to_cap]) * cap
        r[~free] = u[~free]
        u = _snap(r, cap, tiny)

    raise DripError(f"peel decomposition did not terminate within {v.size + 1} splits")


# ══════════════════════════════════════════════════════════════
# Public API
# ══════════════════════════════════════════════════════════════

def convex_k_sparse_decompose(
    v: npt.ArrayLike,
    k: int,
    C: float,
    strategy: str = "peel",
    zero_tol: float = DEFAULT_ZERO_TOL,
    atom_budget: int = DEFAULT_ATOM_BUDGET,
    max_dim: int = DEFAULT_MAX_DECOMPOSE_DIM,
) -> SparseDecomposition:
    """
    Convex k-sparse decomposition of v with the l1 norm kept and a C/k cap.

    Args:
        v: Vector to decompose
        k: Sparsity of every atom
        C: Bound with ||v||_1 <= C and ||v||_inf <= C/k
        strategy: "peel" (linear atom count) or "pairwise" (binary tree)
        zero_tol: Magnitudes at or below this count as zero
        atom_budget: Largest number of atoms (or tree nodes per level) allowed

    Returns:
        SparseDecomposition with atoms in canonical (support, values) order
    """
    vec = as_vector(v, name="v")
    n = vec.size
    if n < 1:
        raise InvalidInputError("v must be non-empty")
    if n > max_dim:
        raise InvalidInputError(f"v has length {n}, the decomposition is limited to {max_dim}")
    if not 1 <= k <= n:
        raise InvalidInputError(f"k must be in [1, {n}], got {k}")
    if not np.isfinite(C) or C < 0:
        raise InvalidInputError(f"C must be finite and >= 0, got {C}")
    if strategy not in DECOMPOSE_STRATEGIES:
        raise InvalidInputError(f"unknown strategy {strategy!r}, expected one of {DECOMPOSE_STRATEGIES}")

    l1 = float(np.abs(vec).sum())
    linf = float(np.abs(vec).max())
    if l1 > C + _PRECONDITION_TOL:
        raise InvalidInputError(f"l1 norm ||v||_1 = {l1:.17g} exceeds C = {C:.17g}")
    if linf > C / k + _PRECONDITION_TOL:
        raise InvalidInputError(f"linf norm ||v||_inf = {linf:.17g} exceeds C/k = {C / k:.17g}")

    if np.count_nonzero(_nonzero(vec, zero_tol)) <= k:
        return SparseDecomposition(atoms=(vec.copy(),), weights=(1.0,), k=k, cap=float(C))

    # inputs inside the slack would otherwise leave mass that no k-sparse vertex can hold
    cap = max(float(C), l1, k * linf) / k
    if strategy == "pairwise":
        pairs = _pairwise(vec, k, cap, zero_tol, atom_budget)
    else:
        pairs = _peel(vec, k, cap, zero_tol, atom_budget)

    atoms, weights = _canonical(pairs, zero_tol)
    logger.debug("decomposed n=%d, k=%d into %d atoms (%s)", n, k, len(atoms), strategy)
    return SparseDecomposition(atoms=atoms, weights=weights, k=k, cap=float(C))


def validate_decomposition(
    v: npt.ArrayLike,
    dec: SparseDecomposition,
    tol: float = 1e-10,
    zero_tol: float = DEFAULT_ZERO_TOL,
) -> DecompositionReport:
    """
    Re-check reconstruction, k-sparsity, l1 equality, linf cap and convex weights.

    Failures are report entries, never exceptions.
    """
    vec = np.asarray(v, dtype=np.float64).reshape(-1)
    atoms = [np.asarray(a, dtype=np.float64).reshape(-1) for a in dec.atoms]
    weights = np.asarray(dec.weights, dtype=np.float64)
    shapes_ok = len(atoms) == weights.size and all(a.shape == vec.shape for a in atoms)

    if shapes_ok and atoms:
        recon = np.sum([x * a for x, a in zip(weights, atoms)], axis=0)
        recon_res = float(np.max(np.abs(recon - vec))) if vec.size else 0.0
    elif shapes_ok:
        recon_res = float(np.max(np.abs(vec))) if vec.size else 0.0
    else:
        recon_res = float("inf")

    l1 = float(np.abs(vec).sum())
    nnz_excess = max((int(np.count_nonzero(_nonzero(a, zero_tol))) - dec.k for a in atoms), default=0)
    l1_res = max((abs(float(np.abs(a).sum()) - l1) for a in atoms), default=0.0)
    cap_res = max((float(np.abs(a).max()) - dec.linf_cap for a in atoms if a.size), default=0.0)
    convex_res = abs(float(weights.sum()) - 1.0)
    if weights.size:
        convex_res = max(convex_res, float(-weights.min()))

    return DecompositionReport(checks=(
        CheckResult.within("reconstruction", recon_res, tol),
        CheckResult.within("k_sparsity", float(max(nnz_excess, 0)), 0.0),
        CheckResult.within("l1_equality", l1_res, tol),
        CheckResult.within("linf_cap", max(cap_res, 0.0), tol),
        CheckResult.within("convex_weights", convex_res, tol),
    ))


def decomposition_to_dict(dec: SparseDecomposition, zero_tol: float = DEFAULT_ZERO_TOL) -> dict[str, Any]:
    """Weights plus atoms as lists of [index, value] pairs"""
    atoms = []
    for atom in dec.atoms:
        support = np.flatnonzero(_nonzero(atom, zero_tol))
        atoms.append([[int(i), float(atom[i])] for i in support])
    return {
        "k": dec.k,
        "cap": dec.cap,
        "size": dec.size,
        "weights": list(dec.weights),
        "atoms": atoms,
    }
