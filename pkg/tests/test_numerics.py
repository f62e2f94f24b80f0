"""
Tests for numerics
"""

import math

import numpy as np
import pytest

from src.core.errors import InvalidInputError
from src.sensing.numerics import (
    SeededRng,
    as_dense,
    as_vector,
    derive_seed,
    operator_norm_sq,
    orthonormal_column_basis,
    symmetric_eig_extremes,
)


def jacobi_eigenvalues(s: np.ndarray, sweeps: int = 100) -> np.ndarray:
    """Cyclic Jacobi rotations; independent of LAPACK"""
    a = np.array(s, dtype=float)
    n = a.shape[0]
    for _ in range(sweeps):
        off = math.sqrt(sum(a[i, j] ** 2 for i in range(n) for j in range(n) if i != j))
        if off < 1e-14:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                sn = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = sn
                rot[q, p] = -sn
                a = rot.T @ a @ rot
    return np.sort(np.diag(a))


class TestSeededRng:
    """Tests for the seeded random stream"""

    def test_same_seed_same_draws(self):
        """Two instances with one seed agree bit for bit"""
        a, b = SeededRng(42), SeededRng(42)
        assert np.array_equal(a.standard_normal(10), b.standard_normal(10))
        assert np.array_equal(a.uniform((3, 2)), b.uniform((3, 2)))

    def test_different_seeds_differ(self):
        """Different seeds give different draws"""
        assert not np.array_equal(SeededRng(1).standard_normal(5), SeededRng(2).standard_normal(5))

    def test_child_is_deterministic_and_independent(self):
        """Children depend only on (seed, index)"""
        parent = SeededRng(7)
        parent.standard_normal(100)
        c0 = parent.child(0).standard_normal(4)
        assert np.array_equal(c0, SeededRng(7).child(0).standard_normal(4))
        assert not np.array_equal(c0, SeededRng(7).child(1).standard_normal(4))

    def test_uniform_range(self):
        """Uniform draws lie in [0, 1)"""
        u = SeededRng(3).uniform(1000)
        assert u.min() >= 0.0
        assert u.max() < 1.0

    def test_seed_range(self):
        """Seeds must be 64-bit unsigned"""
        SeededRng(2**64 - 1)
        with pytest.raises(InvalidInputError):
            SeededRng(-1)
        with pytest.raises(InvalidInputError):
            SeededRng(2**64)

    def test_random_support(self):
        """Supports are sorted distinct indices"""
        rng = SeededRng(5)
        for _ in range(20):
            s = rng.random_support(10, 4)
            assert len(set(s)) == 4
            assert list(s) == sorted(s)
            assert all(0 <= i < 10 for i in s)

    def test_random_support_covers_all_indices(self):
        """Every index is drawn eventually"""
        rng = SeededRng(6)
        seen = set()
        for _ in range(200):
            seen.update(rng.random_support(8, 2))
        assert seen == set(range(8))

    def test_derive_seed(self):
        """Derived seeds are deterministic and distinct"""
        assert derive_seed(1, 0) == derive_seed(1, 0)
        assert len({derive_seed(1, t) for t in range(50)}) == 50
        assert 0 <= derive_seed(1, 3) < 2**64


class TestValidation:
    """Tests for array validation helpers"""

    def test_as_dense_copies(self):
        """as_dense returns a float64 copy"""
        src = np.eye(2)
        out = as_dense(src)
        out[0, 0] = 5.0
        assert src[0, 0] == 1.0

    def test_as_dense_rank(self):
        """Only 2-D input is accepted"""
        with pytest.raises(InvalidInputError, match="2-D"):
            as_dense(np.zeros(3))

    def test_as_vector_length(self):
        """Length is checked when given"""
        with pytest.raises(InvalidInputError, match="length 2"):
            as_vector([1.0, 2.0], 3, name="y")

    def test_non_finite(self):
        """NaN and inf are rejected"""
        with pytest.raises(InvalidInputError):
            as_vector([1.0, np.nan])
        with pytest.raises(InvalidInputError):
            as_dense([[np.inf]])


class TestOrthonormalColumnBasis:
    """Tests for orthonormal_column_basis"""

    def test_identity(self):
        """Basis of I_3 spans R^3"""
        q, rank = orthonormal_column_basis(np.eye(3))
        assert rank == 3
        assert np.allclose(q.T @ q, np.eye(3))

    def test_repeated_column(self):
        """Repeated column gives rank 1 with Q = ±e1"""
        q, rank = orthonormal_column_basis(np.array([[1.0, 1.0], [0.0, 0.0]]))
        assert rank == 1
        assert np.allclose(np.abs(q[:, 0]), [1.0, 0.0])

    def test_zero_matrix(self):
        """Zero matrix has rank 0"""
        q, rank = orthonormal_column_basis(np.zeros((4, 2)))
        assert rank == 0
        assert q.shape == (4, 0)

    def test_spans_columns(self, rng):
        """Q Q^T projects every column onto itself"""
        m = rng.standard_normal((6, 3))
        q, rank = orthonormal_column_basis(m)
        assert rank == 3
        assert np.allclose(q @ q.T @ m, m)

    def test_rank_tol_positive(self):
        """rank_tol must be positive"""
        with pytest.raises(InvalidInputError):
            orthonormal_column_basis(np.eye(2), rank_tol=0.0)


class TestSymmetricEigExtremes:
    """Tests for symmetric_eig_extremes"""

    def test_diagonal(self):
        """Diagonal entries are the eigenvalues"""
        lo, hi = symmetric_eig_extremes(np.diag([2.0, 0.5]))
        assert lo == pytest.approx(0.5, abs=1e-15)
        assert hi == pytest.approx(2.0, abs=1e-15)

    def test_ones(self):
        """[[1,1],[1,1]] has eigenvalues 0 and 2"""
        lo, hi = symmetric_eig_extremes(np.ones((2, 2)))
        assert lo == pytest.approx(0.0, abs=1e-12)
        assert hi == pytest.approx(2.0, abs=1e-12)

    def test_rejects_asymmetric(self):
        """Asymmetry beyond tolerance is rejected"""
        with pytest.raises(InvalidInputError, match="not symmetric"):
            symmetric_eig_extremes(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_rejects_non_square(self):
        """Non-square input is rejected"""
        with pytest.raises(InvalidInputError):
            symmetric_eig_extremes(np.zeros((2, 3)))

    def test_matches_jacobi(self, rng):
        """Extremes agree with plain Jacobi rotations"""
        for i in range(20):
            g = rng.child(i).standard_normal((5, 5))
            s = g + g.T
            expected = jacobi_eigenvalues(s)
            lo, hi = symmetric_eig_extremes(s)
            assert lo == pytest.approx(expected[0], abs=1e-9)
            assert hi == pytest.approx(expected[-1], abs=1e-9)


class TestOperatorNormSq:
    """Tests for power iteration"""

    def test_diagonal_map(self, rng):
        """||diag(3, 1)||^2 = 9"""
        a = np.diag([3.0, 1.0])
        est = operator_norm_sq(lambda x: a @ x, lambda y: a.T @ y, 2, 100, rng)
        assert est == pytest.approx(9.0, rel=1e-10)

    def test_lower_bound_and_accuracy(self, rng):
        """Estimate never exceeds the true value and gets close to it"""
        for i in range(10):
            a = rng.child(i).standard_normal((7, 5))
            true = float(np.linalg.norm(a, 2) ** 2)
            est = operator_norm_sq(lambda x: a @ x, lambda y: a.T @ y, 5, 200, rng.child(100 + i))
            assert est <= true * (1 + 1e-12)
            assert est >= true * 0.99

    def test_monotone_in_iters(self, rng):
        """More iterations never lower the estimate"""
        a = rng.standard_normal((4, 4))
        ests = [
            operator_norm_sq(lambda x: a @ x, lambda y: a.T @ y, 4, it, SeededRng(9))
            for it in (1, 2, 5, 20)
        ]
        assert ests == sorted(ests)

    def test_zero_map(self, rng):
        """Zero map has norm 0"""
        assert operator_norm_sq(lambda x: 0 * x, lambda y: 0 * y, 3, 10, rng) == 0.0

    def test_iters_positive(self, rng):
        """iters must be >= 1"""
        with pytest.raises(InvalidInputError):
            operator_norm_sq(lambda x: x, lambda y: y, 2, 0, rng)
