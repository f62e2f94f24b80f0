"""
Tests for D-RIP certification
"""

import math

import numpy as np
import pytest

from src.core.errors import BudgetExceededError, IndeterminateError, InvalidInputError
from src.sensing.drip import (
    DripCertificate,
    certificate_from_dict,
    certificate_to_dict,
    check_enumeration_budget,
    classical_rip_constant,
    delta_exact,
    delta_lower_mc,
    theorem_hypothesis_holds,
)
from src.sensing.frames import identity_frame, mercedes_benz_frame, random_tight_frame
from src.sensing.measurement import MeasurementMatrix, gaussian_measurement, orthonormal_measurement
from src.sensing.numerics import SeededRng


def _cert(delta, method="exact"):
    return DripCertificate(k=2, delta=delta, method=method, supports_examined=1, samples=0, rank_tol=1e-10)


class TestDeltaExact:
    """Tests for exact enumeration"""

    def test_identity_phi_and_frame(self):
        """Phi = I_4, D = I_4, k = 2 -> 0 over 6 supports"""
        cert = delta_exact(MeasurementMatrix(np.eye(4)), identity_frame(4), 2)
        assert cert.delta == pytest.approx(0.0, abs=1e-15)
        assert cert.supports_examined == 6
        assert cert.is_exact

    def test_diagonal_phi(self):
        """Phi = diag(1, 1, 0.5), k = 1 -> 0.75"""
        cert = delta_exact(MeasurementMatrix(np.diag([1.0, 1.0, 0.5])), identity_frame(3), 1)
        assert cert.delta == pytest.approx(0.75, abs=1e-12)

    def test_mercedes_benz_full_support(self):
        """k = d on the Mercedes-Benz frame covers all of R^2"""
        phi = MeasurementMatrix(np.diag([1.0, 0.5]))
        cert = delta_exact(phi, mercedes_benz_frame(), 3)
        assert cert.supports_examined == 1
        assert cert.delta == pytest.approx(0.75, abs=1e-12)

    def test_orthonormal_phi_gives_zero(self, tight_4x7, rng):
        """Phi with orthonormal columns is an isometry on every subspace"""
        phi = orthonormal_measurement(6, 4, rng)
        assert delta_exact(phi, tight_4x7, 2).delta <= 1e-12

    def test_nested_in_k(self, tight_4x7, rng):
        """delta_k is nondecreasing in k"""
        phi = gaussian_measurement(5, 4, rng)
        deltas = [delta_exact(phi, tight_4x7, k).delta for k in range(1, 5)]
        assert all(a <= b + 1e-12 for a, b in zip(deltas, deltas[1:]))

    def test_workers_do_not_change_result(self, rng):
        """Threaded enumeration returns the same value"""
        frame = random_tight_frame(5, 10, rng.child(0))
        phi = gaussian_measurement(6, 5, rng.child(1))
        assert delta_exact(phi, frame, 3, workers=3).delta == delta_exact(phi, frame, 3).delta

    def test_dimension_mismatch(self, tight_4x7):
        """Phi columns must match frame rows"""
        with pytest.raises(InvalidInputError, match="columns"):
            delta_exact(MeasurementMatrix(np.eye(3)), tight_4x7, 1)

    def test_k_range(self, tight_4x7):
        """k must be in [1, d]"""
        with pytest.raises(InvalidInputError):
            delta_exact(MeasurementMatrix(np.eye(4)), tight_4x7, 8)

    def test_budget_refused(self, rng):
        """C(30, 6) supports exceed a budget of 1000"""
        frame = random_tight_frame(5, 30, rng)
        phi = gaussian_measurement(5, 5, rng)
        with pytest.raises(BudgetExceededError, match="593775") as info:
            delta_exact(phi, frame, 6, budget=1000)
        assert info.value.required == math.comb(30, 6)
        assert info.value.budget == 1000


class TestEnumerationBudget:
    """Tests for check_enumeration_budget"""

    def test_within_budget(self):
        """Returns the support count"""
        assert check_enumeration_budget(10, 2, 45) == 45

    def test_message(self):
        """Message names the count and the budget"""
        with pytest.raises(BudgetExceededError, match=r"C\(30, 6\) = 593775 supports exceeds the enumeration budget 1000"):
            check_enumeration_budget(30, 6, 1000)


class TestClassicalRip:
    """Tests for the identity-frame reduction"""

    def test_matches_delta_exact(self):
        """delta_k(Phi, I) equals the classical RIP constant on 50 instances"""
        for i in range(50):
            sub = SeededRng(500 + i)
            p = 2 + i % 9
            n = 1 + (i * 7) % 10
            k = 1 + i % min(3, p)
            phi = gaussian_measurement(n, p, sub)
            exact = delta_exact(phi, identity_frame(p), k).delta
            assert exact == pytest.approx(classical_rip_constant(phi, k), abs=1e-10)


class TestDeltaLowerMc:
    """Tests for the Monte-Carlo lower bound"""

    def test_never_exceeds_exact(self, rng):
        """Sampled values stay below the exact constant on 25 instances"""
        for i in range(25):
            sub = rng.child(i)
            p, d = 3 + i % 3, 5 + i % 4
            frame = random_tight_frame(p, d, sub.child(0))
            phi = gaussian_measurement(p + 1, p, sub.child(1))
            k = 1 + i % 2
            exact = delta_exact(phi, frame, k).delta
            lower = delta_lower_mc(phi, frame, k, 10_000, sub.child(2)).delta
            assert lower <= exact + 1e-9

    def test_reproducible_and_extends(self, tight_4x7, rng):
        """Same seed, same value; more samples never lower it"""
        phi = gaussian_measurement(5, 4, rng)
        a = delta_lower_mc(phi, tight_4x7, 2, 300, SeededRng(4))
        b = delta_lower_mc(phi, tight_4x7, 2, 300, SeededRng(4))
        c = delta_lower_mc(phi, tight_4x7, 2, 900, SeededRng(4))
        assert a.delta == b.delta
        assert c.delta >= a.delta
        assert a.method == "lower_bound"
        assert a.samples == 300

    def test_samples_positive(self, tight_4x7, rng):
        """At least one sample"""
        with pytest.raises(InvalidInputError):
            delta_lower_mc(MeasurementMatrix(np.eye(4)), tight_4x7, 1, 0, rng)

    @pytest.mark.slow
    def test_gap_small_at_desk_scale(self, rng):
        """With 10^5 samples the gap to the exact value is below 0.05"""
        for i in range(5):
            sub = rng.child(50 + i)
            frame = random_tight_frame(4, 6 + i % 3, sub.child(0))
            phi = gaussian_measurement(5, 4, sub.child(1))
            k = 1 + i % 2
            exact = delta_exact(phi, frame, k).delta
            lower = delta_lower_mc(phi, frame, k, 100_000, sub.child(2)).delta
            assert exact - lower < 0.05


class TestHypothesis:
    """Tests for theorem_hypothesis_holds"""

    def test_exact_below(self):
        """Exact certificate below 2/3 confirms"""
        assert theorem_hypothesis_holds(_cert(0.5)) is True

    def test_exact_above(self):
        """Exact certificate at 0.7 refutes"""
        assert theorem_hypothesis_holds(_cert(0.7)) is False

    def test_lower_bound_above_refutes(self):
        """Lower bound 0.7 refutes"""
        assert theorem_hypothesis_holds(_cert(0.7, "lower_bound")) is False

    def test_lower_bound_below_is_indeterminate(self):
        """Lower bound 0.5 cannot confirm"""
        with pytest.raises(IndeterminateError):
            theorem_hypothesis_holds(_cert(0.5, "lower_bound"))


class TestCertificateDict:
    """Tests for certificate serialization"""

    def test_fields(self):
        """All fields are present"""
        data = certificate_to_dict(_cert(0.25))
        assert data == {
            "k": 2, "delta": 0.25, "method": "exact",
            "supports_examined": 1, "samples": 0, "rank_tol": 1e-10,
        }
        assert certificate_from_dict(data) == _cert(0.25)

    def test_missing_field(self):
        """Missing fields are invalid input"""
        with pytest.raises(InvalidInputError, match="missing field"):
            certificate_from_dict({"k": 1})

    def test_exact_with_samples_rejected(self):
        """An exact certificate carries no samples"""
        data = certificate_to_dict(_cert(0.25))
        data["samples"] = 10
        with pytest.raises(InvalidInputError, match="samples = 0"):
            certificate_from_dict(data)

    def test_exact_without_supports_rejected(self):
        """An exact certificate examined at least one support"""
        with pytest.raises(InvalidInputError, match="at least one support"):
            DripCertificate(k=2, delta=0.0, method="exact", supports_examined=0, samples=0, rank_tol=1e-10)

    def test_exact_support_count_against_width(self):
        """With d given, supports_examined must equal C(d, k)"""
        data = certificate_to_dict(_cert(0.25))
        data["supports_examined"] = 14
        with pytest.raises(InvalidInputError, match=r"C\(6, 2\) = 15"):
            certificate_from_dict(data, d=6)
        data["supports_examined"] = 15
        assert certificate_from_dict(data, d=6).supports_examined == 15

    def test_lower_bound_ignores_width(self):
        """Sampled certificates are not held to the enumeration count"""
        data = certificate_to_dict(_cert(0.25, "lower_bound"))
        assert certificate_from_dict(data, d=6).method == "lower_bound"

    def test_negative_delta(self):
        """delta >= 0"""
        with pytest.raises(InvalidInputError):
            _cert(-0.1)
