"""Tests for the weight condition and the empirical RIP / incoherence constants."""
import numpy as np
import pytest

from src.core.exceptions import InvalidParameter
from src.cs import WeightVector
from src.cs_analysis import (
    a0_constant,
    complement,
    empirical_incoherence,
    empirical_rip_delta,
    weight_accuracy_implies_a0,
)
from src.numerics import make_rng


class TestA0Constant:
    """Tests for a0_constant."""

    def test_hand_computed(self):
        w = WeightVector(np.array([2.0, 2.0, 0.1]))
        assert a0_constant(w, [0, 1]) == pytest.approx(0.1 * np.sqrt(0.5), rel=1e-12)

    def test_zero_off_support(self):
        w = WeightVector(np.array([1.0, 3.0, 0.0, 0.0]))
        assert a0_constant(w, [0, 1]) == 0.0

    def test_zero_weight_on_support(self):
        w = WeightVector(np.array([1.0, 0.0, 0.5]))
        assert np.isinf(a0_constant(w, [0, 1]))

    def test_full_support(self):
        assert a0_constant(WeightVector(np.ones(3)), [0, 1, 2]) == 0.0

    def test_index_out_of_range(self):
        with pytest.raises(InvalidParameter):
            a0_constant(WeightVector(np.ones(3)), [3])

    @pytest.mark.parametrize("c", [1e-3, 0.5, 7.0, 1e4])
    def test_scale_covariance(self, c):
        rng = make_rng(5)
        for _ in range(20):
            w = rng.uniform(0.01, 3.0, size=12)
            I = rng.choice(12, size=4, replace=False)
            expected = a0_constant(WeightVector(w), I)
            assert a0_constant(WeightVector(c * w), I) == pytest.approx(expected, rel=1e-12)

    def test_complement(self):
        assert complement([1, 3], 5).tolist() == [0, 2, 4]


class TestWeightAccuracy:
    """Tests for weight_accuracy_implies_a0."""

    def test_exact_weights(self):
        x = np.array([1.0, -0.5, 0.0])
        assert weight_accuracy_implies_a0(x, WeightVector(np.abs(x)), C=0.1)

    def test_inaccurate_weights(self):
        x = np.array([1.0, 0.0])
        assert not weight_accuracy_implies_a0(x, WeightVector(np.array([1.0, 0.6])), C=1.0)

    def test_accuracy_bounds_the_constant(self):
        rng = make_rng(6)
        implied = 0
        for _ in range(500):
            x = np.zeros(20)
            x[rng.choice(20, size=5, replace=False)] = rng.standard_normal(5)
            noise = 10.0 ** rng.uniform(-6, 0) * rng.standard_normal(20)
            w = WeightVector(np.abs(np.abs(x) + noise))
            C = float(10.0 ** rng.uniform(-1, 1))
            if weight_accuracy_implies_a0(x, w, C):
                implied += 1
                assert a0_constant(w, np.flatnonzero(x)) <= C * (1 + 1e-12)
        assert implied >= 50

    def test_non_positive_constant(self):
        with pytest.raises(InvalidParameter):
            weight_accuracy_implies_a0(np.ones(2), WeightVector(np.ones(2)), C=0.0)


class TestEmpiricalConstants:
    """Tests for empirical_rip_delta and empirical_incoherence."""

    def test_rip_orthonormal_columns(self):
        Q, _ = np.linalg.qr(make_rng(3).standard_normal((6, 6)))
        assert empirical_rip_delta(Q, [0, 2, 4]) == pytest.approx(0.0, abs=1e-12)

    def test_rip_diagonal_columns(self):
        A = np.array([[1.0, 0.0], [0.0, 2.0]])
        assert empirical_rip_delta(A, [0, 1]) == pytest.approx(3.0)

    def test_rip_single_column(self):
        A = np.array([[3.0], [0.0]])
        assert empirical_rip_delta(A, [0]) == pytest.approx(8.0)

    def test_incoherence_orthogonal(self):
        Q, _ = np.linalg.qr(make_rng(4).standard_normal((5, 5)))
        assert empirical_incoherence(Q, [1, 3]) == pytest.approx(0.0, abs=1e-12)

    def test_incoherence_repeated_column(self):
        A = np.array([[1.0, 1.0], [0.0, 0.0]])
        assert empirical_incoherence(A, [0]) == pytest.approx(1.0)

    def test_incoherence_empty_complement(self):
        assert empirical_incoherence(np.eye(2), [0, 1]) == 0.0
