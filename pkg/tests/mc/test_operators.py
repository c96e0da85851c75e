"""Tests for masking, the weighted nuclear norm and spectral soft-thresholding."""
import numpy as np
import pytest

from src.core.exceptions import DimensionMismatch, InvalidParameter, WeightsNotMonotone
from src.cs import WeightVector
from src.mc import (
    MaskedMatrix,
    MaskSet,
    apply_mask,
    prox_objective,
    shrink_spectrum,
    soft_threshold,
    soft_threshold_weighted,
    weighted_nuclear_norm,
    weights_from_spectrum,
)
from src.numerics import make_rng


def random_weights(rng, n: int) -> WeightVector:
    return WeightVector(np.sort(rng.uniform(0.1, 1.0, size=n))[::-1])


class TestMasks:
    """Tests for MaskSet, MaskedMatrix and apply_mask."""

    def test_full_mask(self):
        A = np.arange(6.0).reshape(2, 3)
        obs = apply_mask(A, MaskSet.full(2, 3))
        np.testing.assert_array_equal(obs.values, A.ravel())
        np.testing.assert_array_equal(obs.dense(), A)

    def test_empty_mask(self):
        obs = apply_mask(np.ones((2, 2)), MaskSet(2, 2, [], []))
        assert obs.values.size == 0
        assert obs.sup_norm() == 0.0
        assert obs.op_norm() == 0.0

    def test_diagonal_lookup(self):
        A = np.array([[1.0, 2.0], [3.0, 4.0]])
        obs = apply_mask(A, MaskSet.from_cells(2, 2, [(0, 0), (1, 1)]))
        np.testing.assert_array_equal(obs.values, [1.0, 4.0])

    def test_duplicate_cells_rejected(self):
        with pytest.raises(InvalidParameter):
            MaskSet.from_cells(2, 2, [(0, 0), (0, 0)])

    def test_out_of_range_rejected(self):
        with pytest.raises(InvalidParameter):
            MaskSet.from_cells(2, 2, [(2, 0)])

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            apply_mask(np.ones((3, 3)), MaskSet.full(2, 2))

    def test_value_count_mismatch(self):
        with pytest.raises(DimensionMismatch):
            MaskedMatrix(MaskSet.full(2, 2), np.ones(3))

    def test_sparse_and_boolean(self):
        mask = MaskSet.from_cells(3, 2, [(0, 1), (2, 0)])
        obs = MaskedMatrix(mask, np.array([5.0, -1.0]))
        np.testing.assert_array_equal(obs.sparse().toarray(), obs.dense())
        assert mask.boolean().sum() == 2
        assert mask.cells == [(0, 1), (2, 0)]

    def test_op_norm_sparse_path(self):
        rng = make_rng(8)
        A = rng.standard_normal((10, 10))
        obs = apply_mask(A, MaskSet.full(10, 10))
        assert obs.op_norm(dense_threshold=4) == pytest.approx(np.linalg.norm(A, 2), rel=1e-8)


class TestWeightedNuclearNorm:
    """Tests for weighted_nuclear_norm."""

    def test_unit_weights(self):
        A = make_rng(1).standard_normal((4, 3))
        expected = np.sum(np.linalg.svd(A, compute_uv=False))
        assert weighted_nuclear_norm(A, WeightVector.ones(3)) == pytest.approx(expected)

    def test_not_convex(self):
        w = WeightVector(np.array([2.0, 1.0]))
        A, B = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
        midpoint = weighted_nuclear_norm((A + B) / 2, w)
        assert midpoint == pytest.approx(0.75)
        average = 0.5 * (weighted_nuclear_norm(A, w) + weighted_nuclear_norm(B, w))
        assert average == pytest.approx(0.5)
        assert midpoint > average

    def test_zero_matrix(self):
        assert weighted_nuclear_norm(np.zeros((3, 3)), WeightVector.ones(3)) == 0.0

    def test_zero_weight_on_active_value(self):
        w = WeightVector(np.array([1.0, 0.0]))
        assert np.isinf(weighted_nuclear_norm(np.eye(2), w))
        assert weighted_nuclear_norm(np.diag([1.0, 0.0]), w) == 1.0

    def test_short_weight_vector(self):
        with pytest.raises(DimensionMismatch):
            weighted_nuclear_norm(np.eye(3), WeightVector.ones(2))


class TestSoftThreshold:
    """Tests for soft_threshold_weighted and soft_threshold."""

    def test_diagonal(self):
        out = soft_threshold_weighted(np.diag([3.0, 1.0]), 1.0, WeightVector(np.array([1.0, 0.5])))
        np.testing.assert_allclose(out, np.diag([2.0, 0.0]), atol=1e-14)

    def test_zero_input(self):
        out = soft_threshold_weighted(np.zeros((3, 2)), 0.5, WeightVector.ones(2))
        assert not np.any(out)

    def test_ridge_scaling(self):
        out = soft_threshold_weighted(np.diag([3.0, 1.0]), 1.0, WeightVector.ones(2), tau=1.0)
        np.testing.assert_allclose(out, np.diag([1.0, 0.0]), atol=1e-14)

    def test_non_monotone_weights(self):
        with pytest.raises(WeightsNotMonotone):
            soft_threshold_weighted(np.eye(2), 0.1, WeightVector(np.array([0.5, 1.0])))

    def test_negative_lambda(self):
        with pytest.raises(InvalidParameter):
            soft_threshold_weighted(np.eye(2), -0.1, WeightVector.ones(2))

    def test_output_spectrum_is_non_increasing(self):
        rng = make_rng(2)
        for _ in range(20):
            B = rng.standard_normal((6, 5))
            out = soft_threshold_weighted(B, 0.4, random_weights(rng, 5))
            sigma = np.linalg.svd(out, compute_uv=False)
            assert np.all(np.diff(sigma) <= 1e-12)

    def test_unit_weights_match_classical_svt(self):
        rng = make_rng(3)
        for _ in range(10):
            B = rng.standard_normal((5, 7))
            U, s, Vt = np.linalg.svd(B, full_matrices=False)
            expected = (U * np.maximum(s - 0.7, 0.0)) @ Vt
            np.testing.assert_allclose(soft_threshold(B, 0.7), expected, atol=1e-12)

    def test_prox_minimality(self):
        rng = make_rng(4)
        w = WeightVector(np.array([1.0, 0.8, 0.5, 0.2]))
        lam, tau = 0.3, 0.1
        B = rng.standard_normal((4, 4))
        out = soft_threshold_weighted(B, lam, w, tau)
        best = prox_objective(out, B, lam, w, tau)
        assert best < prox_objective(B, B, lam, w, tau)
        for _ in range(200):
            perturbed = out + 0.1 * rng.standard_normal((4, 4))
            assert best < prox_objective(perturbed, B, lam, w, tau)

    @pytest.mark.slow
    def test_prox_minimality_many_instances(self):
        rng = make_rng(5)
        for _ in range(50):
            n1, n2 = rng.integers(2, 7, size=2)
            B = rng.standard_normal((n1, n2))
            w = random_weights(rng, min(n1, n2))
            lam, tau = rng.uniform(0.05, 1.0), rng.uniform(0.0, 1.0)
            out = soft_threshold_weighted(B, lam, w, tau)
            best = prox_objective(out, B, lam, w, tau)
            scale = np.linalg.norm(B)
            candidates = [B, np.zeros_like(B)]
            candidates += [
                out + eps * scale * rng.standard_normal(B.shape)
                for eps in (1e-3, 1e-1, 1.0)
                for _ in range(100)
            ]
            for candidate in candidates:
                assert best <= prox_objective(candidate, B, lam, w, tau) + 1e-12

    @pytest.mark.slow
    def test_non_expansive(self):
        rng = make_rng(6)
        for _ in range(1000):
            n1, n2 = rng.integers(1, 16), rng.integers(1, 13)
            A = rng.standard_normal((n1, n2))
            B = rng.standard_normal((n1, n2))
            w = random_weights(rng, min(n1, n2))
            lam = rng.uniform(0.0, 2.0)
            gap = np.linalg.norm(soft_threshold_weighted(A, lam, w) - soft_threshold_weighted(B, lam, w))
            assert gap <= np.linalg.norm(A - B) + 1e-10


class TestSpectrumHelpers:
    """Tests for shrink_spectrum and weights_from_spectrum."""

    def test_missing_weights_zero_the_tail(self):
        shrunk = shrink_spectrum(np.array([3.0, 2.0, 1.0]), 0.5, WeightVector(np.array([1.0, 0.5])))
        np.testing.assert_allclose(shrunk, [2.5, 1.0, 0.0])

    def test_weights_from_spectrum(self):
        w = weights_from_spectrum(np.array([4.0, 2.0, 1e-12]), n=4)
        np.testing.assert_allclose(w.w, [4.0, 2.0, 0.0, 0.0])
