"""Tests for the factored low-rank iterates."""
import numpy as np
import pytest

from src.core.exceptions import DimensionMismatch
from src.cs import WeightVector
from src.mc import FactoredMatrix, LowRankPlusSparse
from src.mc.factored import leading_svd
from src.mc.operators import spectral_threshold
from src.numerics import gaussian_low_rank, make_rng


@pytest.fixture
def pair():
    rng = make_rng(31)
    a = FactoredMatrix(rng.standard_normal((9, 3)), rng.standard_normal(3), rng.standard_normal((7, 3)))
    b = FactoredMatrix(rng.standard_normal((9, 2)), rng.standard_normal(2), rng.standard_normal((7, 2)))
    return a, b


class TestFactoredMatrix:
    """Tests for FactoredMatrix."""

    def test_zeros(self):
        z = FactoredMatrix.zeros(4, 3)
        assert z.shape == (4, 3)
        assert z.width == 0
        assert not np.any(z.to_dense())
        assert z.frobenius_norm() == 0.0
        assert z.singular_values().size == 0

    def test_from_dense_round_trip(self):
        M = gaussian_low_rank(6, 5, 2, seed=1)
        factors = FactoredMatrix.from_dense(M)
        np.testing.assert_allclose(factors.to_dense(), M, atol=1e-12)

    def test_values_at(self, pair):
        a, _ = pair
        rows, cols = np.array([0, 3, 8]), np.array([6, 0, 2])
        np.testing.assert_allclose(a.values_at(rows, cols), a.to_dense()[rows, cols])

    def test_combine_inner_and_distance(self, pair):
        a, b = pair
        da, db = a.to_dense(), b.to_dense()
        np.testing.assert_allclose(a.combine(b, 2.0, -0.5).to_dense(), 2.0 * da - 0.5 * db, atol=1e-12)
        assert a.inner(b) == pytest.approx(np.sum(da * db))
        assert a.distance(b) == pytest.approx(np.linalg.norm(da - db))
        assert a.frobenius_norm() == pytest.approx(np.linalg.norm(da))

    def test_canonical(self, pair):
        a, _ = pair
        expected = np.linalg.svd(a.to_dense(), compute_uv=False)[:3]
        np.testing.assert_allclose(a.singular_values(), expected, rtol=1e-10)
        np.testing.assert_allclose(a.canonical().reconstruct(), a.to_dense(), atol=1e-10)

    def test_width_mismatch(self):
        with pytest.raises(DimensionMismatch):
            FactoredMatrix(np.ones((3, 2)), np.ones(1), np.ones((3, 2)))

    def test_combine_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            FactoredMatrix.zeros(2, 2).combine(FactoredMatrix.zeros(3, 2), 1.0, 1.0)


class TestLowRankPlusSparse:
    """Tests for the low-rank-plus-sparse operator."""

    def test_linear_operator_matches_dense(self, pair):
        a, _ = pair
        M = LowRankPlusSparse(a, np.array([0, 4]), np.array([1, 6]), np.array([2.0, -3.0]))
        dense = M.to_dense()
        x = np.arange(7.0)
        y = np.arange(9.0)
        op = M.as_linear_operator()
        np.testing.assert_allclose(op.matvec(x), dense @ x)
        np.testing.assert_allclose(op.rmatvec(y), dense.T @ y)

    def test_leading_svd(self):
        rng = make_rng(32)
        low = FactoredMatrix.from_dense(rng.standard_normal((30, 25)))
        M = LowRankPlusSparse(low, np.array([1, 2]), np.array([3, 4]), np.array([1.0, 1.0]))
        factors = leading_svd(M, 4)
        expected = np.linalg.svd(M.to_dense(), compute_uv=False)[:4]
        np.testing.assert_allclose(factors.singular_values, expected, rtol=1e-8)

    def test_partial_threshold_matches_dense(self):
        rng = make_rng(33)
        low = FactoredMatrix.from_dense(gaussian_low_rank(20, 20, 3, seed=2) + 0.01 * rng.standard_normal((20, 20)))
        M = LowRankPlusSparse(low, np.array([0]), np.array([0]), np.array([0.5]))
        w = WeightVector.ones(20)
        partial = spectral_threshold(M, 0.1, w, rank_cap=5, dense_threshold=8)
        dense = spectral_threshold(M, 0.1, w, rank_cap=5, dense_threshold=512)
        np.testing.assert_allclose(partial.to_dense(), dense.to_dense(), atol=1e-8)
