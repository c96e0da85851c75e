"""Tests for the seeded random generators."""
import numpy as np
import pytest

from src.core.exceptions import InvalidParameter
from src.numerics import (
    gaussian_low_rank,
    gaussian_sensing_matrix,
    make_rng,
    random_sparse_vector,
    uniform_cells,
)


class TestSensingMatrix:
    """Tests for gaussian_sensing_matrix."""

    def test_deterministic(self):
        first = gaussian_sensing_matrix(100, 200, seed=7)
        second = gaussian_sensing_matrix(100, 200, seed=7)
        assert np.array_equal(first, second)

    def test_seeds_differ(self):
        assert not np.array_equal(gaussian_sensing_matrix(5, 5, 1), gaussian_sensing_matrix(5, 5, 2))

    def test_column_variance(self):
        m = 1000
        column = gaussian_sensing_matrix(m, 1, seed=3)[:, 0]
        assert 0.8 / m <= np.var(column) <= 1.2 / m

    def test_single_entry(self):
        A = gaussian_sensing_matrix(1, 1, seed=0)
        assert A.shape == (1, 1)
        assert np.isfinite(A[0, 0])

    def test_invalid_dimensions(self):
        with pytest.raises(InvalidParameter):
            gaussian_sensing_matrix(0, 3, seed=0)


class TestSparseVector:
    """Tests for random_sparse_vector."""

    def test_zero_sparsity(self):
        assert not np.any(random_sparse_vector(10, 0, seed=4))

    def test_full_sparsity(self):
        assert np.count_nonzero(random_sparse_vector(10, 10, seed=4)) == 10

    def test_exact_support_size(self):
        assert np.count_nonzero(random_sparse_vector(200, 45, seed=1)) == 45

    def test_sparsity_out_of_range(self):
        with pytest.raises(InvalidParameter):
            random_sparse_vector(5, 6, seed=0)


class TestStreams:
    """Tests for stream keys and the remaining generators."""

    def test_stream_keys_separate_draws(self):
        a = make_rng(0, 1).standard_normal(4)
        b = make_rng(0, 2).standard_normal(4)
        assert not np.array_equal(a, b)

    def test_sequence_seed_equals_stream(self):
        a = make_rng([3, 4]).standard_normal(4)
        b = make_rng(3, 4).standard_normal(4)
        assert np.array_equal(a, b)

    def test_negative_key(self):
        with pytest.raises(InvalidParameter):
            make_rng(-1)

    def test_low_rank(self):
        M = gaussian_low_rank(8, 6, 2, seed=9)
        assert M.shape == (8, 6)
        assert np.linalg.matrix_rank(M) == 2

    def test_uniform_cells(self):
        cells = uniform_cells(4, 5, 7, seed=2)
        assert cells.shape == (7,)
        assert np.unique(cells).size == 7
        assert np.all(np.diff(cells) > 0)
        assert cells.min() >= 0 and cells.max() < 20
