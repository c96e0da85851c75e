"""Tests for the matrix-completion experiment runners."""
import numpy as np
import pandas as pd
import pytest

from src.core.exceptions import EmptyTestSet, InvalidParameter
from src.harness import (
    RatingsDataset,
    max_recovered_rank,
    rank_truncate,
    run_collab_filter,
    run_inpainting,
    run_mc_phase,
    split_ratings,
    synthetic_image,
)
from src.harness.io import load_movielens
from src.mc import WsstConfig
from src.numerics import gaussian_low_rank, make_rng


@pytest.fixture
def cfg():
    return WsstConfig(tol=1e-5, K=5)


def ratings_for(counts):
    """Dataset where user u has rated items 0..counts[u]-1."""
    users, items = [], []
    for u, count in enumerate(counts):
        users += [u] * count
        items += list(range(count))
    ratings = 1.0 + np.arange(len(users)) % 5
    return RatingsDataset(np.array(users), np.array(items), ratings)


class TestRatingsDataset:
    """Tests for the RatingsDataset model."""

    def test_rating_range(self):
        with pytest.raises(InvalidParameter):
            RatingsDataset([1], [1], [6.0])

    def test_duplicate_pairs(self):
        with pytest.raises(InvalidParameter):
            RatingsDataset([1, 1], [2, 2], [3.0, 4.0])

    def test_counts(self):
        d = ratings_for([3, 2])
        assert len(d) == 5
        assert d.n_users == 2
        assert d.n_items == 3


class TestSplitRatings:
    """Tests for split_ratings."""

    def test_even_count(self):
        train, test = split_ratings(ratings_for([20]), seed=1)
        assert len(train) == 10 and len(test) == 10

    def test_odd_count_rounds_up_to_train(self):
        train, test = split_ratings(ratings_for([21]), seed=1)
        assert len(train) == 11 and len(test) == 10

    def test_union_and_determinism(self):
        d = ratings_for([20, 7, 4])
        train, test = split_ratings(d, seed=3)
        again, _ = split_ratings(d, seed=3)
        assert np.array_equal(train.items, again.items)
        combined = pd.concat([train.to_frame(), test.to_frame()]).sort_values(["user", "item"])
        expected = d.to_frame().sort_values(["user", "item"])
        np.testing.assert_array_equal(combined.to_numpy(), expected.to_numpy())

    def test_per_user_halves(self):
        train, _ = split_ratings(ratings_for([20, 7]), seed=0)
        assert np.sum(train.users == 0) == 10
        assert np.sum(train.users == 1) == 4


class TestCollabFilter:
    """Tests for run_collab_filter."""

    def test_low_rank_ratings(self, cfg):
        rng = make_rng(40)
        scores = 3.0 + gaussian_low_rank(12, 10, 1, seed=41) * 0.5
        users, items = np.meshgrid(np.arange(12), np.arange(10), indexing="ij")
        ratings = np.clip(scores, 1.0, 5.0).ravel()
        keep = rng.random(ratings.size) < 0.9
        d = RatingsDataset(users.ravel()[keep], items.ravel()[keep], ratings[keep])
        result = run_collab_filter(d, cfg, seed=0)
        frame = result.to_frame()
        assert set(frame["solver"]) == {"nnm", "wsst"}
        assert result.n_train + result.n_test == len(d)
        assert all(np.isfinite(e) for e in result.relative_errors.values())

    def test_no_held_out_ratings(self, cfg):
        with pytest.raises(EmptyTestSet):
            run_collab_filter(ratings_for([1, 1]), cfg)

    @pytest.mark.integration
    @pytest.mark.slow
    def test_movielens_100k(self, movielens_path):
        d = load_movielens(movielens_path)
        # the settings of config/collab.yaml
        cfg = WsstConfig(rank_cap=200, eps_lambda=1e-3, tol=1e-3)
        result = run_collab_filter(d, cfg, seed=0)
        assert result.relative_errors["nnm"] == pytest.approx(0.392, abs=0.05)
        assert result.relative_errors["wsst"] == pytest.approx(0.330, abs=0.05)
        assert result.relative_errors["wsst"] < result.relative_errors["nnm"]
        assert result.ranks["wsst"] < result.ranks["nnm"]


class TestMcPhase:
    """Tests for run_mc_phase and the recovered-rank summary."""

    def test_zero_rank_is_exact(self, cfg):
        records = run_mc_phase(n=10, rank_grid=[0, 1], sample_frac=0.6, reps=1, cfg=cfg, seed=2)
        assert len(records) == 4
        zero = records[records["rank"] == 0]
        assert (zero["relative_error"] == 0.0).all()
        assert (zero["recovered_rank"] == 0).all()

    def test_deterministic(self, cfg):
        kwargs = dict(n=8, rank_grid=[1], sample_frac=0.7, reps=2, cfg=cfg, seed=5)
        pd.testing.assert_frame_equal(run_mc_phase(**kwargs), run_mc_phase(**kwargs))

    def test_invalid_rank(self, cfg):
        with pytest.raises(InvalidParameter):
            run_mc_phase(n=5, rank_grid=[6], sample_frac=0.5, reps=1, cfg=cfg)

    def test_invalid_sample_fraction(self, cfg):
        with pytest.raises(InvalidParameter):
            run_mc_phase(n=5, rank_grid=[1], sample_frac=0.0, reps=1, cfg=cfg)

    def test_max_recovered_rank(self):
        records = pd.DataFrame({
            "solver": ["nnm", "nnm", "wsst", "wsst", "nnm", "wsst"],
            "rank": [2, 4, 2, 4, 6, 6],
            "relative_error": [1e-5, 0.2, 1e-6, 1e-5, 0.5, 0.3],
        })
        assert max_recovered_rank(records, 1e-3) == {"nnm": 2, "wsst": 4}
        assert max_recovered_rank(records, 1e-9) == {"nnm": None, "wsst": None}

    @pytest.mark.slow
    def test_wsst_recovers_higher_ranks(self):
        records = run_mc_phase(
            n=100, rank_grid=range(2, 31, 2), sample_frac=0.3, reps=5, cfg=WsstConfig(), seed=0,
        )
        best = max_recovered_rank(records, 1e-3)
        assert (best["wsst"] or 0) > (best["nnm"] or 0)


class TestInpainting:
    """Tests for rank truncation, the synthetic image and run_inpainting."""

    def test_rank_truncate(self):
        image = synthetic_image(16, 4, seed=1)
        truncated = rank_truncate(image, 2)
        assert np.linalg.matrix_rank(truncated, tol=1e-10) == 2

    def test_synthetic_image_range(self):
        image = synthetic_image(32, 5, seed=2)
        assert image.shape == (32, 32)
        assert image.min() == 0.0 and image.max() == 1.0

    def test_full_observation(self):
        image = synthetic_image(16, 3, seed=3)
        result = run_inpainting(image, 3, sample_frac=1.0, cfg=WsstConfig(eps_lambda=1e-9, tol=1e-8, K=3))
        for name in ("nnm", "wsst"):
            assert result.relative_errors[name] < 1e-6
        assert result.difference_maps["wsst"].shape == (16, 16)
        assert np.array_equal(result.observed_image(), result.ground_truth)

    def test_image_out_of_range(self, cfg):
        with pytest.raises(InvalidParameter):
            run_inpainting(np.full((4, 4), 2.0), 1, cfg=cfg)

    @pytest.mark.slow
    def test_wsst_rank_not_above_nnm(self):
        image = synthetic_image(64, 5, seed=0)
        result = run_inpainting(image, 5, sample_frac=0.3, cfg=WsstConfig(tol=1e-4, K=10), seed=0)
        assert result.completions["wsst"].rank <= result.completions["nnm"].rank
