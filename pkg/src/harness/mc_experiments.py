"""Matrix-completion experiments: rank phase transition, inpainting, collaborative filtering."""
from typing import Any, Dict, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np
import pandas as pd

from src.core.exceptions import EmptyTestSet, InvalidParameter, ReconstructionError
from src.core.metrics import max_rank_below, relative_error
from src.harness.models import CollabResult, InpaintingResult, RatingsDataset
from src.harness.parallel import map_ordered
from src.mc import (
    CompletionResult,
    MaskedMatrix,
    MaskSet,
    WsstConfig,
    apply_mask,
    nnm_solve,
    wsst,
)
from src.numerics import as_dense_matrix, gaussian_low_rank, make_rng, svd, uniform_cells

logger = logging.getLogger(__name__)

STREAM_MC_PHASE = 11
STREAM_INPAINTING = 12
STREAM_IMAGE = 13
STREAM_SPLIT = 14

SOLVERS = ("nnm", "wsst")


def complete_both(obs: MaskedMatrix, cfg: WsstConfig) -> Dict[str, CompletionResult]:
    """NNM, then WSST seeded with the NNM completion, on the same observations."""
    preliminary = nnm_solve(obs, cfg)
    return {"nnm": preliminary, "wsst": wsst(obs, preliminary, cfg)}


def sample_count(n_rows: int, n_cols: int, sample_frac: float) -> int:
    if not 0 < sample_frac <= 1:
        raise InvalidParameter(f"sample_frac must lie in (0, 1], got {sample_frac}")
    return min(n_rows * n_cols, math.ceil(sample_frac * n_rows * n_cols))


def _mc_cell(task: Dict[str, Any]) -> List[Dict[str, Any]]:
    n, rank, rep, key = task["n"], task["rank"], task["rep"], task["key"]
    truth = gaussian_low_rank(n, n, rank, [*key, 0])
    mask = MaskSet.from_flat(n, n, uniform_cells(n, n, task["count"], [*key, 1]))
    obs = apply_mask(truth, mask)
    cfg = WsstConfig(**task["cfg"])
    try:
        results = complete_both(obs, cfg)
    except ReconstructionError as e:
        logger.error(f"mc cell rank={rank} rep={rep} failed: {e}")
        return [
            {"rank": rank, "rep": rep, "solver": name, "relative_error": float("nan"),
             "recovered_rank": -1, "converged": False, "status": "failed"}
            for name in SOLVERS
        ]
    return [
        {
            "rank": rank,
            "rep": rep,
            "solver": name,
            "relative_error": relative_error(result.matrix, truth),
            "recovered_rank": result.rank,
            "converged": result.converged,
            "status": result.status,
        }
        for name, result in results.items()
    ]


def run_mc_phase(
    n: int,
    rank_grid: Sequence[int],
    sample_frac: float,
    reps: int,
    cfg: Optional[WsstConfig] = None,
    seed: int = 0,
    workers: int = 1,
) -> pd.DataFrame:
    """
    Relative errors and recovered ranks of NNM and WSST over a rank grid.

    For each (rank, rep) the ground truth is U V^T with n x rank Gaussian
    factors and ceil(sample_frac n^2) cells are observed uniformly without
    replacement; both solvers see the same observations.

    Returns:
        frame with columns rank, rep, solver, relative_error, recovered_rank,
        converged, status
    """
    ranks = list(rank_grid)
    if not ranks or any(r < 0 or r > n for r in ranks):
        raise InvalidParameter(f"ranks must lie in [0, {n}]")
    if reps < 1:
        raise InvalidParameter(f"reps must be at least 1, got {reps}")
    cfg = cfg or WsstConfig()
    count = sample_count(n, n, sample_frac)

    tasks = [
        {"n": n, "rank": r, "rep": rep, "count": count,
         "key": [seed, STREAM_MC_PHASE, r, rep], "cfg": cfg.model_dump()}
        for r in ranks
        for rep in range(reps)
    ]
    logger.info(f"mc phase: n={n}, {len(ranks)} ranks, {reps} repetitions, {count} observed cells")
    rows = [row for block in map_ordered(_mc_cell, tasks, workers) for row in block]
    return pd.DataFrame(
        rows,
        columns=["rank", "rep", "solver", "relative_error", "recovered_rank", "converged", "status"],
    )


def max_recovered_rank(records: pd.DataFrame, threshold: float = 1e-3) -> Dict[str, Optional[int]]:
    """Largest rank with median relative error below ``threshold``, per solver."""
    return max_rank_below(records, threshold)


def rank_truncate(image: np.ndarray, rank: int) -> np.ndarray:
    """Best rank-``rank`` approximation in Frobenius norm."""
    image = as_dense_matrix(image, "image")
    if not 0 <= rank <= min(image.shape):
        raise InvalidParameter(f"truncation rank must lie in [0, {min(image.shape)}], got {rank}")
    return svd(image).truncate(rank).reconstruct()


def synthetic_image(n: int, rank: int, seed: int = 0) -> np.ndarray:
    """A smooth n x n grayscale test image in [0, 1] built from ``rank`` separable patterns."""
    if n < 2 or not 1 <= rank <= n:
        raise InvalidParameter(f"need n >= 2 and 1 <= rank <= n, got n={n}, rank={rank}")
    rng = make_rng(seed, STREAM_IMAGE)
    grid = np.linspace(0.0, 1.0, n)
    image = np.zeros((n, n))
    for j in range(rank):
        fx, fy = rng.uniform(0.5, 4.0, size=2)
        px, py = rng.uniform(0.0, 2.0 * np.pi, size=2)
        amplitude = 1.0 / (j + 1)
        image += amplitude * np.outer(np.cos(2 * np.pi * fx * grid + px), np.cos(2 * np.pi * fy * grid + py))
    low, high = image.min(), image.max()
    return (image - low) / (high - low) if high > low else np.zeros((n, n))


def run_inpainting(
    image: np.ndarray,
    truncate_rank: int,
    sample_frac: float = 0.3,
    cfg: Optional[WsstConfig] = None,
    seed: int = 0,
) -> InpaintingResult:
    """
    Inpaint a rank-truncated image from a uniform sample of its pixels.

    Raises:
        InvalidParameter: if the image leaves [0, 1] or the rank is out of range
    """
    image = as_dense_matrix(image, "image")
    if image.min() < 0 or image.max() > 1:
        raise InvalidParameter("image entries must lie in [0, 1]")
    cfg = cfg or WsstConfig()
    truth = rank_truncate(image, truncate_rank)
    n_rows, n_cols = truth.shape
    count = sample_count(n_rows, n_cols, sample_frac)
    mask = MaskSet.from_flat(n_rows, n_cols, uniform_cells(n_rows, n_cols, count, [seed, STREAM_INPAINTING]))

    results = complete_both(apply_mask(truth, mask), cfg)
    completed = {name: result.matrix for name, result in results.items()}
    for name, result in results.items():
        logger.info(f"inpainting {name}: rank {result.rank}, error {relative_error(completed[name], truth):.3e}")
    return InpaintingResult(
        ground_truth=truth,
        mask=mask,
        completions=results,
        difference_maps={name: np.abs(matrix - truth) for name, matrix in completed.items()},
        relative_errors={name: relative_error(matrix, truth) for name, matrix in completed.items()},
    )


def split_ratings(d: RatingsDataset, seed: int = 0) -> Tuple[RatingsDataset, RatingsDataset]:
    """Per user, a uniformly random ceil(n_u / 2) of the ratings go to train, the rest to test."""
    rng = make_rng(seed, STREAM_SPLIT)
    order = np.argsort(d.users, kind="stable")
    users, starts = np.unique(d.users[order], return_index=True)
    bounds = np.append(starts, order.size)
    train = np.zeros(len(d), dtype=bool)
    for u in range(users.size):
        block = order[bounds[u]:bounds[u + 1]]
        chosen = rng.permutation(block)[: math.ceil(block.size / 2)]
        train[chosen] = True
    return d.subset(np.flatnonzero(train)), d.subset(np.flatnonzero(~train))


def run_collab_filter(d: RatingsDataset, cfg: Optional[WsstConfig] = None, seed: int = 0) -> CollabResult:
    """
    Held-out relative error |P(A_hat) - P(A0)|_2 / |P(A0)|_2 of NNM and WSST.

    Users and items are indexed over the full dataset; the training ratings
    form the observed mask and the held-out ratings the test set.

    Raises:
        EmptyTestSet: if the split leaves no held-out rating
    """
    cfg = cfg or WsstConfig()
    train, test = split_ratings(d, seed)
    if len(test) == 0:
        raise EmptyTestSet("the split left no held-out ratings")

    user_ids, item_ids = np.unique(d.users), np.unique(d.items)

    def cells(part: RatingsDataset):
        return np.searchsorted(user_ids, part.users), np.searchsorted(item_ids, part.items)

    rows, cols = cells(train)
    obs = MaskedMatrix(MaskSet(user_ids.size, item_ids.size, rows, cols), train.ratings)
    test_rows, test_cols = cells(test)
    logger.info(
        f"collaborative filtering: {user_ids.size} users, {item_ids.size} items, "
        f"{len(train)} train / {len(test)} test ratings"
    )

    result = CollabResult(user_ids.size, item_ids.size, len(train), len(test))
    for name, completion in complete_both(obs, cfg).items():
        predicted = completion.factors.values_at(test_rows, test_cols)
        result.relative_errors[name] = relative_error(predicted, test.ratings)
        result.ranks[name] = completion.rank
        result.statuses[name] = completion.status
        logger.info(f"{name}: held-out error {result.relative_errors[name]:.3e}, rank {completion.rank}")
    return result
