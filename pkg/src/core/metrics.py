"""Reconstruction metrics shared by the experiment runners.

This module provides a single source of truth for the error measures,
recovery rules and summary statistics reported in result files.
"""
from typing import Dict, Optional

import numpy as np
import pandas as pd

# floor applied before taking logs of relative errors
ERROR_FLOOR = 1e-16


def relative_error(estimate: np.ndarray, truth: np.ndarray) -> float:
    """|estimate - truth|_2 / |truth|_2, or |estimate|_2 when truth is zero.

    Works for vectors (Euclidean norm) and matrices (Frobenius norm).
    """
    truth = np.asarray(truth, dtype=np.float64)
    estimate = np.asarray(estimate, dtype=np.float64)
    norm = float(np.linalg.norm(truth))
    difference = float(np.linalg.norm(estimate - truth))
    if norm == 0.0:
        return difference
    return difference / norm


def exactly_recovered(estimate: np.ndarray, truth: np.ndarray, eta: float) -> bool:
    """Relative error below eta; a zero truth counts as recovered when the estimate is zero."""
    truth = np.asarray(truth, dtype=np.float64)
    if not np.any(truth):
        return not np.any(np.asarray(estimate))
    return relative_error(estimate, truth) < eta


def log_error(error: float) -> float:
    """Natural log of a relative error clamped below at ERROR_FLOOR."""
    return float(np.log(max(error, ERROR_FLOOR)))


def phase_transition_threshold(s: int, m: int) -> float:
    """s log(e m / s), with value 0 at s = 0."""
    if s == 0:
        return 0.0
    return float(s * np.log(np.e * m / s))


def median_by(frame: pd.DataFrame, keys, column: str) -> pd.DataFrame:
    """Median of ``column`` per group, as a flat frame."""
    return frame.groupby(keys, sort=True)[column].median().reset_index()


def max_rank_below(frame: pd.DataFrame, threshold: float) -> Dict[str, Optional[int]]:
    """
    Largest rank whose median relative error is below ``threshold``, per solver.

    Args:
        frame: records with columns solver, rank, relative_error

    Returns:
        solver name -> rank, or None when no rank qualifies
    """
    medians = median_by(frame.dropna(subset=["relative_error"]), ["solver", "rank"], "relative_error")
    out: Dict[str, Optional[int]] = {}
    for solver, group in medians.groupby("solver", sort=True):
        good = group.loc[group["relative_error"] < threshold, "rank"]
        out[str(solver)] = int(good.max()) if not good.empty else None
    return out
