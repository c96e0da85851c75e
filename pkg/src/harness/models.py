"""Result and dataset models for the experiment runners."""
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from src.core.exceptions import DimensionMismatch, InvalidParameter
from src.core.metrics import phase_transition_threshold
from src.mc.models import CompletionResult, MaskSet


@dataclass
class RecoveryMap:
    """Exact-recovery counts on an (s, m) grid for the plain and weighted decoders."""

    s_values: List[int]
    m_values: List[int]
    counts_plain: np.ndarray
    counts_weighted: np.ndarray
    repetitions: int
    eta: float
    threshold_curve: Optional[np.ndarray] = None
    failed: Optional[np.ndarray] = None

    def __post_init__(self):
        shape = (len(self.s_values), len(self.m_values))
        self.counts_plain = np.asarray(self.counts_plain, dtype=np.int64)
        self.counts_weighted = np.asarray(self.counts_weighted, dtype=np.int64)
        if self.threshold_curve is None:
            self.threshold_curve = np.array(
                [[phase_transition_threshold(s, m) for m in self.m_values] for s in self.s_values]
            ).reshape(shape)
        if self.failed is None:
            self.failed = np.zeros(shape, dtype=np.int64)
        for name in ("counts_plain", "counts_weighted", "threshold_curve", "failed"):
            if getattr(self, name).shape != shape:
                raise DimensionMismatch(f"{name} has shape {getattr(self, name).shape}, expected {shape}")
        for counts in (self.counts_plain, self.counts_weighted):
            if np.any(counts < 0) or np.any(counts > self.repetitions):
                raise InvalidParameter("recovery counts must lie in [0, repetitions]")

    def dominance_fraction(self) -> float:
        """Fraction of cells where the weighted count is at least the plain count."""
        return float(np.mean(self.counts_weighted >= self.counts_plain))

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for i, s in enumerate(self.s_values):
            for j, m in enumerate(self.m_values):
                rows.append({
                    "s": s,
                    "m": m,
                    "repetitions": self.repetitions,
                    "eta": self.eta,
                    "count_plain": int(self.counts_plain[i, j]),
                    "count_weighted": int(self.counts_weighted[i, j]),
                    "failed": int(self.failed[i, j]),
                    "threshold": float(self.threshold_curve[i, j]),
                })
        return pd.DataFrame(rows)


@dataclass
class RatingsDataset:
    """(user, item, rating) triples with ratings in [1, 5] and unique (user, item) pairs."""

    users: np.ndarray
    items: np.ndarray
    ratings: np.ndarray

    def __post_init__(self):
        self.users = np.asarray(self.users, dtype=np.int64).ravel()
        self.items = np.asarray(self.items, dtype=np.int64).ravel()
        self.ratings = np.asarray(self.ratings, dtype=np.float64).ravel()
        if not (self.users.size == self.items.size == self.ratings.size):
            raise DimensionMismatch("users, items and ratings must have the same length")
        if self.ratings.size and (self.ratings.min() < 1 or self.ratings.max() > 5):
            raise InvalidParameter("ratings must lie in [1, 5]")
        pairs = pd.MultiIndex.from_arrays([self.users, self.items])
        if pairs.has_duplicates:
            raise InvalidParameter("each (user, item) pair may be rated only once")

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> "RatingsDataset":
        return cls(frame["user"].to_numpy(), frame["item"].to_numpy(), frame["rating"].to_numpy())

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"user": self.users, "item": self.items, "rating": self.ratings})

    def __len__(self) -> int:
        return int(self.ratings.size)

    @property
    def n_users(self) -> int:
        return int(np.unique(self.users).size)

    @property
    def n_items(self) -> int:
        return int(np.unique(self.items).size)

    def subset(self, index: np.ndarray) -> "RatingsDataset":
        return RatingsDataset(self.users[index], self.items[index], self.ratings[index])


@dataclass
class InpaintingResult:
    """Reconstructions of a rank-truncated image from a random subset of its pixels."""

    ground_truth: np.ndarray
    mask: MaskSet
    completions: Dict[str, CompletionResult]
    difference_maps: Dict[str, np.ndarray]
    relative_errors: Dict[str, float]

    def observed_image(self, fill: float = 1.0) -> np.ndarray:
        """Ground truth on the mask, ``fill`` (white) elsewhere."""
        out = np.full(self.ground_truth.shape, fill)
        out[self.mask.rows, self.mask.cols] = self.ground_truth[self.mask.rows, self.mask.cols]
        return out

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([
            {
                "solver": name,
                "relative_error": self.relative_errors[name],
                "rank": result.rank,
                "inner_iterations": result.inner_iterations_total,
                "status": result.status,
            }
            for name, result in self.completions.items()
        ])


@dataclass
class CollabResult:
    """Held-out relative errors and ranks for the collaborative-filtering run."""

    n_users: int
    n_items: int
    n_train: int
    n_test: int
    relative_errors: Dict[str, float] = field(default_factory=dict)
    ranks: Dict[str, int] = field(default_factory=dict)
    statuses: Dict[str, str] = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([
            {
                "solver": name,
                "relative_error": self.relative_errors[name],
                "rank": self.ranks[name],
                "status": self.statuses.get(name, "ok"),
                "n_users": self.n_users,
                "n_items": self.n_items,
                "n_train": self.n_train,
                "n_test": self.n_test,
            }
            for name in self.relative_errors
        ])

