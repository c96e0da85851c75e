"""Data models for matrix completion."""
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple

import numpy as np
import scipy.sparse
import scipy.sparse.linalg
from pydantic import BaseModel, Field

from src.core.exceptions import DimensionMismatch, InvalidParameter
from src.mc.factored import FactoredMatrix
from src.numerics import DenseMatrix, as_vector, numerical_rank

RANK_TOL = 1e-8


class WsstConfig(BaseModel):
    """Parameters of the weighted spectral soft-thresholding and its NNM baseline."""

    eps_lambda: float = Field(default=1e-4, gt=0)  # lambda_target = eps_lambda * max |observed|
    q: float = Field(default=0.7, gt=0, lt=1)
    K: int = Field(default=50, ge=1)
    tol: float = Field(default=5e-4, gt=0)
    tau: float = Field(default=0.0, ge=0)
    max_inner_iters: int = Field(default=2_000, ge=1)
    rank_cap: Optional[int] = Field(default=None, ge=1)
    dense_threshold: int = Field(default=512, ge=1)
    strict: bool = False  # raise MaxItersExceeded instead of flagging


@dataclass
class MaskSet:
    """Observed cells of an n_rows x n_cols matrix, stored as parallel index arrays."""

    n_rows: int
    n_cols: int
    rows: np.ndarray
    cols: np.ndarray

    def __post_init__(self):
        if self.n_rows < 1 or self.n_cols < 1:
            raise InvalidParameter(f"mask dimensions must be positive, got ({self.n_rows}, {self.n_cols})")
        self.rows = np.asarray(self.rows, dtype=np.intp).ravel()
        self.cols = np.asarray(self.cols, dtype=np.intp).ravel()
        if self.rows.shape != self.cols.shape:
            raise DimensionMismatch(f"{self.rows.size} row indices for {self.cols.size} column indices")
        if self.rows.size:
            if self.rows.min() < 0 or self.rows.max() >= self.n_rows:
                raise InvalidParameter(f"row index out of range [0, {self.n_rows})")
            if self.cols.min() < 0 or self.cols.max() >= self.n_cols:
                raise InvalidParameter(f"column index out of range [0, {self.n_cols})")
            if np.unique(self.flat).size != self.rows.size:
                raise InvalidParameter("mask cells must be unique")

    @classmethod
    def from_cells(cls, n_rows: int, n_cols: int, cells: Iterable[Tuple[int, int]]) -> "MaskSet":
        pairs = np.asarray(list(cells), dtype=np.intp).reshape(-1, 2)
        return cls(n_rows, n_cols, pairs[:, 0], pairs[:, 1])

    @classmethod
    def from_flat(cls, n_rows: int, n_cols: int, flat: np.ndarray) -> "MaskSet":
        """Build from row-major flat indices."""
        rows, cols = np.divmod(np.asarray(flat, dtype=np.intp), n_cols)
        return cls(n_rows, n_cols, rows, cols)

    @classmethod
    def full(cls, n_rows: int, n_cols: int) -> "MaskSet":
        return cls.from_flat(n_rows, n_cols, np.arange(n_rows * n_cols))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def flat(self) -> np.ndarray:
        return self.rows * self.n_cols + self.cols

    @property
    def cells(self) -> List[Tuple[int, int]]:
        return list(zip(self.rows.tolist(), self.cols.tolist()))

    def __len__(self) -> int:
        return int(self.rows.size)

    def boolean(self) -> np.ndarray:
        """Dense boolean indicator of the observed cells."""
        indicator = np.zeros(self.shape, dtype=bool)
        indicator[self.rows, self.cols] = True
        return indicator


@dataclass
class MaskedMatrix:
    """P_Omega(A): the entries of A on the mask cells."""

    mask: MaskSet
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64).ravel()
        self.values = as_vector(values, "values") if values.size else values
        if self.values.shape[0] != len(self.mask):
            raise DimensionMismatch(f"{self.values.shape[0]} values for {len(self.mask)} cells")

    @property
    def shape(self) -> Tuple[int, int]:
        return self.mask.shape

    def dense(self) -> DenseMatrix:
        """Zero-filled dense embedding."""
        out = np.zeros(self.shape)
        out[self.mask.rows, self.mask.cols] = self.values
        return out

    def sparse(self) -> scipy.sparse.csr_matrix:
        return scipy.sparse.csr_matrix(
            (self.values, (self.mask.rows, self.mask.cols)), shape=self.shape
        )

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def op_norm(self, dense_threshold: int = 512) -> float:
        """Largest singular value of the zero-filled observation matrix."""
        if not self.values.size or not np.any(self.values):
            return 0.0
        if max(self.shape) < dense_threshold or min(self.shape) < 2:
            return float(np.linalg.norm(self.dense(), 2))
        v0 = np.full(min(self.shape), 1.0 / np.sqrt(min(self.shape)))
        sigma = scipy.sparse.linalg.svds(
            self.sparse(), k=1, v0=v0, return_singular_vectors=False
        )
        return float(sigma[0])


@dataclass
class FixedPointResult:
    """Outcome of the fixed-point iteration at a fixed lambda and weight vector."""

    factors: FactoredMatrix
    iterations: int
    converged: bool
    last_change: float = float("nan")

    @property
    def matrix(self) -> DenseMatrix:
        return self.factors.to_dense()


@dataclass
class CompletionResult:
    """A completed matrix held as factors, plus the diagnostics reported per run.

    ``lambda_used`` is the penalty level lambda_target before any rescaling by
    the leading weight.
    """

    factors: FactoredMatrix
    rank: int
    lambda_used: float
    inner_iterations_total: int
    reweight_rounds: int
    final_singular_values: np.ndarray
    converged: bool = True
    status: str = "ok"  # ok | max_iters_exceeded | degenerate_weights | zero_observations
    stage_lambdas: List[float] = field(default_factory=list)

    def __post_init__(self):
        self.final_singular_values = np.asarray(self.final_singular_values, dtype=np.float64)
        if self.rank != numerical_rank(self.final_singular_values, RANK_TOL):
            raise InvalidParameter(
                f"rank {self.rank} inconsistent with the reported singular values"
            )

    @property
    def matrix(self) -> DenseMatrix:
        return self.factors.to_dense()

    @property
    def shape(self) -> Tuple[int, int]:
        return self.factors.shape

    @classmethod
    def from_factors(
        cls,
        factors: FactoredMatrix,
        lambda_used: float,
        inner_iterations_total: int = 0,
        reweight_rounds: int = 0,
        **kwargs,
    ) -> "CompletionResult":
        sigma = factors.singular_values()
        return cls(
            factors=factors,
            rank=numerical_rank(sigma, RANK_TOL),
            lambda_used=lambda_used,
            inner_iterations_total=inner_iterations_total,
            reweight_rounds=reweight_rounds,
            final_singular_values=sigma,
            **kwargs,
        )

    @classmethod
    def from_dense(cls, matrix: DenseMatrix, lambda_used: float = 0.0) -> "CompletionResult":
        """Wrap an externally computed completion, e.g. a preliminary reconstruction."""
        return cls.from_factors(FactoredMatrix.from_dense(matrix), lambda_used)
