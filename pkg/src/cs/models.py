"""Data models for compressed-sensing decoders."""
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field

from src.core.exceptions import DimensionMismatch, InvalidParameter
from src.numerics import as_dense_matrix, as_vector


class SolverConfig(BaseModel):
    """Tolerances and limits for the equality-constrained L1 solver."""

    feas_tol: float = Field(default=1e-10, gt=0)
    obj_tol: float = Field(default=1e-9, gt=0)
    stab_tol: float = Field(default=1e-8, gt=0)
    support_tol: float = Field(default=1e-8, ge=0)  # |t_i| > support_tol * |t|_inf counts as non-zero
    max_iters: int = Field(default=50_000, ge=1)
    rho_scale: float = Field(default=1.0, gt=0)
    check_every: int = Field(default=10, ge=1)
    strict: bool = False  # raise NotConverged instead of flagging


@dataclass
class SensingProblem:
    """Measurements ``y = A x`` of an unknown vector."""

    A: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        self.A = as_dense_matrix(self.A, "A")
        self.y = as_vector(self.y, "y")
        if self.A.shape[0] != self.y.shape[0]:
            raise DimensionMismatch(
                f"A has {self.A.shape[0]} rows but y has length {self.y.shape[0]}"
            )

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def N(self) -> int:
        return self.A.shape[1]

    @classmethod
    def from_signal(cls, A: np.ndarray, x: np.ndarray) -> "SensingProblem":
        """Build the noiseless problem ``y = A x``."""
        A = as_dense_matrix(A, "A")
        x = as_vector(x, "x")
        if A.shape[1] != x.shape[0]:
            raise DimensionMismatch(f"A has {A.shape[1]} columns but x has length {x.shape[0]}")
        return cls(A=A, y=A @ x)


@dataclass
class WeightVector:
    """Non-negative weights; coordinates with zero weight are excluded (1/0 = inf)."""

    w: np.ndarray

    def __post_init__(self):
        self.w = as_vector(self.w, "w")
        if np.any(self.w < 0):
            raise InvalidParameter("weights must be non-negative")

    def __len__(self) -> int:
        return int(self.w.shape[0])

    @property
    def support(self) -> np.ndarray:
        """Indices I_w = {i : w_i > 0}."""
        return np.flatnonzero(self.w > 0)

    def inverse(self) -> np.ndarray:
        """Entrywise 1/w with 1/0 = +inf."""
        with np.errstate(divide="ignore"):
            return np.where(self.w > 0, 1.0 / np.where(self.w > 0, self.w, 1.0), np.inf)

    def objective(self, t: np.ndarray) -> float:
        """sum |t_i| / w_i with t/0 = inf for t != 0 and 0/0 = 0."""
        t = np.asarray(t, dtype=np.float64)
        on = self.w > 0
        if np.any(t[~on] != 0):
            return float("inf")
        return float(np.sum(np.abs(t[on]) / self.w[on]))

    @classmethod
    def ones(cls, n: int) -> "WeightVector":
        return cls(np.ones(n))

    @classmethod
    def from_estimate(cls, t: np.ndarray, epsilon: float = 0.0) -> "WeightVector":
        """Weights ``|t| + epsilon`` used by the reweighting decoders."""
        if epsilon < 0:
            raise InvalidParameter(f"epsilon must be non-negative, got {epsilon}")
        return cls(np.abs(np.asarray(t, dtype=np.float64)) + epsilon)


@dataclass
class BpSolution:
    """A (weighted) basis-pursuit minimizer plus solver diagnostics."""

    t: np.ndarray
    objective: float
    feasibility_residual: float
    iterations: int
    converged: bool
    duality_gap: float = float("nan")

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "feasibility_residual": self.feasibility_residual,
            "iterations": self.iterations,
            "converged": self.converged,
            "duality_gap": self.duality_gap,
        }


@dataclass
class ReweightTrace:
    """Iterates of the epsilon-reweighted decoder and optional diagnostics."""

    epsilon: float
    iterates: List[np.ndarray]
    per_iteration_error: List[float] = field(default_factory=list)
    per_iteration_C: List[float] = field(default_factory=list)
    solutions: List[BpSolution] = field(default_factory=list)

    def __post_init__(self):
        if not self.iterates:
            raise InvalidParameter("a reweighting trace needs at least one iterate")
        for name, diag in (("error", self.per_iteration_error), ("C", self.per_iteration_C)):
            if diag and len(diag) != len(self.iterates):
                raise DimensionMismatch(
                    f"{len(diag)} {name} diagnostics for {len(self.iterates)} iterates"
                )

    @property
    def final(self) -> np.ndarray:
        return self.iterates[-1]

    def __len__(self) -> int:
        return len(self.iterates)


@dataclass
class RecoveryCertificate:
    """Outcome of the exact-recovery certification by unweighted reweighting."""

    certified: bool
    stabilized_iterate: Optional[np.ndarray]
    rounds: int
    status: str  # certified | support_too_large | not_stabilized
