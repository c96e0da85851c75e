"""Custom exceptions for the reconstruction toolkit."""
from typing import Optional

import numpy as np


class ReconstructionError(Exception):
    """Base exception for reconstruction errors."""
    pass


class InvalidParameter(ReconstructionError, ValueError):
    """Raised when a scalar parameter is outside its admissible range."""
    pass


class DimensionMismatch(ReconstructionError, ValueError):
    """Raised when operand shapes are inconsistent."""
    pass


class NonFiniteEntries(ReconstructionError, ValueError):
    """Raised when a matrix or vector holds NaN or Inf."""
    pass


class SvdConvergenceError(ReconstructionError):
    """Raised when the SVD iteration fails to converge."""
    pass


class Infeasible(ReconstructionError):
    """Raised when y is not in the range of the (restricted) sensing matrix."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class NotConverged(ReconstructionError):
    """Raised in strict mode when the L1 solver hits its iteration cap."""

    def __init__(self, message: str, solution=None):
        super().__init__(message)
        self.solution = solution


class NotStabilized(ReconstructionError):
    """Raised in strict mode when a reweighting sequence never becomes constant."""

    def __init__(self, message: str, rounds: int):
        super().__init__(message)
        self.rounds = rounds


class ReweightingError(ReconstructionError):
    """Solver failure inside a reweighting sequence, tagged with the iteration."""

    def __init__(self, message: str, iteration: int):
        super().__init__(f"reweighting iteration {iteration}: {message}")
        self.iteration = iteration


class ZeroGroundTruth(ReconstructionError, ValueError):
    """Raised when a relative error is requested against a zero vector."""
    pass


class SupportNotCovered(ReconstructionError, ValueError):
    """Raised when the signal support is not included in the weight support."""
    pass


class SingularGram(ReconstructionError):
    """Raised when A_I^T A_I is numerically singular."""

    def __init__(self, message: str, condition: float = float("inf")):
        super().__init__(message)
        self.condition = condition


class KernelTooLarge(ReconstructionError):
    """Raised when the null-space check is asked about a kernel of dim > 1."""

    def __init__(self, message: str, dimension: int):
        super().__init__(message)
        self.dimension = dimension


class WeightsNotMonotone(ReconstructionError, ValueError):
    """Raised when spectral weights are not non-increasing."""
    pass


class MaxItersExceeded(ReconstructionError):
    """Raised in strict mode when a fixed-point or proximal stage hits its iteration cap."""

    def __init__(self, message: str, iterations: Optional[int] = None, result=None):
        super().__init__(message)
        self.iterations = iterations
        self.result = result


class DegenerateWeights(ReconstructionError):
    """Raised when every singular value of an intermediate completion is zero."""
    pass


class DatasetMissing(ReconstructionError, FileNotFoundError):
    """Raised when a ratings file is absent."""
    pass


class EmptyTestSet(ReconstructionError):
    """Raised when a split leaves no held-out ratings."""
    pass


def ensure_finite(array: np.ndarray, name: str) -> None:
    """Raise NonFiniteEntries if ``array`` holds NaN or Inf."""
    if not np.all(np.isfinite(array)):
        raise NonFiniteEntries(f"{name} contains non-finite entries")
