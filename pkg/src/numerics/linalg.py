"""Dense linear-algebra kernels.

Matrices are plain row-major ``float64`` numpy arrays; the helpers here
validate them and wrap the LAPACK routines every other package builds on.
"""
from dataclasses import dataclass
from typing import Sequence, Union
import logging

import numpy as np
import numpy.typing as npt
import scipy.linalg

from src.core.exceptions import (
    DimensionMismatch,
    InvalidParameter,
    SvdConvergenceError,
    ensure_finite,
)

logger = logging.getLogger(__name__)

DenseMatrix = npt.NDArray[np.float64]
ArrayLike = Union[npt.ArrayLike, Sequence[float]]


def as_dense_matrix(a: ArrayLike, name: str = "matrix") -> DenseMatrix:
    """Return ``a`` as a C-contiguous, finite float64 matrix.

    Raises:
        DimensionMismatch: if ``a`` is not two-dimensional with positive sizes
        NonFiniteEntries: if ``a`` holds NaN or Inf
    """
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    ensure_finite(arr, name)
    return np.ascontiguousarray(arr)


def as_vector(v: ArrayLike, name: str = "vector") -> np.ndarray:
    """Return ``v`` as a finite one-dimensional float64 array."""
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise DimensionMismatch(f"{name} must be one-dimensional, got shape {arr.shape}")
    ensure_finite(arr, name)
    return arr


@dataclass(frozen=True)
class SvdFactorization:
    """Thin SVD ``A = left @ diag(singular_values) @ right.T``."""

    left: DenseMatrix
    singular_values: np.ndarray
    right: DenseMatrix

    @property
    def shape(self) -> tuple:
        return (self.left.shape[0], self.right.shape[0])

    @property
    def size(self) -> int:
        return int(self.singular_values.shape[0])

    def reconstruct(self) -> DenseMatrix:
        """Multiply the factors back together."""
        return (self.left * self.singular_values) @ self.right.T

    def truncate(self, rank: int) -> "SvdFactorization":
        """Keep the leading ``rank`` triplets."""
        rank = max(0, min(rank, self.size))
        return SvdFactorization(
            left=self.left[:, :rank],
            singular_values=self.singular_values[:rank],
            right=self.right[:, :rank],
        )


def svd(A: ArrayLike) -> SvdFactorization:
    """Thin SVD with r = min(n1, n2) triplets, singular values non-increasing.

    LAPACK's divide-and-conquer driver is tried first; on failure the
    QR-iteration driver is used. Ties keep the order LAPACK returns.

    Raises:
        SvdConvergenceError: if both drivers fail to converge
    """
    A = as_dense_matrix(A, "A")
    for driver in ("gesdd", "gesvd"):
        try:
            U, s, Vt = scipy.linalg.svd(
                A, full_matrices=False, lapack_driver=driver, check_finite=False
            )
        except np.linalg.LinAlgError as e:
            logger.warning(f"SVD driver {driver} failed on {A.shape} matrix: {e}")
            continue
        return SvdFactorization(
            left=np.ascontiguousarray(U),
            singular_values=np.maximum(s, 0.0),
            right=np.ascontiguousarray(Vt.T),
        )
    raise SvdConvergenceError(f"SVD did not converge for a {A.shape[0]}x{A.shape[1]} matrix")


def least_squares_solve(A: ArrayLike, b: ArrayLike) -> np.ndarray:
    """Minimum-norm minimizer of ``|A z - b|_2``.

    Raises:
        DimensionMismatch: if the rows of A do not match the length of b
    """
    A = as_dense_matrix(A, "A")
    b = as_vector(b, "b")
    if A.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"A has {A.shape[0]} rows but b has length {b.shape[0]}")
    try:
        z, _, _, _ = scipy.linalg.lstsq(A, b, lapack_driver="gelsd", check_finite=False)
    except np.linalg.LinAlgError as e:
        raise SvdConvergenceError(f"least-squares SVD did not converge: {e}")
    return np.asarray(z, dtype=np.float64)


def numerical_rank(sigma: ArrayLike, rel_tol: float = 1e-8) -> int:
    """Number of singular values strictly above ``rel_tol * sigma[0]``."""
    if rel_tol < 0:
        raise InvalidParameter(f"rel_tol must be non-negative, got {rel_tol}")
    sigma = np.asarray(sigma, dtype=np.float64).ravel()
    if sigma.size == 0 or sigma[0] <= 0:
        return 0
    return int(np.count_nonzero(sigma > rel_tol * sigma[0]))
