"""Low-rank iterates and the low-rank-plus-sparse matrices the spectral step sees.

An iterate of the completion solvers is the output of a spectral
soft-thresholding, so it is kept as ``left @ diag(coef) @ right.T``. The
matrix fed to the next thresholding differs from it only on the observed
cells, so it is a low-rank matrix plus a sparse correction supported on the
mask. Neither is formed densely above ``dense_threshold``.
"""
from dataclasses import dataclass
from typing import Tuple
import logging

import numpy as np
import scipy.linalg
import scipy.sparse
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, LinearOperator, svds

from src.core.exceptions import DimensionMismatch
from src.numerics import DenseMatrix, SvdFactorization, as_dense_matrix, svd

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FactoredMatrix:
    """``left @ diag(coef) @ right.T``; the columns need not be orthonormal."""

    left: np.ndarray
    coef: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        r = self.coef.shape[0]
        if self.left.shape[1] != r or self.right.shape[1] != r:
            raise DimensionMismatch(
                f"factor widths {self.left.shape[1]}, {r}, {self.right.shape[1]} differ"
            )

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "FactoredMatrix":
        return cls(np.zeros((n_rows, 0)), np.zeros(0), np.zeros((n_cols, 0)))

    @classmethod
    def from_svd(cls, factors: SvdFactorization) -> "FactoredMatrix":
        return cls(factors.left, factors.singular_values, factors.right)

    @classmethod
    def from_dense(cls, matrix: DenseMatrix) -> "FactoredMatrix":
        factors = svd(as_dense_matrix(matrix, "matrix"))
        keep = factors.singular_values > 0
        return cls(factors.left[:, keep], factors.singular_values[keep], factors.right[:, keep])

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.left.shape[0], self.right.shape[0])

    @property
    def width(self) -> int:
        return int(self.coef.shape[0])

    def to_dense(self) -> DenseMatrix:
        return (self.left * self.coef) @ self.right.T

    def values_at(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """Entries at the cells (rows[i], cols[i])."""
        if self.width == 0:
            return np.zeros(len(rows))
        return np.einsum("ij,j,ij->i", self.left[rows], self.coef, self.right[cols])

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return self.left @ (self.coef * (self.right.T @ x))

    def rmatvec(self, y: np.ndarray) -> np.ndarray:
        return self.right @ (self.coef * (self.left.T @ y))

    def combine(self, other: "FactoredMatrix", alpha: float, beta: float) -> "FactoredMatrix":
        """alpha * self + beta * other, by stacking the factors."""
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot combine {self.shape} with {other.shape}")
        return FactoredMatrix(
            np.hstack([self.left, other.left]),
            np.concatenate([alpha * self.coef, beta * other.coef]),
            np.hstack([self.right, other.right]),
        )

    def inner(self, other: "FactoredMatrix") -> float:
        """Frobenius inner product computed on the factors."""
        if self.width == 0 or other.width == 0:
            return 0.0
        lg = self.left.T @ other.left
        rg = self.right.T @ other.right
        return float(self.coef @ (lg * rg) @ other.coef)

    def frobenius_norm(self) -> float:
        return float(np.sqrt(max(self.inner(self), 0.0)))

    def distance(self, other: "FactoredMatrix") -> float:
        """|self - other|_F without forming either matrix."""
        squared = self.inner(self) + other.inner(other) - 2.0 * self.inner(other)
        return float(np.sqrt(max(squared, 0.0)))

    def singular_values(self) -> np.ndarray:
        return self.canonical().singular_values

    def canonical(self) -> SvdFactorization:
        """Thin SVD of the represented matrix, from QR of both factors."""
        if self.width == 0:
            n1, n2 = self.shape
            return SvdFactorization(np.zeros((n1, 0)), np.zeros(0), np.zeros((n2, 0)))
        q_left, r_left = scipy.linalg.qr(self.left, mode="economic")
        q_right, r_right = scipy.linalg.qr(self.right, mode="economic")
        core = svd((r_left * self.coef) @ r_right.T)
        return SvdFactorization(
            left=q_left @ core.left,
            singular_values=core.singular_values,
            right=q_right @ core.right,
        )


@dataclass(frozen=True)
class LowRankPlusSparse:
    """``low + S`` where S holds ``values`` on the cells (rows, cols) and zero elsewhere."""

    low: FactoredMatrix
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray

    @property
    def shape(self) -> Tuple[int, int]:
        return self.low.shape

    def sparse(self) -> scipy.sparse.csr_matrix:
        return scipy.sparse.csr_matrix((self.values, (self.rows, self.cols)), shape=self.shape)

    def to_dense(self) -> DenseMatrix:
        out = self.low.to_dense()
        out[self.rows, self.cols] += self.values
        return out

    def as_linear_operator(self) -> LinearOperator:
        correction = self.sparse()
        correction_t = correction.T.tocsr()

        def matvec(x):
            x = np.ravel(x)
            return self.low.matvec(x) + correction @ x

        def rmatvec(y):
            y = np.ravel(y)
            return self.low.rmatvec(y) + correction_t @ y

        return LinearOperator(self.shape, matvec=matvec, rmatvec=rmatvec, dtype=np.float64)


def leading_svd(matrix: LowRankPlusSparse, k: int) -> SvdFactorization:
    """Leading ``k`` singular triplets by ARPACK, largest first.

    The start vector is fixed so repeated calls give identical results. Falls
    back to a dense SVD when ARPACK does not converge.
    """
    n = min(matrix.shape)
    v0 = np.full(n, 1.0 / np.sqrt(n))
    try:
        U, s, Vt = svds(matrix.as_linear_operator(), k=k, v0=v0, solver="arpack")
    except (ArpackNoConvergence, ArpackError) as e:
        logger.warning(f"partial SVD (k={k}) did not converge, using a dense SVD: {e}")
        return svd(matrix.to_dense()).truncate(k)
    order = np.argsort(s)[::-1]
    return SvdFactorization(
        left=np.ascontiguousarray(U[:, order]),
        singular_values=np.maximum(s[order], 0.0),
        right=np.ascontiguousarray(Vt[order].T),
    )
