"""Masking, the weighted nuclear norm and weighted spectral soft-thresholding."""
from typing import Optional
import logging

import numpy as np

from src.core.exceptions import DimensionMismatch, InvalidParameter, WeightsNotMonotone
from src.cs.models import WeightVector
from src.mc.factored import FactoredMatrix, LowRankPlusSparse, leading_svd
from src.mc.models import MaskedMatrix, MaskSet
from src.numerics import DenseMatrix, as_dense_matrix, numerical_rank, svd

logger = logging.getLogger(__name__)

# singular values at or below this fraction of the largest count as zero in the norm
NORM_ZERO_TOL = 1e-12


def apply_mask(A: DenseMatrix, mask: MaskSet) -> MaskedMatrix:
    """P_Omega(A) as the values of A on the mask cells."""
    A = as_dense_matrix(A, "A")
    if A.shape != mask.shape:
        raise DimensionMismatch(f"matrix is {A.shape} but the mask is for {mask.shape}")
    return MaskedMatrix(mask=mask, values=A[mask.rows, mask.cols])


def weighted_nuclear_norm(A: DenseMatrix, w: WeightVector) -> float:
    """
    sum_j sigma_j(A) / w_j with 1/0 = inf.

    Not a norm for non-constant weights: it fails the triangle inequality.
    Returns +inf exactly when some non-zero sigma_j meets w_j = 0.
    """
    A = as_dense_matrix(A, "A")
    n = min(A.shape)
    if len(w) < n:
        raise DimensionMismatch(f"{len(w)} weights for {n} singular values")
    sigma = svd(A).singular_values
    if sigma[0] == 0.0:
        return 0.0
    active = sigma > NORM_ZERO_TOL * sigma[0]
    weights = w.w[:n][active]
    if np.any(weights == 0):
        return float("inf")
    return float(np.sum(sigma[active] / weights))


def check_weights_monotone(w: WeightVector) -> None:
    """Raise WeightsNotMonotone unless w_1 >= w_2 >= ... >= 0."""
    if w.w.size > 1 and np.any(np.diff(w.w) > 0):
        raise WeightsNotMonotone("weights must be non-increasing")


def shrink_spectrum(sigma: np.ndarray, lam: float, w: WeightVector, tau: float = 0.0) -> np.ndarray:
    """(sigma_j - lam / w_j)_+ / (1 + tau); a zero or missing weight zeroes sigma_j."""
    sigma = np.asarray(sigma, dtype=np.float64)
    k = sigma.shape[0]
    weights = np.zeros(k)
    available = min(k, len(w))
    weights[:available] = w.w[:available]
    with np.errstate(divide="ignore"):
        thresholds = np.where(weights > 0, lam / np.where(weights > 0, weights, 1.0), np.inf)
    return np.maximum(sigma - thresholds, 0.0) / (1.0 + tau)


def check_threshold_parameters(lam: float, tau: float) -> None:
    if lam < 0:
        raise InvalidParameter(f"lambda must be non-negative, got {lam}")
    if tau < 0:
        raise InvalidParameter(f"tau must be non-negative, got {tau}")


def soft_threshold_weighted(B: DenseMatrix, lam: float, w: WeightVector, tau: float = 0.0) -> DenseMatrix:
    """
    (1/(1+tau)) S_lambda^w(B): shrink each singular value by lam / w_j.

    The result is the unique minimizer of
    1/2 |A - B|_F^2 + lam |A|_{1,w} + tau/2 |A|_F^2.

    Raises:
        WeightsNotMonotone: if w is not non-increasing
    """
    check_threshold_parameters(lam, tau)
    check_weights_monotone(w)
    factors = svd(B)
    shrunk = shrink_spectrum(factors.singular_values, lam, w, tau)
    return (factors.left * shrunk) @ factors.right.T


def soft_threshold(B: DenseMatrix, lam: float) -> DenseMatrix:
    """Classical singular value soft-thresholding S_lambda."""
    B = as_dense_matrix(B, "B")
    return soft_threshold_weighted(B, lam, WeightVector.ones(min(B.shape)), 0.0)


def prox_objective(A: DenseMatrix, B: DenseMatrix, lam: float, w: WeightVector, tau: float = 0.0) -> float:
    """1/2 |A - B|_F^2 + lam |A|_{1,w} + tau/2 |A|_F^2."""
    A = as_dense_matrix(A, "A")
    B = as_dense_matrix(B, "B")
    return float(
        0.5 * np.sum((A - B) ** 2)
        + lam * weighted_nuclear_norm(A, w)
        + 0.5 * tau * np.sum(A ** 2)
    )


def weights_from_spectrum(sigma: np.ndarray, n: Optional[int] = None) -> WeightVector:
    """w_j = sigma_j on the numerical rank (1e-8) and 0 beyond, padded to length n."""
    sigma = np.asarray(sigma, dtype=np.float64)
    n = sigma.shape[0] if n is None else n
    r = min(numerical_rank(sigma, 1e-8), n)
    w = np.zeros(n)
    w[:r] = sigma[:r]
    return WeightVector(w)


def spectral_threshold(
    matrix: LowRankPlusSparse,
    lam: float,
    w: WeightVector,
    tau: float = 0.0,
    rank_cap: Optional[int] = None,
    dense_threshold: int = 512,
) -> FactoredMatrix:
    """
    Weighted soft-thresholding of a low-rank-plus-sparse matrix, as factors.

    Below ``dense_threshold`` (or without a rank cap) the matrix is formed and
    fully decomposed. Otherwise only the leading ``rank_cap`` triplets are
    computed; discarded directions are shrunk to zero.
    """
    n = min(matrix.shape)
    partial = (
        rank_cap is not None
        and max(matrix.shape) >= dense_threshold
        and rank_cap < n - 1
    )
    if partial:
        factors = leading_svd(matrix, rank_cap)
    else:
        factors = svd(matrix.to_dense())
        if rank_cap is not None:
            factors = factors.truncate(rank_cap)
    shrunk = shrink_spectrum(factors.singular_values, lam, w, tau)
    keep = shrunk > 0
    return FactoredMatrix(factors.left[:, keep], shrunk[keep], factors.right[:, keep])


def masked_step(
    current: FactoredMatrix,
    observations: MaskedMatrix,
) -> LowRankPlusSparse:
    """P_Omega^perp(current) + P_Omega(A0), kept as low rank plus a correction on Omega."""
    mask = observations.mask
    residual = observations.values - current.values_at(mask.rows, mask.cols)
    return LowRankPlusSparse(current, mask.rows, mask.cols, residual)
