"""Dual certificates and the null-space test for weighted basis pursuit."""
import logging

import numpy as np
import scipy.linalg

from src.core.exceptions import (
    DimensionMismatch,
    InvalidParameter,
    KernelTooLarge,
    SingularGram,
    SupportNotCovered,
)
from src.cs.models import WeightVector
from src.cs_analysis.conditions import (
    a0_constant,
    complement,
    empirical_incoherence,
    empirical_rip_delta,
)
from src.cs_analysis.models import CertificateReport
from src.numerics import as_dense_matrix, as_vector, svd

logger = logging.getLogger(__name__)

CERT_TOL = 1e-10
GRAM_CONDITION_LIMIT = 1e12
STRICT_MARGIN = 1e-12


def _check_inputs(A: np.ndarray, x: np.ndarray, w: WeightVector):
    A = as_dense_matrix(A, "A")
    x = as_vector(x, "x")
    if A.shape[1] != x.shape[0] or len(w) != x.shape[0]:
        raise DimensionMismatch(
            f"A is {A.shape[0]}x{A.shape[1]}, x has length {x.shape[0]}, w has length {len(w)}"
        )
    support = np.flatnonzero(x)
    if np.any(w.w[support] == 0):
        raise SupportNotCovered("the support of x must be included in the support of w")
    return A, x, support


def dual_certificate(A: np.ndarray, x: np.ndarray, w: WeightVector) -> CertificateReport:
    """
    Build the exact dual certificate Y0 = A^T z, z = A_I (A_I^T A_I)^{-1} (sgn(x)/w)_I.

    The certificate is valid when (w * Y0)_I = sgn(x_I) within 1e-10 and
    |(w * Y0)_{I^c}|_inf < 1 strictly; a bound within 1e-10 of 1 is reported
    as borderline and not valid.

    Raises:
        SupportNotCovered: if supp(x) is not inside I_w
        SingularGram: if A_I^T A_I has condition number above 1e12
    """
    A, x, I = _check_inputs(A, x, w)
    if I.size == 0:
        raise InvalidParameter("the support of x must be non-empty")

    A_I = A[:, I]
    gram = A_I.T @ A_I
    condition = float(np.linalg.cond(gram))
    if not np.isfinite(condition) or condition > GRAM_CONDITION_LIMIT:
        raise SingularGram(
            f"A_I^T A_I is numerically singular (condition {condition:.3e})", condition=condition
        )

    target = np.sign(x[I]) / w.w[I]
    coefficients = scipy.linalg.cho_solve(scipy.linalg.cho_factor(gram), target)
    z = A_I @ coefficients
    weighted = w.w * (A.T @ z)

    sign_match = bool(np.max(np.abs(weighted[I] - np.sign(x[I]))) <= CERT_TOL)
    rest = complement(I, A.shape[1])
    strict_bound = float(np.max(np.abs(weighted[rest]))) if rest.size else 0.0
    borderline = abs(strict_bound - 1.0) <= CERT_TOL
    valid = sign_match and strict_bound < 1.0 and not borderline

    return CertificateReport(
        Y0=z,
        sign_match=sign_match,
        strict_bound=strict_bound,
        valid=valid,
        delta_hat=empirical_rip_delta(A, I),
        mu_hat=empirical_incoherence(A, I),
        a0_constant=a0_constant(w, I),
        borderline=borderline,
        support_size=int(I.size),
    )


def nullspace_check_1d(A: np.ndarray, x: np.ndarray, w: WeightVector) -> bool:
    """
    Null-space condition for unique weighted recovery when dim ker(A_{I_w}) <= 1.

    For both unit kernel directions h the quantity
    |(h/w)_{I_x^c}|_1 + <sgn(x_I), (h/w)_I> must be strictly positive.

    Raises:
        KernelTooLarge: if dim ker(A_{I_w}) > 1
    """
    A, x, I_x = _check_inputs(A, x, w)
    I_w = w.support
    if I_w.size == 0:
        return True

    B = A[:, I_w]
    factors = svd(B)
    sigma = factors.singular_values
    cutoff = max(B.shape) * np.finfo(np.float64).eps * (sigma[0] if sigma.size else 0.0)
    rank = int(np.count_nonzero(sigma > cutoff))
    dimension = I_w.size - rank
    if dimension > 1:
        raise KernelTooLarge(f"ker(A_I_w) has dimension {dimension}", dimension=dimension)
    if dimension == 0:
        return True

    # the kernel direction is the right singular vector beyond the rank
    if B.shape[0] >= I_w.size:
        h = factors.right[:, -1]
    else:
        h = scipy.linalg.null_space(B)[:, 0]
    h = h / np.linalg.norm(h)

    ratio = h / w.w[I_w]
    on_support = np.isin(I_w, I_x)
    signs = np.sign(x[I_w[on_support]])
    for direction in (ratio, -ratio):
        value = np.sum(np.abs(direction[~on_support])) + signs @ direction[on_support]
        if value <= STRICT_MARGIN:
            logger.debug(f"null-space condition fails with value {value:.3e}")
            return False
    return True
