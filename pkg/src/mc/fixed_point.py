"""The weighted fixed point A = (1/(1+tau)) S_lambda^w(P_Omega^perp(A) + P_Omega(A0))."""
from typing import Optional, Union
import logging

import numpy as np

from src.core.exceptions import DimensionMismatch
from src.cs.models import WeightVector
from src.mc.factored import FactoredMatrix
from src.mc.models import FixedPointResult, MaskedMatrix
from src.mc.operators import (
    check_threshold_parameters,
    check_weights_monotone,
    masked_step,
    spectral_threshold,
)
from src.numerics import DenseMatrix

logger = logging.getLogger(__name__)


def relative_change(new: FactoredMatrix, old: FactoredMatrix, dense: bool) -> float:
    """|new - old|_F / |old|_F, +inf when old = 0 != new and 0 when both vanish."""
    if dense:
        difference = float(np.linalg.norm(new.to_dense() - old.to_dense()))
        reference = float(np.linalg.norm(old.to_dense()))
    else:
        difference = new.distance(old)
        reference = old.frobenius_norm()
    if reference == 0.0:
        return 0.0 if difference == 0.0 else float("inf")
    return difference / reference


def _as_start(
    warm_start: Optional[Union[DenseMatrix, FactoredMatrix]], shape
) -> FactoredMatrix:
    if warm_start is None:
        return FactoredMatrix.zeros(*shape)
    if not isinstance(warm_start, FactoredMatrix):
        warm_start = FactoredMatrix.from_dense(warm_start)
    if warm_start.shape != shape:
        raise DimensionMismatch(f"warm start is {warm_start.shape}, observations are {shape}")
    return warm_start


def fixed_point_solve(
    obs: MaskedMatrix,
    lam: float,
    w: WeightVector,
    tau: float = 0.0,
    tol: float = 5e-4,
    warm_start: Optional[Union[DenseMatrix, FactoredMatrix]] = None,
    max_iters: int = 2_000,
    rank_cap: Optional[int] = None,
    dense_threshold: int = 512,
) -> FixedPointResult:
    """
    Iterate A^{k+1} = (1/(1+tau)) S_lambda^w(P_Omega^perp(A^k) + P_Omega(A0)).

    Starts from ``warm_start`` (zero matrix by default) and stops when the
    relative Frobenius change drops to ``tol``. For tau > 0 the map is a
    contraction with factor 1/(1+tau) and the fixed point is unique.

    ``iterations`` counts applications of the map, including the one whose
    change met ``tol``. The change from a zero matrix to a non-zero one is
    infinite, so from the default start even a full mask takes two: the
    first reaches S_lambda^w(A0) and the second confirms it. A start that is
    already the fixed point, such as zero for a lambda above the top
    threshold, stops after one.

    Returns:
        FixedPointResult; ``converged`` is False when ``max_iters`` was hit

    Raises:
        WeightsNotMonotone: if w is not non-increasing
    """
    check_threshold_parameters(lam, tau)
    check_weights_monotone(w)
    current = _as_start(warm_start, obs.shape)
    dense = max(obs.shape) < dense_threshold

    change = float("inf")
    for it in range(1, max_iters + 1):
        new = spectral_threshold(
            masked_step(current, obs), lam, w, tau,
            rank_cap=rank_cap, dense_threshold=dense_threshold,
        )
        change = relative_change(new, current, dense)
        current = new
        if change <= tol:
            logger.debug(f"fixed point reached after {it} iterations (lambda={lam:.4g}, rank {new.width})")
            return FixedPointResult(current, it, True, change)

    logger.warning(
        f"fixed-point iteration hit max_iters={max_iters} (lambda={lam:.4g}, last change {change:.3e})"
    )
    return FixedPointResult(current, max_iters, False, change)
