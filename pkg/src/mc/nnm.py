"""Nuclear-norm minimization by accelerated proximal gradient with continuation."""
from typing import List, Optional
import logging

import numpy as np

from src.cs.models import WeightVector
from src.mc.factored import FactoredMatrix
from src.mc.fixed_point import relative_change
from src.mc.models import CompletionResult, MaskedMatrix, WsstConfig
from src.mc.operators import masked_step, spectral_threshold
from src.mc.wsst import flag_max_iters, lambda_schedule, zero_completion

logger = logging.getLogger(__name__)


def _accelerated_stage(
    obs: MaskedMatrix,
    lam: float,
    start: FactoredMatrix,
    cfg: WsstConfig,
    ones: WeightVector,
    dense: bool,
):
    """FISTA on 1/2 |P_Omega(A - A0)|^2 + lam |A|_* with step 1 and gradient restarts."""
    x, x_prev = start, start
    t_prev = 1.0
    for it in range(1, cfg.max_inner_iters + 1):
        t = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t_prev ** 2))
        beta = (t_prev - 1.0) / t
        y = x if beta == 0.0 else x.combine(x_prev, 1.0 + beta, -beta)

        # prox step on y - grad = P_Omega^perp(y) + P_Omega(A0)
        x_new = spectral_threshold(
            masked_step(y, obs), lam, ones,
            rank_cap=cfg.rank_cap, dense_threshold=cfg.dense_threshold,
        )
        change = relative_change(x_new, x, dense)

        # restart the momentum when it points against the last step
        if y.combine(x_new, 1.0, -1.0).inner(x_new.combine(x, 1.0, -1.0)) > 0:
            t = 1.0
        x_prev, x, t_prev = x, x_new, t
        if change <= cfg.tol:
            return x, it, True
    return x, cfg.max_inner_iters, False


def nnm_solve(obs: MaskedMatrix, cfg: Optional[WsstConfig] = None) -> CompletionResult:
    """
    Approximately minimize 1/2 |P_Omega(A) - P_Omega(A0)|_F^2 + lambda_target |A|_*.

    lambda decreases geometrically by q from q * lambda_1 down to
    lambda_target, each stage warm-started from the previous one.

    Returns:
        CompletionResult with ``reweight_rounds`` = 0; flagged with status
        ``max_iters_exceeded`` when some stage hit ``max_inner_iters``

    Raises:
        MaxItersExceeded: if ``cfg.strict`` and some stage hit ``max_inner_iters``
    """
    cfg = cfg or WsstConfig()
    lam_1, lam_target = lambda_schedule(obs, cfg)
    if lam_target == 0.0:
        logger.info("all observed entries are zero, returning the zero completion")
        return zero_completion(obs, 0.0, "zero_observations")

    ones = WeightVector.ones(min(obs.shape))
    dense = max(obs.shape) < cfg.dense_threshold
    current = FactoredMatrix.zeros(*obs.shape)
    total, converged = 0, True
    stage_lambdas: List[float] = []

    lam = lam_1
    while True:
        lam = max(lam * cfg.q, lam_target)
        current, iterations, stage_converged = _accelerated_stage(
            obs, lam, current, cfg, ones, dense
        )
        total += iterations
        converged = converged and stage_converged
        stage_lambdas.append(lam)
        if lam <= lam_target:
            break

    logger.debug(f"NNM finished: {len(stage_lambdas)} stages, {total} iterations, rank {current.width}")
    result = CompletionResult.from_factors(
        current,
        lambda_used=lam_target,
        inner_iterations_total=total,
        reweight_rounds=0,
        converged=converged,
        status="ok" if converged else "max_iters_exceeded",
        stage_lambdas=stage_lambdas,
    )
    if not converged:
        flag_max_iters("NNM", result, cfg)
    return result
