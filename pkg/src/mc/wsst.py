"""Iteratively weighted spectral soft-thresholding (WSST)."""
from typing import List, Optional, Tuple
import logging

from src.core.exceptions import DegenerateWeights, MaxItersExceeded
from src.cs.models import WeightVector
from src.mc.factored import FactoredMatrix
from src.mc.fixed_point import fixed_point_solve
from src.mc.models import CompletionResult, MaskedMatrix, WsstConfig
from src.mc.operators import weights_from_spectrum

logger = logging.getLogger(__name__)


def lambda_schedule(obs: MaskedMatrix, cfg: WsstConfig) -> Tuple[float, float]:
    """(lambda_1, lambda_target): the observed operator norm and eps_lambda * max |P_Omega(A0)|."""
    return obs.op_norm(cfg.dense_threshold), cfg.eps_lambda * obs.sup_norm()


def zero_completion(obs: MaskedMatrix, lam: float, status: str, **kwargs) -> CompletionResult:
    return CompletionResult.from_factors(
        FactoredMatrix.zeros(*obs.shape),
        lambda_used=lam,
        converged=status == "zero_observations",
        status=status,
        **kwargs,
    )


class _WeightedFixedPoint:
    """Runs fixed-point stages with warm starts and keeps the bookkeeping."""

    def __init__(self, obs: MaskedMatrix, cfg: WsstConfig):
        self.obs = obs
        self.cfg = cfg
        self.current = FactoredMatrix.zeros(*obs.shape)
        self.iterations = 0
        self.converged = True
        self.stage_lambdas: List[float] = []

    def stage(self, lam: float, w: WeightVector) -> None:
        # lambda is rescaled by the leading weight: thresholds lam * w_1 / w_j
        result = fixed_point_solve(
            self.obs,
            lam * float(w.w[0]),
            w,
            tau=self.cfg.tau,
            tol=self.cfg.tol,
            warm_start=self.current,
            max_iters=self.cfg.max_inner_iters,
            rank_cap=self.cfg.rank_cap,
            dense_threshold=self.cfg.dense_threshold,
        )
        self.current = result.factors
        self.iterations += result.iterations
        self.converged = self.converged and result.converged
        self.stage_lambdas.append(lam)


def flag_max_iters(name: str, result: CompletionResult, cfg: WsstConfig) -> None:
    """Warn about stages stopped at max_inner_iters, or raise in strict mode."""
    message = f"some {name} stages stopped at max_inner_iters={cfg.max_inner_iters}"
    if cfg.strict:
        raise MaxItersExceeded(message, iterations=result.inner_iterations_total, result=result)
    logger.warning(message)


def _weights(sigma, n: int) -> WeightVector:
    w = weights_from_spectrum(sigma, n)
    if not w.support.size:
        raise DegenerateWeights("every singular value of the intermediate completion is zero")
    return w


def wsst(
    obs: MaskedMatrix, preliminary: CompletionResult, cfg: Optional[WsstConfig] = None
) -> CompletionResult:
    """
    Weighted spectral soft-thresholding.

    Starting from weights w_j = sigma_j of the preliminary reconstruction, a
    continuation loop runs the weighted fixed point at lambda_1, q lambda_1,
    ... while lambda > lambda_target, warm-starting each stage. Then K rounds
    at lambda_target reset w_j = sigma_j of the current completion (zero
    beyond its numerical rank) and solve the fixed point again.

    The continuation stops at the last lambda above lambda_target; the
    geometric step past it is not run. The K rounds use lambda_target
    itself, the same lambda as the NNM baseline, so ``lambda_used`` is
    identical for both solvers.

    Args:
        obs: observed entries P_Omega(A0)
        preliminary: a completed matrix, typically the NNM solution
        cfg: algorithm parameters

    Returns:
        CompletionResult; an all-zero intermediate yields the zero completion
        with status ``degenerate_weights``
    """
    cfg = cfg or WsstConfig()
    n = min(obs.shape)
    lam, lam_target = lambda_schedule(obs, cfg)
    if lam_target == 0.0:
        logger.info("all observed entries are zero, returning the zero completion")
        return zero_completion(obs, 0.0, "zero_observations")

    runner = _WeightedFixedPoint(obs, cfg)
    rounds = 0
    try:
        w = _weights(preliminary.final_singular_values, n)
        while lam > lam_target:
            runner.stage(lam, w)
            lam *= cfg.q
        logger.debug(
            f"continuation done after {len(runner.stage_lambdas)} stages, "
            f"rank {runner.current.width}"
        )

        for _ in range(cfg.K):
            w = _weights(runner.current.singular_values(), n)
            runner.stage(lam_target, w)
            rounds += 1
    except DegenerateWeights as e:
        logger.warning(f"WSST stopped after {rounds} reweighting rounds: {e}")
        return zero_completion(
            obs, lam_target, "degenerate_weights",
            inner_iterations_total=runner.iterations,
            reweight_rounds=rounds,
            stage_lambdas=runner.stage_lambdas,
        )

    result = CompletionResult.from_factors(
        runner.current,
        lambda_used=lam_target,
        inner_iterations_total=runner.iterations,
        reweight_rounds=rounds,
        converged=runner.converged,
        status="ok" if runner.converged else "max_iters_exceeded",
        stage_lambdas=runner.stage_lambdas,
    )
    if not runner.converged:
        flag_max_iters("WSST", result, cfg)
    return result
