"""Iteratively reweighted basis pursuit and exact-recovery certification."""
from typing import Optional
import logging

import numpy as np

from src.core.exceptions import (
    InvalidParameter,
    NotStabilized,
    ReconstructionError,
    ReweightingError,
    ZeroGroundTruth,
)
from src.core.metrics import relative_error
from src.cs.models import (
    BpSolution,
    RecoveryCertificate,
    ReweightTrace,
    SensingProblem,
    SolverConfig,
    WeightVector,
)
from src.cs.solver import numerical_support, solve_bp, solve_weighted_bp
from src.numerics import as_vector

logger = logging.getLogger(__name__)


def recovery_declared(x_hat: np.ndarray, x: np.ndarray, eta: float) -> bool:
    """Exact recovery is declared when |x_hat - x|_2 / |x|_2 < eta.

    Raises:
        ZeroGroundTruth: if x is the zero vector
    """
    if not np.any(np.asarray(x, dtype=np.float64)):
        raise ZeroGroundTruth("relative error is undefined for a zero ground truth")
    return relative_error(x_hat, x) < eta


def reweight_iterate(
    problem: SensingProblem,
    epsilon: float,
    k_max: int,
    cfg: Optional[SolverConfig] = None,
    ground_truth: Optional[np.ndarray] = None,
) -> ReweightTrace:
    """
    Compute Delta_1, ..., Delta_{k_max} of the epsilon-reweighted decoder.

    Delta_1 is basis pursuit; Delta_{k+1} is weighted basis pursuit with
    w_i = |Delta_k_i| + epsilon, warm-started from Delta_k.

    Args:
        problem: measurements y = A x
        epsilon: strictly positive weight floor
        k_max: number of iterates to return
        cfg: solver tolerances
        ground_truth: when given, err_k = log(|Delta_k - x|/|x|) and
            C^k = |w_{I^c}|_inf |(1/w)_I|_2 with w = |Delta_k| + epsilon and
            I = supp(x) are recorded

    Raises:
        ReweightingError: a solver error, annotated with the iteration index
    """
    if epsilon <= 0:
        raise InvalidParameter(f"epsilon must be strictly positive, got {epsilon}")
    if k_max < 1:
        raise InvalidParameter(f"k_max must be at least 1, got {k_max}")
    cfg = cfg or SolverConfig()

    try:
        first = solve_bp(problem, cfg)
    except ReconstructionError as e:
        raise ReweightingError(str(e), iteration=1) from e

    solutions = [first]
    for k in range(2, k_max + 1):
        previous = solutions[-1].t
        weights = WeightVector.from_estimate(previous, epsilon)
        try:
            solutions.append(solve_weighted_bp(problem, weights, cfg, warm_start=previous))
        except ReconstructionError as e:
            raise ReweightingError(str(e), iteration=k) from e

    trace = ReweightTrace(epsilon=epsilon, iterates=[s.t for s in solutions], solutions=solutions)

    if ground_truth is not None:
        # imported here: cs_analysis depends on the cs models
        from src.cs_analysis.conditions import a0_constant

        x = as_vector(ground_truth, "ground_truth")
        support = np.flatnonzero(x)
        norm = float(np.linalg.norm(x))
        with np.errstate(divide="ignore"):
            trace.per_iteration_error = [
                float(np.log(relative_error(t, x))) if norm > 0 else float("nan")
                for t in trace.iterates
            ]
        trace.per_iteration_C = [
            a0_constant(WeightVector.from_estimate(t, epsilon), support) for t in trace.iterates
        ]

    logger.debug(
        f"reweighting finished: {k_max} iterates, "
        f"{sum(s.iterations for s in solutions)} solver iterations"
    )
    return trace


def unweighted_reweight_step(
    problem: SensingProblem,
    previous: np.ndarray,
    cfg: Optional[SolverConfig] = None,
) -> BpSolution:
    """One step of the epsilon = 0 sequence: weights |previous| on its numerical support."""
    cfg = cfg or SolverConfig()
    previous = as_vector(previous, "previous")
    w = np.zeros(problem.N)
    support = numerical_support(previous, cfg.support_tol)
    w[support] = np.abs(previous[support])
    return solve_weighted_bp(problem, WeightVector(w), cfg, warm_start=previous)


def certify_exact_recovery(
    problem: SensingProblem,
    cfg: Optional[SolverConfig] = None,
    r_max: int = 20,
) -> RecoveryCertificate:
    """
    Certify exact recovery by running the unweighted reweighting sequence.

    Delta_{k+1} uses w = |Delta_k| (epsilon = 0), so coordinates outside the
    numerical support of Delta_k are dropped. The result is certified when two
    consecutive iterates agree within ``stab_tol`` and the stable iterate has
    at most floor(m/2) non-zero coordinates.

    Raises:
        NotStabilized: if ``cfg.strict`` and no two consecutive iterates agree
            within ``r_max`` rounds
        ReweightingError: a solver error, annotated with the iteration index
    """
    if r_max < 2:
        raise InvalidParameter(f"r_max must be at least 2, got {r_max}")
    cfg = cfg or SolverConfig()

    try:
        previous = solve_bp(problem, cfg).t
    except ReconstructionError as e:
        raise ReweightingError(str(e), iteration=1) from e

    for r in range(2, r_max + 1):
        try:
            current = unweighted_reweight_step(problem, previous, cfg).t
        except ReconstructionError as e:
            raise ReweightingError(str(e), iteration=r) from e

        gap = float(np.linalg.norm(current - previous))
        if gap <= cfg.stab_tol * max(1.0, float(np.linalg.norm(previous))):
            sparsity = numerical_support(current, cfg.support_tol).size
            if sparsity <= problem.m // 2:
                return RecoveryCertificate(True, current, r, "certified")
            logger.info(
                f"sequence stabilized after {r} rounds but support {sparsity} > floor(m/2)"
            )
            return RecoveryCertificate(False, current, r, "support_too_large")
        previous = current

    if cfg.strict:
        raise NotStabilized(f"reweighting sequence did not stabilize within {r_max} rounds", rounds=r_max)
    logger.info(f"reweighting sequence did not stabilize within {r_max} rounds")
    return RecoveryCertificate(False, None, r_max, "not_stabilized")
