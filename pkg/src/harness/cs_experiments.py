"""Compressed-sensing experiments: recovery phase maps and weight-condition tracking."""
from typing import Any, Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np
import pandas as pd

from src.core.exceptions import InvalidParameter, ReconstructionError
from src.core.metrics import ERROR_FLOOR, exactly_recovered
from src.cs import SensingProblem, SolverConfig, reweight_iterate
from src.harness.models import RecoveryMap
from src.harness.parallel import map_ordered
from src.numerics import gaussian_sensing_matrix, random_sparse_vector

logger = logging.getLogger(__name__)

# stream keys separating the experiments' random draws
STREAM_PHASE_MAP = 1
STREAM_A0_TRACKING = 2


def draw_instance(N: int, m: int, s: int, key: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    """Gaussian A (N(0, 1/m)) and an s-sparse Gaussian x, both seeded from ``key``."""
    A = gaussian_sensing_matrix(m, N, [*key, 0])
    x = random_sparse_vector(N, s, [*key, 1])
    return A, x


def _phase_cell(task: Dict[str, Any]) -> Tuple[bool, bool, bool]:
    """One (s, m, rep) draw; returns (plain recovered, weighted recovered, failed)."""
    A, x = draw_instance(task["N"], task["m"], task["s"], task["key"])
    problem = SensingProblem.from_signal(A, x)
    try:
        trace = reweight_iterate(
            problem, task["epsilon"], task["k_weighted"], SolverConfig(**task["solver"])
        )
    except ReconstructionError as e:
        logger.error(f"cell s={task['s']} m={task['m']} rep={task['rep']} failed: {e}")
        return False, False, True
    eta = task["eta"]
    return (
        exactly_recovered(trace.iterates[0], x, eta),
        exactly_recovered(trace.final, x, eta),
        False,
    )


def run_cs_phase_map(
    N: int,
    s_grid: Sequence[int],
    m_grid: Sequence[int],
    reps: int,
    epsilon: float = 0.01,
    k_weighted: int = 20,
    eta: float = 1e-5,
    seed: int = 0,
    cfg: Optional[SolverConfig] = None,
    workers: int = 1,
) -> RecoveryMap:
    """
    Count exact recoveries of basis pursuit and the epsilon-reweighted decoder.

    For every (s, m, rep) a Gaussian A and an s-sparse x are drawn from the
    stream (seed, s, m, rep); both decoders see the same instance, and the
    plain decoder's output is the first iterate of the weighted sequence. A
    cell whose solver raises is logged, counted as not recovered and
    recorded in ``failed``.
    """
    s_values, m_values = list(s_grid), list(m_grid)
    if not s_values or not m_values:
        raise InvalidParameter("the s and m grids must be non-empty")
    if reps < 1:
        raise InvalidParameter(f"reps must be at least 1, got {reps}")
    if any(s < 0 or s > N for s in s_values) or any(m < 1 for m in m_values):
        raise InvalidParameter(f"grid values out of range for N={N}")
    cfg = cfg or SolverConfig()

    tasks = [
        {
            "N": N, "s": s, "m": m, "rep": rep,
            "key": [seed, STREAM_PHASE_MAP, s, m, rep],
            "epsilon": epsilon, "k_weighted": k_weighted, "eta": eta,
            "solver": cfg.model_dump(),
        }
        for s in s_values
        for m in m_values
        for rep in range(reps)
    ]
    logger.info(f"phase map: {len(s_values)}x{len(m_values)} cells, {reps} repetitions each")
    outcomes = map_ordered(_phase_cell, tasks, workers)

    shape = (len(s_values), len(m_values))
    plain, weighted, failed = (np.zeros(shape, dtype=np.int64) for _ in range(3))
    for task, (ok_plain, ok_weighted, bad) in zip(tasks, outcomes):
        i, j = s_values.index(task["s"]), m_values.index(task["m"])
        plain[i, j] += ok_plain
        weighted[i, j] += ok_weighted
        failed[i, j] += bad

    result = RecoveryMap(s_values, m_values, plain, weighted, reps, eta, failed=failed)
    if failed.any():
        logger.warning(f"{int(failed.sum())} phase-map draws failed and count as not recovered")
    logger.info(
        f"phase map done: plain {int(plain.sum())}, weighted {int(weighted.sum())} recoveries"
    )
    return result


def _a0_repetition(task: Dict[str, Any]) -> List[Dict[str, Any]]:
    A, x = draw_instance(task["N"], task["m"], task["s"], task["key"])
    problem = SensingProblem.from_signal(A, x)
    try:
        trace = reweight_iterate(
            problem, task["epsilon"], task["K"], SolverConfig(**task["solver"]), ground_truth=x
        )
    except ReconstructionError as e:
        logger.error(f"A0 tracking repetition {task['rep']} failed: {e}")
        return []
    rows = []
    for k, (err, C) in enumerate(zip(trace.per_iteration_error, trace.per_iteration_C), start=1):
        with np.errstate(divide="ignore"):
            log10_C = float(np.log10(C))
        rows.append({
            "rep": task["rep"],
            "k": k,
            "log10_C": log10_C,
            "err": max(float(err), float(np.log(ERROR_FLOOR))),
        })
    return rows


def run_a0_tracking(
    N: int,
    m: int,
    s: int,
    reps: int,
    K: int = 30,
    epsilon: float = 0.01,
    seed: int = 0,
    cfg: Optional[SolverConfig] = None,
    workers: int = 1,
) -> pd.DataFrame:
    """
    Track log10 C^k and err_k along the reweighting sequence.

    C^k is the weight-condition constant of w = |Delta_k| + epsilon on the
    true support and err_k = log(|Delta_k - x| / |x|), clamped at log(1e-16).

    Returns:
        frame with columns rep, k, log10_C, err
    """
    if not 1 <= s <= N or not 1 <= m <= N:
        raise InvalidParameter(f"need 1 <= s <= N and 1 <= m <= N, got s={s}, m={m}, N={N}")
    if reps < 1 or K < 1:
        raise InvalidParameter("reps and K must be at least 1")
    cfg = cfg or SolverConfig()
    tasks = [
        {
            "N": N, "m": m, "s": s, "rep": rep, "K": K, "epsilon": epsilon,
            "key": [seed, STREAM_A0_TRACKING, rep],
            "solver": cfg.model_dump(),
        }
        for rep in range(reps)
    ]
    rows = [row for block in map_ordered(_a0_repetition, tasks, workers) for row in block]
    return pd.DataFrame(rows, columns=["rep", "k", "log10_C", "err"])


def a0_recovery_correspondence(traces: pd.DataFrame, recovered_below: float = np.log(1e-6)) -> Dict[str, Any]:
    """
    Summarize how the final weight constant separates recovered from failed runs.

    A repetition is recovered when its last err is below ``recovered_below``.
    Reports how many recovered runs end with log10 C^K under the median of
    the failed runs.
    """
    final = traces.sort_values(["rep", "k"]).groupby("rep").tail(1)
    recovered = final[final["err"] < recovered_below]
    failed = final[final["err"] >= recovered_below]
    summary: Dict[str, Any] = {
        "n_recovered": int(len(recovered)),
        "n_failed": int(len(failed)),
        "median_log10_C_failed": float("nan"),
        "recovered_below_median": 0,
    }
    if len(failed):
        median = float(failed["log10_C"].median())
        summary["median_log10_C_failed"] = median
        summary["recovered_below_median"] = int((recovered["log10_C"] < median).sum())
    return summary
