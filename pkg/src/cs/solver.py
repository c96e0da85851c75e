"""Basis pursuit and weighted basis pursuit.

The weighted problem

    minimize  sum_{i in I_w} |t_i| / w_i   subject to  A_{I_w} t = y

is reduced to plain basis pursuit by the change of variables t_i = w_i u_i
(column rescaling). Plain basis pursuit is solved by ADMM alternating an exact
projection onto {u : B u = y} (one cached SVD of B) with entrywise shrinkage.
Every ``check_every`` iterations the iterate is polished onto its support by
least squares and its optimality is certified by an explicit duality gap.
"""
from typing import Iterable, Optional, Tuple
import logging

import numpy as np

from src.core.exceptions import DimensionMismatch, Infeasible, NotConverged
from src.cs.models import BpSolution, SensingProblem, SolverConfig, WeightVector
from src.numerics import as_vector, least_squares_solve, svd

logger = logging.getLogger(__name__)


def numerical_support(t: np.ndarray, rel_tol: float = 1e-8) -> np.ndarray:
    """Indices with |t_i| > rel_tol * |t|_inf (empty for the zero vector)."""
    t = np.asarray(t, dtype=np.float64)
    scale = np.max(np.abs(t)) if t.size else 0.0
    if scale == 0.0:
        return np.array([], dtype=np.intp)
    return np.flatnonzero(np.abs(t) > rel_tol * scale)


def shrink(v: np.ndarray, kappa: float) -> np.ndarray:
    """Entrywise soft-thresholding at level kappa."""
    return np.sign(v) * np.maximum(np.abs(v) - kappa, 0.0)


class _AffineProjector:
    """Projection onto {u : B u = y}, cached from one SVD of B."""

    def __init__(self, B: np.ndarray, y: np.ndarray):
        factors = svd(B)
        sigma = factors.singular_values
        cutoff = max(B.shape) * np.finfo(np.float64).eps * (sigma[0] if sigma.size else 0.0)
        rank = int(np.count_nonzero(sigma > cutoff))
        self.basis = factors.right[:, :rank]
        # minimum-norm solution, lies in the row space
        self.x0 = self.basis @ ((factors.left[:, :rank].T @ y) / sigma[:rank])
        self.residual = float(np.linalg.norm(B @ self.x0 - y))

    def project(self, v: np.ndarray) -> np.ndarray:
        return v - self.basis @ (self.basis.T @ v) + self.x0

    def row_space(self, g: np.ndarray) -> np.ndarray:
        return self.basis @ (self.basis.T @ g)


class _L1Solver:
    """ADMM for min |u|_1 s.t. B u = y, with polishing and gap certification."""

    def __init__(self, B: np.ndarray, y: np.ndarray, cfg: SolverConfig):
        self.B = B
        self.y = y
        self.cfg = cfg
        self.y_norm = float(np.linalg.norm(y))
        self.feas_bound = cfg.feas_tol * max(self.y_norm, 1.0)
        self.projector = _AffineProjector(B, y)
        if self.projector.residual > self.feas_bound:
            raise Infeasible(
                f"y is not in the range of the sensing matrix "
                f"(least-squares residual {self.projector.residual:.3e})",
                residual=self.projector.residual,
            )

    def _residual(self, u: np.ndarray) -> float:
        return float(np.linalg.norm(self.B @ u - self.y))

    def _polish(self, support: np.ndarray) -> Optional[np.ndarray]:
        if support.size == 0 or support.size > self.B.shape[0]:
            return None
        u = np.zeros(self.B.shape[1])
        u[support] = least_squares_solve(self.B[:, support], self.y)
        return u

    def _support_certificate(self, u: np.ndarray) -> Optional[np.ndarray]:
        """Minimum-norm nu with B_S^T nu = sgn(u_S); returns g = B^T nu."""
        support = numerical_support(u, self.cfg.support_tol)
        if support.size == 0:
            return None
        nu = least_squares_solve(self.B[:, support].T, np.sign(u[support]))
        return self.B.T @ nu

    @staticmethod
    def _gap(u: np.ndarray, g: np.ndarray) -> float:
        # g lies in range(B^T); scaled into the dual-feasible box, u^T g = y^T nu
        peak = np.max(np.abs(g)) if g.size else 0.0
        g = g / max(1.0, peak)
        return max(float(np.sum(np.abs(u)) - u @ g), 0.0)

    def _assess(
        self, candidates: Iterable[Optional[np.ndarray]], dual: Optional[np.ndarray]
    ) -> Tuple[Optional[np.ndarray], float]:
        best, best_gap, best_obj = None, float("inf"), float("inf")
        for u in candidates:
            if u is None or self._residual(u) > self.feas_bound:
                continue
            obj = float(np.sum(np.abs(u)))
            gaps = [float("inf")]
            g = self._support_certificate(u)
            if g is not None:
                gaps.append(self._gap(u, g))
            if dual is not None:
                gaps.append(self._gap(u, dual))
            gap = min(gaps)
            if gap < best_gap or (gap == best_gap and obj < best_obj):
                best, best_gap, best_obj = u, gap, obj
        return best, best_gap

    def _converged(self, u: Optional[np.ndarray], gap: float) -> bool:
        if u is None:
            return False
        return gap <= self.cfg.obj_tol * max(1.0, float(np.sum(np.abs(u))))

    def run(self, warm_start: Optional[np.ndarray] = None) -> Tuple[np.ndarray, int, bool, float]:
        n = self.B.shape[1]
        if self.y_norm == 0.0:
            return np.zeros(n), 0, True, 0.0

        x0 = self.projector.x0
        rho = self.cfg.rho_scale * n / max(float(np.sum(np.abs(x0))), np.finfo(np.float64).tiny)
        kappa = 1.0 / rho

        z = x0.copy() if warm_start is None else np.asarray(warm_start, dtype=np.float64).copy()
        u = np.zeros(n)
        x = self.projector.project(z)

        start = [self._polish(np.flatnonzero(z)), x]
        if warm_start is not None:
            start.insert(0, z)
        best, gap = self._assess(start, None)
        if self._converged(best, gap):
            return best, 0, True, gap
        fallback, fallback_obj = x, float(np.sum(np.abs(x)))

        for it in range(1, self.cfg.max_iters + 1):
            x = self.projector.project(z - u)
            z = shrink(x + u, kappa)
            u += x - z

            if it % self.cfg.check_every:
                continue
            dual = self.projector.row_space(rho * u)
            best, gap = self._assess((self._polish(np.flatnonzero(z)), x), dual)
            if self._converged(best, gap):
                logger.debug(f"L1 solver converged after {it} iterations (gap {gap:.2e})")
                return best, it, True, gap
            obj_x = float(np.sum(np.abs(x)))
            if obj_x < fallback_obj:
                fallback, fallback_obj = x.copy(), obj_x

        logger.warning(
            f"L1 solver hit the iteration cap ({self.cfg.max_iters}) "
            f"on a {self.B.shape[0]}x{n} problem"
        )
        candidate = best if best is not None else fallback
        return candidate, self.cfg.max_iters, False, gap


def solve_weighted_bp(
    problem: SensingProblem,
    weights: WeightVector,
    cfg: Optional[SolverConfig] = None,
    warm_start: Optional[np.ndarray] = None,
) -> BpSolution:
    """
    Weighted basis pursuit: minimize sum |t_i|/w_i subject to A t = y.

    Coordinates with w_i = 0 are forced to zero (1/0 = inf).

    Args:
        problem: measurements y = A x
        weights: non-negative weights, one per column of A
        cfg: solver tolerances; defaults to ``SolverConfig()``
        warm_start: optional length-N starting point (e.g. the previous
            reweighting iterate)

    Returns:
        BpSolution with t exactly zero outside I_w

    Raises:
        Infeasible: if y is not in the range of A restricted to I_w
        NotConverged: if ``cfg.strict`` and the iteration cap is hit
    """
    cfg = cfg or SolverConfig()
    if len(weights) != problem.N:
        raise DimensionMismatch(f"{len(weights)} weights for {problem.N} columns")

    support = weights.support
    t = np.zeros(problem.N)
    y_norm = float(np.linalg.norm(problem.y))

    if support.size == 0:
        if y_norm > cfg.feas_tol * max(y_norm, 1.0):
            raise Infeasible("weight vector has empty support but y is non-zero", residual=y_norm)
        return BpSolution(t=t, objective=0.0, feasibility_residual=y_norm, iterations=0,
                          converged=True, duality_gap=0.0)

    scale = weights.w[support]
    B = problem.A[:, support] * scale
    start = None
    if warm_start is not None:
        start = as_vector(warm_start, "warm_start")[support] / scale

    u, iterations, converged, gap = _L1Solver(B, problem.y, cfg).run(start)

    t[support] = scale * u
    solution = BpSolution(
        t=t,
        objective=float(np.sum(np.abs(u))),
        feasibility_residual=float(np.linalg.norm(problem.A @ t - problem.y)),
        iterations=iterations,
        converged=converged,
        duality_gap=gap,
    )
    if not converged and cfg.strict:
        raise NotConverged(
            f"weighted basis pursuit did not converge in {cfg.max_iters} iterations",
            solution=solution,
        )
    return solution


def solve_bp(problem: SensingProblem, cfg: Optional[SolverConfig] = None) -> BpSolution:
    """Basis pursuit: minimize |t|_1 subject to A t = y."""
    return solve_weighted_bp(problem, WeightVector.ones(problem.N), cfg)
