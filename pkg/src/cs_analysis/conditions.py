"""Weight condition A0(I, C) and empirical RIP / incoherence constants."""
from typing import Sequence, Union

import numpy as np

from src.core.exceptions import InvalidParameter
from src.cs.models import WeightVector
from src.numerics import as_dense_matrix, as_vector

IndexSet = Union[Sequence[int], np.ndarray]


def _index_array(I: IndexSet, n: int) -> np.ndarray:
    idx = np.unique(np.asarray(I, dtype=np.intp).ravel())
    if idx.size and (idx[0] < 0 or idx[-1] >= n):
        raise InvalidParameter(f"index set must lie in [0, {n}), got {idx.tolist()}")
    return idx


def complement(I: IndexSet, n: int) -> np.ndarray:
    """Indices of {0..n-1} not in I."""
    mask = np.ones(n, dtype=bool)
    mask[_index_array(I, n)] = False
    return np.flatnonzero(mask)


def a0_constant(w: WeightVector, I: IndexSet) -> float:
    """
    |w_{I^c}|_inf * |(1/w)_I|_2 with 1/0 = inf.

    Returns +inf when some w_i = 0 on I (the support condition fails), and
    0 when I^c is empty or w vanishes on it.
    """
    idx = _index_array(I, len(w))
    on = w.w[idx]
    if np.any(on == 0):
        return float("inf")
    off = w.w[complement(idx, len(w))]
    off_peak = float(np.max(off)) if off.size else 0.0
    if off_peak == 0.0:
        return 0.0
    return off_peak * float(np.linalg.norm(1.0 / on))


def weight_accuracy_implies_a0(x: np.ndarray, w: WeightVector, C: float) -> bool:
    """Sufficient accuracy condition min_I |x_i| >= (1 + sqrt|I|/C) |w - |x||_inf."""
    if C <= 0:
        raise InvalidParameter(f"C must be positive, got {C}")
    x = as_vector(x, "x")
    I = np.flatnonzero(x)
    if I.size == 0:
        raise InvalidParameter("the support of x must be non-empty")
    deviation = float(np.max(np.abs(w.w - np.abs(x))))
    return float(np.min(np.abs(x[I]))) >= (1.0 + np.sqrt(I.size) / C) * deviation


def empirical_rip_delta(A: np.ndarray, I: IndexSet) -> float:
    """Operator norm of A_I^T A_I - Id, i.e. sup over unit y of ||A_I y|^2 - 1|."""
    A = as_dense_matrix(A, "A")
    idx = _index_array(I, A.shape[1])
    if idx.size == 0:
        return 0.0
    columns = A[:, idx]
    eigenvalues = np.linalg.eigvalsh(columns.T @ columns)
    return float(np.max(np.abs(eigenvalues - 1.0)))


def empirical_incoherence(A: np.ndarray, I: IndexSet) -> float:
    """max over i outside I of |A_I^T A_{i}|_2."""
    A = as_dense_matrix(A, "A")
    idx = _index_array(I, A.shape[1])
    rest = complement(idx, A.shape[1])
    if rest.size == 0 or idx.size == 0:
        return 0.0
    cross = A[:, idx].T @ A[:, rest]
    return float(np.max(np.linalg.norm(cross, axis=0)))
