"""Seeded random generators for sensing matrices, sparse signals and masks.

Every draw goes through ``numpy.random.Generator`` on the counter-based
Philox bit generator, seeded with a ``SeedSequence`` built from the seed
plus optional stream keys. Identical (dims, seed) give bit-identical output
on every platform numpy supports.
"""
from typing import Sequence, Union

import numpy as np

from src.core.exceptions import InvalidParameter

SeedLike = Union[int, Sequence[int]]


def make_rng(seed: SeedLike, *stream: int) -> np.random.Generator:
    """Build a Philox generator for ``seed`` and an optional stream key."""
    if isinstance(seed, (int, np.integer)):
        entropy = [int(seed)]
    else:
        entropy = [int(k) for k in seed]
    entropy.extend(int(k) for k in stream)
    if any(k < 0 for k in entropy):
        raise InvalidParameter(f"seed keys must be non-negative, got {entropy}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def gaussian_sensing_matrix(m: int, N: int, seed: SeedLike) -> np.ndarray:
    """m x N matrix with i.i.d. N(0, 1/m) entries."""
    if m < 1 or N < 1:
        raise InvalidParameter(f"sensing matrix dimensions must be positive, got ({m}, {N})")
    rng = make_rng(seed)
    return rng.standard_normal((m, N)) / np.sqrt(m)


def random_sparse_vector(N: int, s: int, seed: SeedLike) -> np.ndarray:
    """Length-N vector with exactly s standard Gaussian entries on a uniform support."""
    if not 0 <= s <= N:
        raise InvalidParameter(f"sparsity must satisfy 0 <= s <= N, got s={s}, N={N}")
    rng = make_rng(seed)
    x = np.zeros(N)
    if s == 0:
        return x
    support = rng.choice(N, size=s, replace=False)
    values = rng.standard_normal(s)
    # a Gaussian draw of exactly 0.0 would break the support count
    values[values == 0.0] = np.finfo(np.float64).tiny
    x[support] = values
    return x


def gaussian_low_rank(n_rows: int, n_cols: int, rank: int, seed: SeedLike) -> np.ndarray:
    """``U @ V.T`` with i.i.d. N(0, 1) factors of width ``rank``."""
    if rank < 0 or rank > min(n_rows, n_cols):
        raise InvalidParameter(f"rank must be in [0, {min(n_rows, n_cols)}], got {rank}")
    rng = make_rng(seed)
    U = rng.standard_normal((n_rows, rank))
    V = rng.standard_normal((n_cols, rank))
    return U @ V.T


def uniform_cells(n_rows: int, n_cols: int, count: int, seed: SeedLike) -> np.ndarray:
    """``count`` distinct flat (row-major) cell indices drawn without replacement."""
    total = n_rows * n_cols
    if not 0 <= count <= total:
        raise InvalidParameter(f"cell count must be in [0, {total}], got {count}")
    rng = make_rng(seed)
    return np.sort(rng.choice(total, size=count, replace=False))
