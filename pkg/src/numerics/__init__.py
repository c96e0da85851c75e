"""Dense linear-algebra kernels and seeded random generators."""

from .linalg import (
    DenseMatrix,
    SvdFactorization,
    as_dense_matrix,
    as_vector,
    least_squares_solve,
    numerical_rank,
    svd,
)
from .generators import (
    SeedLike,
    gaussian_low_rank,
    gaussian_sensing_matrix,
    make_rng,
    random_sparse_vector,
    uniform_cells,
)

__all__ = [
    'DenseMatrix',
    'SvdFactorization',
    'as_dense_matrix',
    'as_vector',
    'least_squares_solve',
    'numerical_rank',
    'svd',
    'SeedLike',
    'gaussian_low_rank',
    'gaussian_sensing_matrix',
    'make_rng',
    'random_sparse_vector',
    'uniform_cells',
]
