"""Pytest configuration and shared fixtures."""
import os
from pathlib import Path

import numpy as np
import pytest

from src.cs import SensingProblem
from src.mc import MaskSet, apply_mask
from src.numerics import gaussian_low_rank, uniform_cells

MOVIELENS_ENV = "WSST_MOVIELENS_100K"


def _movielens_available() -> bool:
    """Check if the MovieLens ratings file named by the environment exists."""
    path = os.environ.get(MOVIELENS_ENV)
    return bool(path) and Path(path).is_file()


def pytest_collection_modifyitems(config, items):
    """Skip integration tests if the MovieLens file is not available."""
    if not _movielens_available():
        skip_integration = pytest.mark.skip(reason=f"{MOVIELENS_ENV} not set - skipping integration tests")
        for item in items:
            if "integration" in item.keywords:
                item.add_marker(skip_integration)


@pytest.fixture
def three_column_problem():
    """A = [[1,0,1],[0,1,1]], x = e_3: basis pursuit recovers x exactly."""
    A = np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]])
    x = np.array([0.0, 0.0, 1.0])
    return SensingProblem.from_signal(A, x), x


@pytest.fixture
def segment_problem():
    """A = [[1, 1]], y = 1: every point of the segment (1,0)-(0,1) is a minimizer."""
    return SensingProblem(A=np.array([[1.0, 1.0]]), y=np.array([1.0]))


@pytest.fixture
def low_rank_instance():
    """20 x 20 rank-2 Gaussian product with 60% of the cells observed."""
    truth = gaussian_low_rank(20, 20, 2, seed=[5, 0])
    mask = MaskSet.from_flat(20, 20, uniform_cells(20, 20, 240, seed=[5, 1]))
    return truth, apply_mask(truth, mask)


@pytest.fixture
def movielens_path():
    return Path(os.environ[MOVIELENS_ENV])
