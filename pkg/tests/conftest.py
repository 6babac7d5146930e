import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_consistent_matrix(rng, n):
    """Random fully consistent comparison matrix built as v_i / v_j."""
    v = rng.uniform(0.1, 10.0, n)
    return v[:, None] / v[None, :], v / v.sum()


@pytest.fixture
def consistent_3x3():
    return np.array([[1, 2, 4], [0.5, 1, 2], [0.25, 0.5, 1]], dtype=float)
