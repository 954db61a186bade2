"""Shared fixtures and helpers for the test suite."""

import numpy as np
import pytest

from dscfw.matrix import SimilarityMatrix, new_similarity_matrix


def rand_sim(n: int, rng) -> SimilarityMatrix:
    """Random symmetric nonnegative zero-diagonal similarity matrix."""
    upper = np.triu(rng.uniform(size=(n, n)), 1)
    return new_similarity_matrix(upper + upper.T)


@pytest.fixture
def A3() -> SimilarityMatrix:
    """Small worked-example matrix used by the frozen-value tests."""
    return new_similarity_matrix([[0.0, 2.0, 1.0],
                                  [2.0, 0.0, 3.0],
                                  [1.0, 3.0, 0.0]])


@pytest.fixture
def two_blocks() -> SimilarityMatrix:
    """Two disconnected 2-object clusters: {0,1} and {2,3}."""
    return new_similarity_matrix([[0.0, 1.0, 0.0, 0.0],
                                  [1.0, 0.0, 0.0, 0.0],
                                  [0.0, 0.0, 0.0, 1.0],
                                  [0.0, 0.0, 1.0, 0.0]])
