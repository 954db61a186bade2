"""Similarity pipelines and synthetic generator tests."""

import numpy as np
import pytest

from dscfw.data import (
    block_noise_matrix,
    cosine_similarity,
    gauss_dataset,
    hsv_features,
    max_transform,
    minimax_distances,
    pairwise_euclidean,
)
from dscfw.errors import AsymmetricMatrix, HsvRangeError, ZeroNormRow


class TestCosineSimilarity:
    def test_frozen(self):
        F = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]
        A = cosine_similarity(F, shift=1.0)
        assert A.entries[0, 1] == pytest.approx(1.0, rel=1e-12)
        assert A.entries[0, 2] == pytest.approx(1.0 + 1.0 / np.sqrt(2.0),
                                                rel=1e-12)
        assert np.all(np.diagonal(A.entries) == 0.0)

    def test_zero_norm_row(self):
        with pytest.raises(ZeroNormRow):
            cosine_similarity([[0.0, 0.0], [1.0, 0.0]])

    def test_scale_invariance_of_rows(self):
        rng = np.random.default_rng(2)
        F = rng.normal(size=(5, 3))
        A = cosine_similarity(F, shift=1.0)
        B = cosine_similarity(F * rng.uniform(0.5, 2.0, size=(5, 1)),
                              shift=1.0)
        assert np.allclose(A.entries, B.entries, atol=1e-12)


class TestHsvFeatures:
    def test_frozen(self):
        feats = hsv_features([[0.0, 1.0, 1.0], [np.pi / 2.0, 0.5, 0.8]])
        assert np.allclose(feats[0], [1.0, 0.0, 1.0], atol=1e-12)
        assert np.allclose(feats[1], [0.8, 0.4, 0.0], atol=1e-12)

    def test_shape_error(self):
        with pytest.raises(HsvRangeError):
            hsv_features([[0.0, 1.0]])

    def test_range_error(self):
        with pytest.raises(HsvRangeError):
            hsv_features([[0.0, 1.5, 0.5]])


class TestPairwiseEuclidean:
    def test_frozen_345_triangle(self):
        D = pairwise_euclidean([[0.0, 0.0], [3.0, 4.0]])
        assert D[0, 1] == pytest.approx(5.0, rel=1e-12)
        assert D[0, 0] == 0.0

    def test_symmetric_nonnegative(self):
        rng = np.random.default_rng(4)
        D = pairwise_euclidean(rng.normal(size=(10, 2)))
        assert np.allclose(D, D.T)
        assert np.all(D >= 0)


class TestMinimaxDistances:
    def test_frozen_chain(self):
        # Points 0, 1, 5 on a line: the bottleneck between the endpoints
        # goes through the middle point (max edge 4 instead of direct 5).
        D = pairwise_euclidean([[0.0], [1.0], [5.0]])
        M = minimax_distances(D)
        assert M[0, 2] == 4.0
        assert M[0, 1] == 1.0
        assert M[1, 2] == 4.0
        assert np.all(np.diagonal(M) == 0.0)

    def test_rejects_asymmetric(self):
        with pytest.raises(AsymmetricMatrix):
            minimax_distances([[0.0, 1.0], [2.0, 0.0]])

    def test_never_exceeds_direct_distance(self):
        rng = np.random.default_rng(9)
        D = pairwise_euclidean(rng.normal(size=(12, 2)))
        M = minimax_distances(D)
        assert np.all(M <= D + 1e-12)
        assert np.allclose(M, M.T)


class TestMaxTransform:
    def test_frozen(self):
        A = max_transform([[0.0, 1.0, 3.0], [1.0, 0.0, 2.0],
                           [3.0, 2.0, 0.0]])
        assert np.allclose(A.entries, [[0.0, 2.0, 0.0],
                                       [2.0, 0.0, 1.0],
                                       [0.0, 1.0, 0.0]])

    def test_diagonal_forced_to_zero(self):
        A = max_transform([[0.0, 1.0], [1.0, 0.0]])
        assert np.all(np.diagonal(A.entries) == 0.0)


class TestBlockNoiseMatrix:
    def test_structure(self):
        A, truth = block_noise_matrix(50, 4, 0.3, seed=0)
        assert A.n == 50
        assert truth.shape == (50,)
        assert set(np.unique(truth)) <= {1, 2, 3, 4}
        # Cross-cluster entries are exactly zero.
        diff = truth[:, None] != truth[None, :]
        assert np.all(A.entries[diff] == 0.0)

    def test_noise_zeroes_within_block_entries(self):
        A0, truth = block_noise_matrix(60, 2, 0.0, seed=1)
        A9, _ = block_noise_matrix(60, 2, 0.9, seed=1)
        same = (truth[:, None] == truth[None, :]) & ~np.eye(60, dtype=bool)
        frac0 = np.count_nonzero(A0.entries[same]) / same.sum()
        frac9 = np.count_nonzero(A9.entries[same]) / same.sum()
        assert frac0 == 1.0
        assert frac9 < 0.25

    def test_seed_determinism(self):
        A1, t1 = block_noise_matrix(30, 3, 0.2, seed=7)
        A2, t2 = block_noise_matrix(30, 3, 0.2, seed=7)
        assert np.array_equal(A1.entries, A2.entries)
        assert np.array_equal(t1, t2)

    def test_validation(self):
        with pytest.raises(ValueError):
            block_noise_matrix(10, 2, 1.5)
        with pytest.raises(ValueError):
            block_noise_matrix(3, 5, 0.0)


class TestGaussDataset:
    def test_shapes_and_sizes(self):
        F, truth = gauss_dataset(100, 0.2, seed=0)
        assert F.shape == (100, 2)
        assert truth.shape == (100,)
        counts = {c: int(np.sum(truth == c)) for c in np.unique(truth)}
        # 20 background points; 80 split as 10/20/30/40 percent.
        assert counts == {1: 8, 2: 16, 3: 24, 4: 32, 5: 20}

    def test_background_label_convention(self):
        _, truth = gauss_dataset(100, 0.2, seed=0,
                                 background_as_class=False)
        assert int(np.sum(truth == 0)) == 20
        assert 5 not in truth

    def test_no_noise_has_no_background(self):
        _, truth = gauss_dataset(50, 0.0, seed=3)
        assert set(np.unique(truth)) == {1, 2, 3, 4}

    def test_seed_determinism(self):
        F1, t1 = gauss_dataset(40, 0.1, seed=5)
        F2, t2 = gauss_dataset(40, 0.1, seed=5)
        assert np.array_equal(F1, F2)
        assert np.array_equal(t1, t2)

    def test_clusters_are_separated(self):
        F, truth = gauss_dataset(200, 0.0, seed=1)
        centers = np.array([F[truth == c].mean(axis=0) for c in (1, 2, 3, 4)])
        D = pairwise_euclidean(centers)
        off = D[~np.eye(4, dtype=bool)]
        assert off.min() > 5.0

    def test_validation(self):
        with pytest.raises(ValueError):
            gauss_dataset(10, -0.1)
