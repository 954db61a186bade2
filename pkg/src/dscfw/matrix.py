"""Similarity matrices and simplex points with their validity contracts.

The dense primitives here (matvec, quadratic_form) are deliberately O(n^2):
they serve as oracles against the solvers' O(n) incremental updates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AsymmetricMatrix,
    DimensionMismatch,
    NegativeEntry,
    NonzeroDiagonal,
    TooSmall,
)

SUM_TOL = 1e-12
SYM_TOL = 1e-9
DIAG_TOL = 1e-12


@dataclass(frozen=True)
class SimilarityMatrix:
    """Dense symmetric nonnegative n x n matrix with zero diagonal.

    Immutable after construction; safe to share across concurrent solver
    runs. Use :func:`new_similarity_matrix` to build a validated instance.
    """

    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def column(self, i: int) -> np.ndarray:
        return self.entries[:, i]

    def row_sums(self) -> np.ndarray:
        return self.entries.sum(axis=1)


@dataclass
class SimplexPoint:
    """Point on the standard simplex with exact support bookkeeping.

    The support set is maintained by the step logic (add on entering
    component, remove on drop step), never re-derived by thresholding.
    """

    coords: np.ndarray
    support: set[int] = field(default_factory=set)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    def copy(self) -> "SimplexPoint":
        return SimplexPoint(self.coords.copy(), set(self.support))

    def validate(self) -> None:
        if np.any(self.coords < 0):
            raise NegativeEntry("simplex point has a negative coordinate")
        if abs(self.coords.sum() - 1.0) > SUM_TOL:
            raise DimensionMismatch(
                f"simplex sum drifted: {self.coords.sum()!r}"
            )
        actual = {int(i) for i in np.nonzero(self.coords > 0)[0]}
        if actual != self.support:
            raise DimensionMismatch("support bookkeeping out of sync")

    def renormalize_if_needed(self) -> None:
        s = self.coords.sum()
        if abs(s - 1.0) > SUM_TOL:
            self.coords /= s


def simplex_point(coords) -> SimplexPoint:
    """Build a SimplexPoint from raw coordinates, deriving the support."""
    arr = np.asarray(coords, dtype=float)
    pt = SimplexPoint(arr, {int(i) for i in np.nonzero(arr > 0)[0]})
    pt.validate()
    return pt


def new_similarity_matrix(raw) -> SimilarityMatrix:
    """Validate a raw square array as a similarity matrix.

    Raises AsymmetricMatrix, NegativeEntry or NonzeroDiagonal when the
    respective contract is violated. Diagonal entries within 1e-12 of zero
    are forced to exactly zero.
    """
    arr = np.array(raw, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got {arr.shape}")
    if np.max(np.abs(arr - arr.T), initial=0.0) > SYM_TOL:
        raise AsymmetricMatrix("matrix is not symmetric")
    diag = np.diagonal(arr)
    if np.any(np.abs(diag) > DIAG_TOL):
        raise NonzeroDiagonal("self-similarities must be zero")
    np.fill_diagonal(arr, 0.0)
    if np.any(arr < 0):
        raise NegativeEntry("similarities must be nonnegative")
    arr.setflags(write=False)
    return SimilarityMatrix(arr)


def matvec(A: SimilarityMatrix, x: SimplexPoint | np.ndarray) -> np.ndarray:
    """Dense A @ x. This is the oracle, not the hot path."""
    v = x.coords if isinstance(x, SimplexPoint) else np.asarray(x, dtype=float)
    if v.shape[0] != A.n:
        raise DimensionMismatch(f"dim {v.shape[0]} vs matrix n={A.n}")
    return A.entries @ v


def quadratic_form(A: SimilarityMatrix, x: SimplexPoint | np.ndarray) -> float:
    """Dense x' A x."""
    v = x.coords if isinstance(x, SimplexPoint) else np.asarray(x, dtype=float)
    if v.shape[0] != A.n:
        raise DimensionMismatch(f"dim {v.shape[0]} vs matrix n={A.n}")
    return float(v @ (A.entries @ v))


def offdiag_extremes(A: SimilarityMatrix) -> tuple[float, float]:
    """(min, max) over all off-diagonal entries."""
    if A.n < 2:
        raise TooSmall("need n >= 2 for off-diagonal extremes")
    mask = ~np.eye(A.n, dtype=bool)
    off = A.entries[mask]
    return float(off.min()), float(off.max())


def load_matrix_csv(path) -> SimilarityMatrix:
    """Read a header-free CSV of n rows of n comma-separated values."""
    arr = np.loadtxt(path, delimiter=",", ndmin=2)
    return new_similarity_matrix(arr)


def save_matrix_csv(path, A: SimilarityMatrix) -> None:
    np.savetxt(path, A.entries, delimiter=",")


def load_features_csv(path) -> np.ndarray:
    """Feature-matrix CSV: one row per object, d columns."""
    return np.loadtxt(path, delimiter=",", ndmin=2)
