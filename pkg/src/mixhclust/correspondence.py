"""Correspondence-analysis geometry of a coded matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coding import CodedMatrix
from .errors import NegativeEntry, ZeroMarginal

# above this many rows pairwise distances are produced in row blocks
FULL_MATRIX_LIMIT = 5000
BLOCK_ROWS = 1024


@dataclass(frozen=True)
class CorrespondenceView:
    P: np.ndarray
    r: np.ndarray
    c: np.ndarray
    profiles: np.ndarray

    @property
    def n_rows(self) -> int:
        return self.P.shape[0]


def correspondence_view(Z, prune_empty_columns: bool = False) -> CorrespondenceView:
    """Correspondence matrix, masses and row profiles of ``Z``."""
    Z = np.asarray(Z.entries if isinstance(Z, CodedMatrix) else Z, dtype=float)
    if Z.ndim != 2 or Z.size == 0:
        raise ZeroMarginal("coded matrix is empty")
    if (Z < 0).any():
        raise NegativeEntry("chi-square geometry needs a nonnegative matrix")
    if prune_empty_columns:
        Z = Z[:, Z.sum(axis=0) > 0]
    P = Z / Z.sum()
    r = P.sum(axis=1)
    c = P.sum(axis=0)
    if (r <= 0).any():
        raise ZeroMarginal(f"row {int(np.flatnonzero(r <= 0)[0])} has zero mass")
    if (c <= 0).any():
        raise ZeroMarginal(
            f"column {int(np.flatnonzero(c <= 0)[0])} has zero mass; "
            "prune empty columns first"
        )
    return CorrespondenceView(P=P, r=r, c=c, profiles=P / r[:, None])


def chi2_distance_sq(i: int, j: int, view: CorrespondenceView) -> float:
    diff = view.profiles[i] - view.profiles[j]
    return float(np.sum(diff * diff / view.c))


def chi2_distance(i: int, j: int, view: CorrespondenceView) -> float:
    return float(np.sqrt(chi2_distance_sq(i, j, view)))


def chi2_distance_matrix(view: CorrespondenceView, squared: bool = False) -> np.ndarray:
    """All pairwise chi-square distances.

    Rows are scaled by ``1/sqrt(c)`` so the problem becomes Euclidean; large
    inputs are processed in row blocks with identical arithmetic.
    """
    X = view.profiles / np.sqrt(view.c)
    sq = np.einsum("ij,ij->i", X, X)
    n = X.shape[0]
    step = n if n <= FULL_MATRIX_LIMIT else BLOCK_ROWS
    out = np.empty((n, n))
    for a in range(0, n, step):
        b = min(a + step, n)
        block = sq[a:b, None] + sq[None, :] - 2.0 * X[a:b] @ X.T
        out[a:b] = np.maximum(block, 0.0)
    out = (out + out.T) / 2
    np.fill_diagonal(out, 0.0)
    return out if squared else np.sqrt(out)


def total_inertia(view: CorrespondenceView, check: bool = True) -> float:
    """Total inertia, ``sum (p_ij - r_i c_j)^2 / (r_i c_j)``.

    With ``check`` the value is compared against the mass-weighted squared
    chi-square distance of the profiles to their centroid.
    """
    E = np.outer(view.r, view.c)
    inertia = float(np.sum((view.P - E) ** 2 / E))
    if check:
        diff = view.profiles - view.c
        alt = float(np.sum(view.r * np.sum(diff * diff / view.c, axis=1)))
        if not np.isclose(inertia, alt, rtol=1e-8, atol=1e-10):
            raise ArithmeticError(f"inertia formulas disagree: {inertia} vs {alt}")
    return inertia
