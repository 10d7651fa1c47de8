"""Mass-weighted Ward agglomeration.

The merge cost of two groups with masses ``r_g, r_h`` and centroids
``a_g, a_h`` is ``r_g r_h / (r_g + r_h) * ||a_g - a_h||_W^2`` where ``W`` is a
diagonal metric.  Under the chi-square metric (``W = 1/c``) and row masses
``r`` the costs of the I-1 merges add up to the total inertia of the table.

Costs between the merged group and the others are updated with the weighted
Lance-Williams recurrence::

    D(k, g+h) = ((r_k + r_g) D(k, g) + (r_k + r_h) D(k, h) - r_k D(g, h))
                / (r_k + r_g + r_h)
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .correspondence import CorrespondenceView
from .errors import BadK, DegenerateGainsWarning, NumericError

TIE_RTOL = 1e-12


@dataclass(frozen=True)
class Geometry:
    """Weighted points to be clustered: rows, row masses, diagonal metric."""

    points: np.ndarray
    masses: np.ndarray
    weights: np.ndarray

    @classmethod
    def chi_square(cls, view: CorrespondenceView) -> "Geometry":
        return cls(view.profiles, view.r, 1.0 / view.c)

    @classmethod
    def euclidean(cls, X) -> "Geometry":
        X = np.asarray(X, dtype=float)
        n = X.shape[0]
        return cls(X, np.full(n, 1.0 / n), np.ones(X.shape[1]))


def as_geometry(obj) -> Geometry:
    if isinstance(obj, Geometry):
        return obj
    if isinstance(obj, CorrespondenceView):
        return Geometry.chi_square(obj)
    raise TypeError(f"cannot cluster a {type(obj).__name__}")


@dataclass(frozen=True)
class ClusterNode:
    members: frozenset
    mass: float
    profile: np.ndarray

    @classmethod
    def leaf(cls, i: int, geom) -> "ClusterNode":
        geom = as_geometry(geom)
        return cls(frozenset([i]), float(geom.masses[i]), geom.points[i].copy())

    def merge(self, other: "ClusterNode") -> "ClusterNode":
        mass = self.mass + other.mass
        profile = (self.mass * self.profile + other.mass * other.profile) / mass
        return ClusterNode(self.members | other.members, mass, profile)


def merge_cost(g: ClusterNode, h: ClusterNode, view) -> float:
    """Increase of within-group inertia caused by merging ``g`` and ``h``."""
    w = as_geometry(view).weights
    diff = g.profile - h.profile
    return float(g.mass * h.mass / (g.mass + h.mass) * np.sum(w * diff * diff))


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    cost: float
    node: int
    mass: float
    size: int


@dataclass
class Dendrogram:
    """Merge sequence.  Leaves are ``0..I-1``; merge ``j`` creates node ``I+j``."""

    n_leaves: int
    merges: list[Merge]
    node_masses: np.ndarray | None = None
    node_profiles: np.ndarray | None = None
    labels: list[str] | None = field(default=None)

    @property
    def costs(self) -> np.ndarray:
        return np.array([mg.cost for mg in self.merges])

    def to_linkage(self) -> np.ndarray:
        """scipy-style linkage matrix (left, right, height, size)."""
        return np.array([[mg.left, mg.right, mg.cost, mg.size] for mg in self.merges],
                        dtype=float).reshape(-1, 4)

    def members(self, node: int) -> list[int]:
        out, stack = [], [node]
        while stack:
            v = stack.pop()
            if v < self.n_leaves:
                out.append(v)
            else:
                mg = self.merges[v - self.n_leaves]
                stack.extend((mg.left, mg.right))
        return sorted(out)


@dataclass(frozen=True)
class Partition:
    labels: np.ndarray

    @property
    def K(self) -> int:
        return int(self.labels.max()) if self.labels.size else 0

    def __len__(self):
        return self.labels.size

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Partition":
        """Canonical ids 1..K ordered by each cluster's smallest member."""
        ids: dict = {}
        out = np.empty(len(labels), dtype=np.int64)
        for i, lab in enumerate(labels):
            out[i] = ids.setdefault(lab, len(ids) + 1)
        return cls(out)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.K + 1)[1:]


def _initial_costs(geom: Geometry) -> np.ndarray:
    X, r, w = geom.points, geom.masses, geom.weights
    n = X.shape[0]
    D = np.empty((n, n))
    for i in range(n):
        diff = X - X[i]
        D[i] = r[i] * r / (r[i] + r) * (diff * diff @ w)
    D = (D + D.T) / 2
    np.fill_diagonal(D, np.inf)
    return D


def ward_cluster(view, on_step: Callable | None = None) -> Dendrogram:
    """Greedy Ward agglomeration.

    Ties (costs within a relative 1e-12 of the minimum) go to the pair whose
    clusters have the lexicographically smallest smallest-member indices.
    ``on_step(active, D, masses, profiles)`` is called before each merge with
    the current cost matrix restricted to active slots.
    """
    geom = as_geometry(view)
    X = np.asarray(geom.points, dtype=float)
    n = X.shape[0]
    if n < 2:
        raise NumericError("need at least two rows to cluster")
    masses = np.array(geom.masses, dtype=float)
    profiles = X.copy()
    D = _initial_costs(geom)
    active = np.ones(n, dtype=bool)
    node_of = np.arange(n)
    size = np.ones(n, dtype=np.int64)
    nn = np.argmin(D, axis=1)
    nnd = D[np.arange(n), nn]

    node_masses = np.empty(2 * n - 1)
    node_profiles = np.empty((2 * n - 1, X.shape[1]))
    node_masses[:n] = masses
    node_profiles[:n] = X
    merges: list[Merge] = []

    for step in range(n - 1):
        idx = np.flatnonzero(active)
        if on_step is not None:
            on_step(idx, D[np.ix_(idx, idx)], masses[idx], profiles[idx])
        cmin = nnd[idx].min()
        thr = cmin + abs(cmin) * TIE_RTOL
        i = int(idx[np.argmax(nnd[idx] <= thr)])
        j = int(np.argmax(D[i] <= thr))
        cost = float(D[i, j])

        ri, rj = masses[i], masses[j]
        rk = masses[idx]
        new = ((rk + ri) * D[idx, i] + (rk + rj) * D[idx, j] - rk * cost) / (rk + ri + rj)
        D[idx, i] = new
        D[i, idx] = new
        D[i, i] = np.inf
        D[j, :] = np.inf
        D[:, j] = np.inf
        active[j] = False

        node = n + step
        mass = ri + rj
        profiles[i] = (ri * profiles[i] + rj * profiles[j]) / mass
        masses[i] = mass
        size[i] += size[j]
        a, b = int(node_of[i]), int(node_of[j])
        merges.append(Merge(left=a, right=b, cost=cost, node=node, mass=float(mass),
                            size=int(size[i])))
        node_of[i] = node
        node_masses[node] = mass
        node_profiles[node] = profiles[i]

        if step == n - 2:
            break
        idx = np.flatnonzero(active)
        stale = idx[(nn[idx] == i) | (nn[idx] == j) | (idx == i)]
        for k in stale:
            nn[k] = int(np.argmin(D[k]))
            nnd[k] = D[k, nn[k]]
        rest = idx[(nn[idx] != i) & (nn[idx] != j) & (idx != i)]
        rest = rest[np.isin(rest, stale, invert=True)]
        cand = D[rest, i]
        better = (cand < nnd[rest]) | ((cand == nnd[rest]) & (i < nn[rest]))
        nn[rest[better]] = i
        nnd[rest[better]] = cand[better]

    return Dendrogram(n_leaves=n, merges=merges, node_masses=node_masses,
                      node_profiles=node_profiles)


def cut(d: Dendrogram, K: int) -> Partition:
    """Partition obtained by undoing the last K-1 merges."""
    n = d.n_leaves
    if not (1 <= K <= n):
        raise BadK(f"K must lie in [1, {n}], got {K}")
    parent = list(range(2 * n - 1))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for mg in d.merges[: n - K]:
        parent[find(mg.left)] = mg.node
        parent[find(mg.right)] = mg.node
    return Partition.from_labels([find(i) for i in range(n)])


def inertia_gains(d: Dendrogram) -> list[tuple[int, float]]:
    """``(K, Delta(K))`` for K = 2..I; Delta(K) is the cost of going from K to K-1."""
    n = d.n_leaves
    return [(K, d.merges[n - K].cost) for K in range(2, n + 1)]


def gain_ratios(gains, k_min: int = 2, k_max: int | None = None) -> list[tuple[int, float]]:
    """``Delta(K) / Delta(K+1)`` over the scan range (inf where the denominator is 0)."""
    g = dict(gains)
    top = max(g)
    if k_max is None:
        k_max = min(10, top - 1)
    if k_min < 2 or k_max > top - 1 or k_min > k_max:
        raise BadK(f"scan range [{k_min}, {k_max}] invalid for {top} rows")
    out = []
    for K in range(k_min, k_max + 1):
        num, den = g[K], g[K + 1]
        out.append((K, num / den if den > 0 else np.inf))
    return out


def select_k(gains, k_min: int = 2, k_max: int | None = None) -> int:
    """Cluster count where the inertia gain drops most sharply.

    Returns the K maximising ``Delta(K) / Delta(K+1)``; near-ties go to the
    smaller K.
    """
    ratios = gain_ratios(gains, k_min, k_max)
    for K, ratio in ratios:
        if np.isinf(ratio):
            warnings.warn(f"zero inertia gain at K={K + 1}; returning K={K}",
                          DegenerateGainsWarning, stacklevel=2)
            return K
    best = max(ratio for _, ratio in ratios)
    for K, ratio in ratios:
        if ratio >= best * (1 - TIE_RTOL):
            return K
    raise AssertionError("unreachable")
