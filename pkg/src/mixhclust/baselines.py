"""Gower dissimilarity followed by Partitioning Around Medoids."""

from __future__ import annotations

import numpy as np
import pandas as pd

from .coding import VariableSchema, _check_table, _ordinal_levels
from .errors import BadK, ConstantContinuousColumn
from .ward import Partition


def gower(data: pd.DataFrame, schema: VariableSchema) -> np.ndarray:
    """Gower dissimilarity matrix with equal variable weights.

    Continuous and ordinal (integer level) variables contribute
    ``|x_i - x_j| / range``; nominal variables contribute simple mismatch.
    """
    _check_table(data, schema)
    n = len(data)
    total = np.zeros((n, n))
    for col in schema.columns:
        if col.kind == "nominal":
            codes = pd.factorize(data[col.name])[0]
            total += codes[:, None] != codes[None, :]
            continue
        if col.kind == "ordinal":
            x = _ordinal_levels(data, col).astype(float)
        else:
            x = pd.to_numeric(data[col.name]).to_numpy(dtype=float)
        span = x.max() - x.min()
        if span <= 0:
            if col.kind == "continuous":
                raise ConstantContinuousColumn(f"column {col.name!r} has zero range")
            continue
        total += np.abs(x[:, None] - x[None, :]) / span
    d = total / len(schema.columns)
    d = (d + d.T) / 2
    np.fill_diagonal(d, 0.0)
    return d


def _cost(d: np.ndarray, medoids) -> float:
    return float(d[:, medoids].min(axis=1).sum())


def pam_build(d: np.ndarray, K: int) -> list[int]:
    """Greedy BUILD phase: each new medoid gives the largest cost decrease."""
    medoids = [int(np.argmin(d.sum(axis=0)))]
    nearest = d[:, medoids[0]].copy()
    for _ in range(1, K):
        gain = np.maximum(nearest[:, None] - d, 0.0).sum(axis=0)
        gain[medoids] = -np.inf
        h = int(np.argmax(gain))
        medoids.append(h)
        nearest = np.minimum(nearest, d[:, h])
    return medoids


def pam(d, K: int, seed: int = 0, return_details: bool = False):
    """Partitioning Around Medoids on a dissimilarity matrix.

    BUILD then best-improvement SWAP until no swap lowers the total
    dissimilarity to the nearest medoid.  Fully deterministic (ties go to the
    lowest index); ``seed`` is accepted for interface symmetry only.
    """
    d = np.asarray(d, dtype=float)
    n = d.shape[0]
    if not (1 <= K <= n):
        raise BadK(f"K must lie in [1, {n}], got {K}")
    medoids = pam_build(d, K)
    build_cost = _cost(d, medoids)
    history = [build_cost]
    while True:
        current = history[-1]
        best = (0.0, None, None)
        for mi in range(K):
            others = medoids[:mi] + medoids[mi + 1:]
            base = d[:, others].min(axis=1) if others else np.full(n, np.inf)
            # cost with medoid mi replaced by each candidate h
            costs = np.minimum(base[:, None], d).sum(axis=0)
            costs[medoids] = np.inf
            h = int(np.argmin(costs))
            delta = costs[h] - current
            if delta < best[0] - 1e-12 * max(1.0, abs(current)):
                best = (delta, mi, h)
        if best[1] is None:
            break
        medoids[best[1]] = best[2]
        history.append(_cost(d, medoids))
    assign = np.argmin(d[:, medoids], axis=1)
    part = Partition.from_labels(assign.tolist())
    if return_details:
        return part, {"medoids": list(medoids), "build_cost": build_cost,
                      "cost_history": history, "cost": history[-1]}
    return part
