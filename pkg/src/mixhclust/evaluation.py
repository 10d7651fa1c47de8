"""Partition agreement and cluster description."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from .coding import VariableSchema
from .errors import LengthMismatch
from .ward import Partition


@dataclass(frozen=True)
class ContingencyTable:
    counts: np.ndarray

    @property
    def a(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def b(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def n(self) -> int:
        return int(self.counts.sum())


def _labels(p) -> np.ndarray:
    return p.labels if isinstance(p, Partition) else np.asarray(p)


def contingency(p, q) -> ContingencyTable:
    x, y = _labels(p), _labels(q)
    if x.shape != y.shape:
        raise LengthMismatch(f"partitions have lengths {x.size} and {y.size}")
    _, xi = np.unique(x, return_inverse=True)
    _, yi = np.unique(y, return_inverse=True)
    counts = np.zeros((xi.max(initial=-1) + 1, yi.max(initial=-1) + 1), dtype=np.int64)
    np.add.at(counts, (xi, yi), 1)
    return ContingencyTable(counts)


def _pairs(v) -> int:
    # exact sum of C(v, 2) over the entries, in Python integers
    return sum(int(x) * (int(x) - 1) // 2 for x in np.ravel(v))


def ari(p, q, return_flag: bool = False):
    """Hubert-Arabie adjusted Rand index.

    Pair counts are combined in exact integer arithmetic (the expression is
    multiplied through by ``C(n, 2)``), so the only rounding is the final
    division.  When the chance-corrected denominator vanishes (both partitions
    trivial) the result is 1 for identical partitions and 0 otherwise;
    ``return_flag`` exposes whether that fallback was used.
    """
    t = contingency(p, q)
    index = _pairs(t.counts)
    sa, sb = _pairs(t.a), _pairs(t.b)
    total = _pairs([t.n])
    num = 2 * (index * total - sa * sb)
    den = (sa + sb) * total - 2 * sa * sb
    degenerate = den == 0
    if degenerate:
        nz = t.counts > 0
        same = bool((nz.sum(axis=0) == 1).all() and (nz.sum(axis=1) == 1).all())
        value = 1.0 if same else 0.0
    else:
        value = num / den
    return (value, degenerate) if return_flag else value


def cluster_profile(p, data: pd.DataFrame, schema: VariableSchema) -> dict:
    """Per-cluster size/share plus mean or category-frequency comparisons."""
    labels = _labels(p)
    if labels.size != len(data):
        raise LengthMismatch("partition and table lengths differ")
    n = labels.size
    out = {}
    for k in np.unique(labels):
        mask = labels == k
        entry = {"size": int(mask.sum()), "share": float(mask.sum() / n), "variables": {}}
        for col in schema.columns:
            x = data[col.name]
            if col.kind == "continuous":
                entry["variables"][col.name] = {
                    "cluster_mean": float(x[mask].mean()),
                    "overall_mean": float(x.mean()),
                }
            else:
                within = x[mask].value_counts(normalize=True)
                overall = x.value_counts(normalize=True)
                entry["variables"][col.name] = {
                    "cluster_freq": {str(c): float(within.get(c, 0.0)) for c in overall.index},
                    "overall_freq": {str(c): float(v) for c, v in overall.items()},
                }
        out[int(k) if np.issubdtype(type(k), np.integer) else k] = entry
    return out
