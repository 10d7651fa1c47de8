"""Coding + clustering in one call, and the named comparison methods."""

from __future__ import annotations

from dataclasses import dataclass

import pandas as pd

from .baselines import gower, pam
from .coding import DEFAULT_N_CATEGORIES, CodedMatrix, VariableSchema, build_coded_matrix
from .correspondence import correspondence_view
from .errors import InputError
from .ward import Dendrogram, Geometry, Partition, cut, ward_cluster

METHOD_NAMES = ("mixed-hierarchical-B", "mixed-hierarchical-T", "gower-pam")


@dataclass
class ClusterRun:
    coded: CodedMatrix
    dendrogram: Dendrogram
    geometry: str


def resolve_metric(coding: str, metric: str = "auto") -> str:
    if metric == "auto":
        return "euclidean" if coding == "escofier" else "chi2"
    if metric not in ("chi2", "euclidean"):
        raise InputError(f"unknown metric {metric!r}")
    if coding == "escofier" and metric == "chi2":
        raise InputError("escofier coding can be negative; use the euclidean metric")
    return metric


def hierarchical(data: pd.DataFrame, schema: VariableSchema, coding: str = "barycentric",
                 prune_empty_columns: bool = False, metric: str = "auto") -> ClusterRun:
    """Code the table and build the Ward hierarchy.

    Barycentric and triangular blocks are clustered under the chi-square
    metric by default.  Escofier blocks can be negative, so they go through
    plain Euclidean Ward on the coded rows.
    """
    metric = resolve_metric(coding, metric)
    Z = build_coded_matrix(data, schema, coding)
    if metric == "euclidean":
        geom = Geometry.euclidean(Z.entries)
        return ClusterRun(Z, ward_cluster(geom), "euclidean")
    view = correspondence_view(Z, prune_empty_columns=prune_empty_columns)
    return ClusterRun(Z, ward_cluster(view), "chi-square")


def run_method(method: str, data: pd.DataFrame, schema: VariableSchema, K: int,
               seed: int = 0, n_categories: int = DEFAULT_N_CATEGORIES) -> Partition:
    schema = VariableSchema(schema.columns, n_categories=n_categories)
    if method == "mixed-hierarchical-B":
        return cut(hierarchical(data, schema, "barycentric").dendrogram, K)
    if method == "mixed-hierarchical-T":
        return cut(hierarchical(data, schema, "triangular").dendrogram, K)
    if method == "gower-pam":
        return pam(gower(data, schema), K, seed=seed)
    raise InputError(f"unknown method {method!r}; choose from {METHOD_NAMES}")
