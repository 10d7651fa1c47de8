"""Synthetic mixed-type data with controlled pairwise cluster overlap.

Clusters are spherical Gaussians with common standard deviation ``sigma``
whose centres sit on a regular simplex, so every pair of clusters is at the
same distance ``delta``.  For two equal-weight spherical Gaussians the sum of
the two misclassification probabilities is ``2 Phi(-delta / (2 sigma))``,
which is inverted to get ``delta`` from the overlap target.  A share of the
variables is then cut at empirical quantiles into ``cat_levels`` classes.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
import pandas as pd
from scipy.stats import norm

from .coding import ColumnSpec, VariableSchema
from .errors import BadOmega, InfeasibleDesign
from .evaluation import ari
from .pipeline import METHOD_NAMES, run_method
from .ward import Partition

DENSITIES = ("equal", "one10", "one60")
FACTOR_COLUMNS = ["K", "N", "density", "overlap", "cat_fraction"]


@dataclass(frozen=True)
class SimDesign:
    K: int = 4
    N: int = 500
    density: str = "equal"
    overlap: float = 0.01
    cat_fraction: float = 0.5
    dims: int = 10
    cat_levels: int = 4
    seed: int = 0
    sigma: float = 1.0
    categorical_kind: str = "nominal"

    @property
    def n_categorical(self) -> int:
        return int(round(self.cat_fraction * self.dims))

    def factors(self) -> dict:
        return {"K": self.K, "N": self.N, "density": self.density,
                "overlap": self.overlap, "cat_fraction": self.cat_fraction}


@dataclass
class SimDataset:
    table: pd.DataFrame
    schema: VariableSchema
    true_labels: Partition
    design: SimDesign
    meta: dict = field(default_factory=dict)


def overlap_to_separation(omega: float, sigma: float = 1.0) -> float:
    """Centre distance giving pairwise overlap ``omega``."""
    if not (0.0 < omega < 1.0):
        raise BadOmega(f"overlap must lie in (0, 1), got {omega}")
    if sigma <= 0:
        raise BadOmega(f"sigma must be positive, got {sigma}")
    return float(-2.0 * sigma * norm.ppf(omega / 2.0))


def cluster_sizes(N: int, K: int, density: str) -> list[int]:
    if K < 1 or N < K:
        raise InfeasibleDesign(f"cannot split {N} rows into {K} clusters")
    if density == "equal":
        first, rest_k, rest_n = None, K, N
    elif density in ("one10", "one60"):
        share = 0.1 if density == "one10" else 0.6
        first = int(round(share * N))
        rest_k, rest_n = K - 1, N - first
    else:
        raise InfeasibleDesign(f"unknown density rule {density!r}")
    q, r = divmod(rest_n, rest_k) if rest_k else (0, 0)
    rest = [q + (1 if i < r else 0) for i in range(rest_k)]
    sizes = rest if first is None else [first] + rest
    if K == 1:
        sizes = [N]
    if min(sizes) < 1 or sum(sizes) != N:
        raise InfeasibleDesign(f"density rule {density!r} leaves an empty cluster")
    return sizes


def simplex_centres(K: int, dims: int, delta: float, rng: np.random.Generator) -> np.ndarray:
    """K points in ``dims`` dimensions, all pairwise distances equal to ``delta``."""
    if K - 1 > dims:
        raise InfeasibleDesign(f"{K} equidistant centres need at least {K - 1} dimensions")
    centred = np.eye(K) - 1.0 / K
    u, s, _ = np.linalg.svd(centred)
    coords = (u * s)[:, : K - 1] * (delta / np.sqrt(2.0))
    out = np.zeros((K, dims))
    out[:, : K - 1] = coords
    q, r = np.linalg.qr(rng.standard_normal((dims, dims)))
    q *= np.sign(np.diag(r))
    return out @ q.T


def quantile_classes(x: np.ndarray, c: int) -> np.ndarray:
    """Classes 1..c cut at the 100/c % empirical quantiles (by rank)."""
    ranks = np.argsort(np.argsort(x, kind="stable"), kind="stable")
    return (ranks * c) // x.size + 1


def generate(design: SimDesign) -> SimDataset:
    rng = np.random.default_rng(design.seed)
    sizes = cluster_sizes(design.N, design.K, design.density)
    delta = overlap_to_separation(design.overlap, design.sigma)
    centres = simplex_centres(design.K, design.dims, delta, rng)
    labels = np.repeat(np.arange(design.K), sizes)
    order = rng.permutation(design.N)
    labels = labels[order]
    X = centres[labels] + design.sigma * rng.standard_normal((design.N, design.dims))

    n_cat = design.n_categorical
    cols, specs = {}, []
    for j in range(design.dims):
        name = f"v{j + 1}"
        if j < n_cat:
            cols[name] = quantile_classes(X[:, j], design.cat_levels)
            kind = design.categorical_kind
            specs.append(ColumnSpec(name, kind, levels=design.cat_levels if kind == "ordinal" else None))
        else:
            cols[name] = X[:, j]
            specs.append(ColumnSpec(name, "continuous"))
    meta = {"delta": delta, "sizes": sizes, "centres": centres.tolist(),
            "generator": "spherical gaussian, simplex centres (closed-form overlap)"}
    return SimDataset(pd.DataFrame(cols), VariableSchema(specs), Partition.from_labels(labels + 1),
                      design, meta)


def _replicate_seed(master: int, scenario: int, replicate: int) -> int:
    ss = np.random.SeedSequence([master, scenario, replicate])
    return int(ss.generate_state(1, dtype=np.uint32)[0])


def _run_one(job):
    scen, design, rep, methods, master, n_categories = job
    seed = _replicate_seed(master, scen, rep)
    data = generate(SimDesign(**{**asdict(design), "seed": seed}))
    rows, parts = [], {}
    for method in methods:
        part = run_method(method, data.table, data.schema, design.K, seed=seed,
                          n_categories=n_categories)
        parts[method] = part
        rows.append({**design.factors(), "method": method, "replicate": rep,
                     "ari": ari(part, data.true_labels)})
    return scen, rep, rows, parts


def run_grid(designs, methods=METHOD_NAMES, replicates: int = 10, master_seed: int = 0,
             n_categories: int = 3, workers: int = 1, return_partitions: bool = False):
    """ARI against the true labels for every (scenario, replicate, method).

    Each replicate draws its data from a seed derived from
    ``(master_seed, scenario index, replicate index)``, so the table does not
    depend on ``workers``.
    """
    methods = list(methods)
    for m in methods:
        if m not in METHOD_NAMES:
            raise InfeasibleDesign(f"unknown method {m!r}")
    jobs = [(s, d, r, methods, master_seed, n_categories)
            for s, d in enumerate(designs) for r in range(replicates)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    rows = [row for _, _, rs, _ in results for row in rs]
    table = pd.DataFrame(rows, columns=FACTOR_COLUMNS + ["method", "replicate", "ari"])
    if return_partitions:
        return table, {(s, r): parts for s, r, _, parts in results}
    return table


def method_agreement(partitions: dict, methods) -> pd.DataFrame:
    """Mean pairwise ARI between methods over all runs."""
    methods = list(methods)
    M = np.eye(len(methods))
    for (a, ma), (b, mb) in itertools.combinations(enumerate(methods), 2):
        vals = [ari(p[ma], p[mb]) for p in partitions.values()]
        M[a, b] = M[b, a] = float(np.mean(vals))
    return pd.DataFrame(M, index=methods, columns=methods)


def expand_grid(K=(4,), N=(500,), density=("equal",), overlap=(0.01,),
                cat_fraction=(0.5,), **extra) -> list[SimDesign]:
    return [SimDesign(K=k, N=n, density=d, overlap=o, cat_fraction=c, **extra)
            for k, n, d, o, c in itertools.product(K, N, density, overlap, cat_fraction)]
