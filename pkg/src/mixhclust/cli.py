"""Command line entry point.

Verbs: code, cluster, cut, selectk, ari, simulate, bench.
Exit codes: 0 success, 2 input error, 3 numeric or infeasibility error.
"""

from __future__ import annotations

import argparse
import json
import logging
import platform
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from . import __version__
from . import io as fio
from .coding import METHODS, build_coded_matrix
from .errors import InputError, NumericError
from .evaluation import ari, cluster_profile
from .pipeline import METHOD_NAMES, hierarchical, resolve_metric
from .simgen import DENSITIES, SimDesign, expand_grid, generate, method_agreement, run_grid
from .ward import cut, gain_ratios, inertia_gains, select_k

log = logging.getLogger("mixhclust")


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    schema: str | None = None
    coding: str = "barycentric"
    metric: str = "auto"
    n_categories: int = 3
    k: int | None = None
    k_min: int = 2
    k_max: int | None = None
    out: str = "."
    seed: int = 0
    drop_incomplete: bool = False
    prune_empty_columns: bool = False

    def __post_init__(self):
        if self.coding not in METHODS:
            raise InputError(f"unknown coding {self.coding!r}")
        resolve_metric(self.coding, self.metric)
        if self.n_categories < 2:
            raise InputError("--n-categories must be >= 2")


def _versions() -> dict:
    import matplotlib
    import scipy

    return {"mixhclust": __version__, "python": platform.python_version(),
            "numpy": np.__version__, "scipy": scipy.__version__,
            "pandas": pd.__version__, "matplotlib": matplotlib.__version__}


def write_manifest(out: Path, config: dict, outputs: list[str], seeds=None) -> None:
    manifest = {"config": config, "versions": _versions(), "seeds": seeds or {},
                "outputs": sorted(outputs)}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                                       encoding="utf-8")


def _out_dir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _need(value, flag):
    if value is None:
        raise InputError(f"{flag} is required")
    return value


def _load(cfg: RunConfig):
    schema = fio.read_schema(_need(cfg.schema, "--schema"), n_categories=cfg.n_categories)
    data = fio.read_table(_need(cfg.input, "--input"), schema, cfg.drop_incomplete)
    return data, schema


# --------------------------------------------------------------------------


def cmd_code(cfg: RunConfig) -> int:
    data, schema = _load(cfg)
    Z = build_coded_matrix(data, schema, cfg.coding)
    out = _out_dir(cfg.out)
    fio.write_coded(Z, out / "coded.csv", out / "coded.meta.json")
    write_manifest(out, asdict(cfg), ["coded.csv", "coded.meta.json"])
    log.info("coded %d rows into %d columns", *Z.shape)
    return 0


def _ratio_table(gains, k_min, k_max) -> pd.DataFrame:
    g = dict(gains)
    rows = [{"K": K, "gain": g[K], "next_gain": g[K + 1], "ratio": r}
            for K, r in gain_ratios(gains, k_min, k_max)]
    return pd.DataFrame(rows, columns=["K", "gain", "next_gain", "ratio"])


def _default_k_max(cfg_k_max, n):
    return cfg_k_max if cfg_k_max is not None else min(10, n - 1)


def cmd_cluster(cfg: RunConfig) -> int:
    from .plots import plot_dendrogram, plot_gains

    data, schema = _load(cfg)
    run = hierarchical(data, schema, cfg.coding, cfg.prune_empty_columns, cfg.metric)
    d = run.dendrogram
    out = _out_dir(cfg.out)
    outputs = ["dendrogram.json", "dendrogram.nwk", "partition.csv", "dendrogram.svg",
               "gains.svg", "profile.json"]
    gains = inertia_gains(d)
    K = cfg.k
    if K is None:
        if d.n_leaves < 3:
            K = 1
        else:
            k_max = _default_k_max(cfg.k_max, d.n_leaves)
            K = select_k(gains, cfg.k_min, k_max)
            fio.write_table(_ratio_table(gains, cfg.k_min, k_max), out / "selectk.csv")
            outputs.append("selectk.csv")
            print(f"selected K = {K}")
    part = cut(d, K)
    fio.write_dendrogram_json(d, out / "dendrogram.json")
    fio.write_newick(d, out / "dendrogram.nwk")
    fio.write_partition(part, out / "partition.csv")
    profile = cluster_profile(part, data, schema)
    (out / "profile.json").write_text(json.dumps(profile, indent=1) + "\n", encoding="utf-8")
    plot_dendrogram(d, out / "dendrogram.svg", K if K > 1 else None)
    plot_gains(d, out / "gains.svg")
    write_manifest(out, {**asdict(cfg), "geometry": run.geometry, "k_used": K}, outputs)
    return 0


def cmd_cut(cfg: RunConfig) -> int:
    d = fio.read_dendrogram_json(_need(cfg.input, "--input"))
    part = cut(d, _need(cfg.k, "--k"))
    out = _out_dir(cfg.out)
    fio.write_partition(part, out / "partition.csv")
    write_manifest(out, asdict(cfg), ["partition.csv"])
    return 0


def cmd_selectk(cfg: RunConfig) -> int:
    d = fio.read_dendrogram_json(_need(cfg.input, "--input"))
    gains = inertia_gains(d)
    k_max = _default_k_max(cfg.k_max, d.n_leaves)
    K = select_k(gains, cfg.k_min, k_max)
    table = _ratio_table(gains, cfg.k_min, k_max)
    print(table.to_string(index=False))
    print(f"selected K = {K}")
    out = _out_dir(cfg.out)
    fio.write_table(table, out / "selectk.csv")
    write_manifest(out, {**asdict(cfg), "k_selected": K}, ["selectk.csv"])
    return 0


def cmd_ari(cfg: RunConfig, reference: str | None) -> int:
    a = fio.read_partition(_need(cfg.input, "--input"))
    b = fio.read_partition(_need(reference, "--reference"))
    value, degenerate = ari(a, b, return_flag=True)
    print(fio.fmt(value))
    if degenerate:
        log.warning("degenerate partitions: ARI denominator is zero")
    return 0


def cmd_simulate(cfg: RunConfig, design: SimDesign) -> int:
    ds = generate(design)
    out = _out_dir(cfg.out)
    fio.write_table(ds.table, out / "data.csv")
    fio.write_schema(ds.schema, out / "schema.json")
    fio.write_partition(ds.true_labels, out / "truth.csv")
    write_manifest(out, {**asdict(cfg), "design": asdict(design), "delta": ds.meta["delta"]},
                   ["data.csv", "schema.json", "truth.csv"], seeds={"design": design.seed})
    return 0


def cmd_bench(cfg: RunConfig, grid: dict, methods, replicates: int, workers: int) -> int:
    designs = expand_grid(**grid)
    table, parts = run_grid(designs, methods, replicates, cfg.seed, cfg.n_categories,
                            workers=workers, return_partitions=True)
    out = _out_dir(cfg.out)
    fio.write_table(table, out / "ari.csv")
    agree = method_agreement(parts, methods)
    agree["mean_ari"] = [table.loc[table.method == m, "ari"].mean() for m in methods]
    agree.insert(0, "method", agree.index)
    fio.write_table(agree.reset_index(drop=True), out / "agreement.csv")
    print(agree.round(3).to_string(index=False))
    write_manifest(out, {**asdict(cfg), "grid": grid, "methods": list(methods),
                         "replicates": replicates},
                   ["ari.csv", "agreement.csv"], seeds={"master": cfg.seed})
    return 0


# --------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, data=True):
    p.add_argument("--input")
    p.add_argument("--out", default=".")
    p.add_argument("--seed", type=int, default=0)
    if data:
        p.add_argument("--schema")
        p.add_argument("--coding", choices=METHODS, default="barycentric")
        p.add_argument("--metric", choices=("auto", "chi2", "euclidean"), default="auto")
        p.add_argument("--n-categories", type=int, default=3)
        p.add_argument("--drop-incomplete", action="store_true")
        p.add_argument("--prune-empty-columns", action="store_true")


def _k_flags(p):
    p.add_argument("--k", type=int)
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mixhclust", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("code", help="write the coded matrix and its metadata"))
    p = sub.add_parser("cluster", help="Ward hierarchy, partition and plots")
    _common(p)
    _k_flags(p)
    p = sub.add_parser("cut", help="cut a dendrogram JSON into K clusters")
    _common(p, data=False)
    _k_flags(p)
    p = sub.add_parser("selectk", help="choose K from a dendrogram JSON")
    _common(p, data=False)
    _k_flags(p)
    p = sub.add_parser("ari", help="adjusted Rand index between two partition CSVs")
    _common(p, data=False)
    p.add_argument("--reference")

    for name in ("simulate", "bench"):
        p = sub.add_parser(name, help="generate synthetic data" if name == "simulate"
                           else "benchmark methods over a simulation grid")
        _common(p, data=False)
        nargs = "+" if name == "bench" else None
        p.add_argument("--clusters", type=int, nargs=nargs, default=[4] if nargs else 4)
        p.add_argument("--rows", type=int, nargs=nargs, default=[500] if nargs else 500)
        p.add_argument("--density", choices=DENSITIES, nargs=nargs,
                       default=["equal"] if nargs else "equal")
        p.add_argument("--overlap", type=float, nargs=nargs, default=[0.01] if nargs else 0.01)
        p.add_argument("--cat-fraction", type=float, nargs=nargs,
                       default=[0.5] if nargs else 0.5)
        p.add_argument("--dims", type=int, default=10)
        p.add_argument("--cat-levels", type=int, default=4)
        p.add_argument("--categorical-kind", choices=("nominal", "ordinal"), default="nominal")
        if name == "bench":
            p.add_argument("--methods", nargs="+", choices=METHOD_NAMES,
                           default=list(METHOD_NAMES))
            p.add_argument("--replicates", type=int, default=10)
            p.add_argument("--workers", type=int, default=1)
            p.add_argument("--n-categories", type=int, default=3)
    return ap


def _config(args) -> RunConfig:
    keys = RunConfig.__dataclass_fields__.keys()
    return RunConfig(**{k: v for k, v in vars(args).items() if k in keys})


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    cfg = _config(args)
    cmd = args.command
    if cmd == "code":
        return cmd_code(cfg)
    if cmd == "cluster":
        return cmd_cluster(cfg)
    if cmd == "cut":
        return cmd_cut(cfg)
    if cmd == "selectk":
        return cmd_selectk(cfg)
    if cmd == "ari":
        return cmd_ari(cfg, args.reference)
    if cmd == "simulate":
        design = SimDesign(K=args.clusters, N=args.rows, density=args.density,
                           overlap=args.overlap, cat_fraction=args.cat_fraction,
                           dims=args.dims, cat_levels=args.cat_levels, seed=args.seed,
                           categorical_kind=args.categorical_kind)
        return cmd_simulate(cfg, design)
    grid = {"K": args.clusters, "N": args.rows, "density": args.density,
            "overlap": args.overlap, "cat_fraction": args.cat_fraction, "dims": args.dims,
            "cat_levels": args.cat_levels, "categorical_kind": args.categorical_kind}
    return cmd_bench(cfg, grid, args.methods, args.replicates, args.workers)


def main(argv=None) -> int:
    try:
        return run(argv)
    except (InputError, FileNotFoundError, IsADirectoryError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
