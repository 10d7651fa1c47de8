"""File formats: CSV tables, JSON schema, coded matrices, dendrograms, partitions."""

from __future__ import annotations

import csv
import json
import re
from pathlib import Path

import numpy as np
import pandas as pd

from .coding import CodedMatrix, OrdinalScale, VariableSchema
from .errors import InputError, MissingValue, SchemaMismatch
from .ward import Dendrogram, Merge, Partition


def fmt(x: float) -> str:
    """Shortest round-trip decimal."""
    return repr(float(x))


def read_schema(path, n_categories: int | None = None) -> VariableSchema:
    try:
        d = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaMismatch(f"{path}: invalid JSON ({exc})") from exc
    schema = VariableSchema.from_dict(d)
    if n_categories is not None:
        schema.n_categories = n_categories
    return schema


def write_schema(schema: VariableSchema, path) -> None:
    Path(path).write_text(json.dumps(schema.to_dict(), indent=2) + "\n", encoding="utf-8")


def read_table(path, schema: VariableSchema, drop_incomplete: bool = False) -> pd.DataFrame:
    """Read a UTF-8, comma-delimited CSV with header; empty cells are errors."""
    dtypes = {c.name: str for c in schema.columns if c.kind == "nominal"}
    try:
        df = pd.read_csv(path, dtype=dtypes, keep_default_na=False, na_values=[""],
                         encoding="utf-8")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: cannot parse CSV ({exc})") from exc
    missing = [n for n in schema.names if n not in df.columns]
    if missing:
        raise SchemaMismatch(f"{path}: columns {missing} named in the schema are absent")
    df = df[schema.names]
    na = df.isna()
    if na.to_numpy().any():
        if drop_incomplete:
            df = df[~na.any(axis=1)].reset_index(drop=True)
        else:
            r, c = np.argwhere(na.to_numpy())[0]
            raise MissingValue(
                f"{path}: empty cell at data row {r + 1}, column {df.columns[c]!r} "
                "(use --drop-incomplete to skip incomplete rows)"
            )
    for col in schema.columns:
        if col.kind != "nominal":
            try:
                df[col.name] = pd.to_numeric(df[col.name])
            except (TypeError, ValueError) as exc:
                raise InputError(f"{path}: column {col.name!r} is not numeric ({exc})") from exc
    return df


def write_table(df: pd.DataFrame, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(df.columns)
        for row in df.itertuples(index=False):
            w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


def write_coded(Z: CodedMatrix, path, meta_path=None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(Z.column_labels)
        for row in Z.entries:
            w.writerow([fmt(v) for v in row])
    if meta_path is not None:
        meta = {
            "method": Z.method,
            "has_negative": Z.has_negative,
            "blocks": {k: list(v) for k, v in Z.column_blocks.items()},
            "scales": {k: s.to_dict() for k, s in Z.scales.items()},
            "categories": {k: [str(c) for c in v] for k, v in Z.categories.items()},
        }
        Path(meta_path).write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")


def read_coded_meta(path) -> dict:
    meta = json.loads(Path(path).read_text(encoding="utf-8"))
    meta["scales"] = {k: OrdinalScale.from_dict(v) for k, v in meta["scales"].items()}
    return meta


# dendrograms


def dendrogram_to_dict(d: Dendrogram) -> dict:
    return {
        "n_leaves": d.n_leaves,
        "labels": d.labels,
        "merges": [{"left": m.left, "right": m.right, "height": m.cost, "node": m.node,
                    "mass": m.mass, "size": m.size} for m in d.merges],
    }


def dendrogram_from_dict(obj: dict) -> Dendrogram:
    try:
        merges = [Merge(int(m["left"]), int(m["right"]), float(m["height"]), int(m["node"]),
                        float(m.get("mass", float("nan"))), int(m["size"]))
                  for m in obj["merges"]]
        d = Dendrogram(n_leaves=int(obj["n_leaves"]), merges=merges, labels=obj.get("labels"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed dendrogram JSON ({exc})") from exc
    if len(merges) != d.n_leaves - 1:
        raise InputError("dendrogram must hold exactly n_leaves - 1 merges")
    return d


def write_dendrogram_json(d: Dendrogram, path) -> None:
    Path(path).write_text(json.dumps(dendrogram_to_dict(d), indent=1) + "\n", encoding="utf-8")


def read_dendrogram_json(path) -> Dendrogram:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    return dendrogram_from_dict(obj)


def to_newick(d: Dendrogram) -> str:
    """Newick string; branch length = parent height - child height."""
    n = d.n_leaves
    names = d.labels or [str(i) for i in range(n)]
    height = {i: 0.0 for i in range(n)}
    for m in d.merges:
        height[m.node] = m.cost
    text: dict[int, str] = {i: _newick_name(names[i]) for i in range(n)}
    for m in d.merges:
        parts = []
        for child in (m.left, m.right):
            parts.append(f"{text.pop(child)}:{fmt(m.cost - height[child])}")
        text[m.node] = "(" + ",".join(parts) + ")"
    if not d.merges:
        return text[0] + ";"
    return text[d.merges[-1].node] + ";"


def _newick_name(s: str) -> str:
    s = str(s)
    if re.search(r"[\s(),:;\[\]']", s):
        return "'" + s.replace("'", "''") + "'"
    return s


def newick_node_heights(text: str) -> list[float]:
    """Heights of the internal nodes of a Newick tree, in post-order.

    A node's height is the summed branch length down its leftmost path.
    """
    tokens = re.findall(r"'(?:[^']|'')*'|[(),;:]|[^(),;:]+", text.strip())
    stack: list[list] = []
    out: list[float] = []
    pending = None  # height of the subtree just closed/read
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == "(":
            stack.append([])
        elif tok in (",", ")"):
            if pending is not None:
                stack[-1].append(pending)
                pending = None
            if tok == ")":
                children = stack.pop()
                h = children[0]
                out.append(h)
                pending = h
        elif tok == ":":
            length = float(tokens[i + 1])
            pending = (pending if pending is not None else 0.0) + length
            i += 1
        elif tok == ";":
            break
        else:
            pending = 0.0
        i += 1
    return out


def write_newick(d: Dendrogram, path) -> None:
    Path(path).write_text(to_newick(d) + "\n", encoding="utf-8")


# partitions


def write_partition(p: Partition, path, row_ids=None) -> None:
    ids = range(len(p)) if row_ids is None else row_ids
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row_id", "cluster"])
        for r, lab in zip(ids, p.labels.tolist()):
            w.writerow([r, lab])


def read_partition(path) -> np.ndarray:
    try:
        df = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise InputError(f"{path}: cannot parse partition CSV ({exc})") from exc
    if "cluster" not in df.columns:
        raise InputError(f"{path}: partition CSV needs a 'cluster' column")
    if "row_id" in df.columns:
        df = df.sort_values("row_id", kind="stable")
    return df["cluster"].to_numpy()
