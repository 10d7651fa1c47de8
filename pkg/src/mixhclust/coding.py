"""Recoding of mixed-type columns into fuzzy / dummy blocks.

Continuous columns go through two steps:

1. ``discretize`` maps the column onto an m-point integer scale whose step is
   the smallest gap ``d0`` between successive distinct values, so two distinct
   observations never share a level.
2. ``barycentric_tuple`` spreads a unit mass placed at level ``l`` over ``n``
   ordered categories.  The range (1/2, m + 1/2) is cut into ``n`` equal
   intervals with bounds ``B_0 .. B_n`` and midpoints ``A_1 .. A_n``.  The unit
   mass is first split between the two bounds enclosing ``l`` (lever rule).
   A mass sitting on an inner bound and moving away from ``l`` leaves 2/3 on
   the adjacent midpoint (the one on the ``l`` side) and passes 1/3 on to the
   next bound; mass reaching ``B_0`` or ``B_n`` is deposited in the terminal
   category.

Ordinal (rating scale) columns skip step 1.  Nominal columns are dummy coded.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

import numpy as np
import pandas as pd

from .errors import (
    BadTupleWidth,
    ConstantColumn,
    DegenerateHinges,
    EmptyColumn,
    LevelOutOfRange,
    MissingValue,
    NoPreimage,
    OutOfHingeRange,
    SchemaMismatch,
    ZeroVarianceBlockWarning,
)

FLOOR_GUARD = 1e-9
DEFAULT_N_CATEGORIES = 3

Kind = Literal["nominal", "ordinal", "continuous"]
Method = Literal["barycentric", "triangular", "escofier"]
KINDS = ("nominal", "ordinal", "continuous")
METHODS = ("barycentric", "triangular", "escofier")


def _guarded_floor(ratio):
    """Integer part, snapping up values a relative 1e-9 short of the next integer.

    The snap is limited to one step and to values within half a step of the
    boundary, so very large ratios are not shifted by whole levels.
    """
    ratio = np.asarray(ratio, dtype=float)
    whole = np.floor(ratio)
    nudged = np.floor(ratio * (1.0 + FLOOR_GUARD))
    snap = (nudged > whole) & (whole + 1 - ratio < 0.5)
    return np.where(snap, whole + 1, whole)


@dataclass(frozen=True)
class OrdinalScale:
    """Step-1 artefacts for one continuous column."""

    mu: float
    max: float
    d0: float
    m: int

    def level(self, x):
        """Integer level ``T(x)`` on the m-point scale (vectorised)."""
        ratio = (np.asarray(x, dtype=float) - self.mu) / self.d0
        whole = _guarded_floor(ratio)
        if self.m < 2**62:
            return np.clip(whole.astype(np.int64) + 1, 1, self.m)
        # m is never materialised, so arbitrarily large scales are fine
        flat = [min(max(int(v) + 1, 1), self.m) for v in np.ravel(whole)]
        return np.array(flat, dtype=object).reshape(np.shape(whole))

    def to_dict(self) -> dict:
        return {"mu": self.mu, "max": self.max, "d0": self.d0, "m": self.m}

    @classmethod
    def from_dict(cls, d: dict) -> "OrdinalScale":
        return cls(mu=float(d["mu"]), max=float(d["max"]), d0=float(d["d0"]), m=int(d["m"]))


@dataclass(frozen=True)
class BarycentricTuple:
    values: tuple[float, ...]
    level: int
    m: int

    @property
    def n(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)


# --------------------------------------------------------------------------
# Step 1


def discretize(column: Sequence[float]) -> tuple[np.ndarray, OrdinalScale]:
    """Map a continuous column onto its m-point ordinal scale.

    Returns the integer levels (1-based) and the scale parameters.
    """
    x = np.asarray(column, dtype=float)
    if x.size == 0:
        raise EmptyColumn("cannot discretize an empty column")
    if not np.all(np.isfinite(x)):
        raise MissingValue("column contains NaN or infinite values")
    distinct = np.unique(x)
    if distinct.size < 2:
        raise ConstantColumn(
            "column is constant; it carries no clustering information, exclude it"
        )
    mu, top = float(distinct[0]), float(distinct[-1])
    d0 = float(np.min(np.diff(distinct)))
    ratio = (top - mu) / d0
    m = int(_guarded_floor(ratio)) + 1
    scale = OrdinalScale(mu=mu, max=top, d0=d0, m=m)
    return scale.level(x), scale


def decode_ordinal(level: int, scale: OrdinalScale) -> tuple[float, float]:
    """Interval ``[lo, hi)`` of original values mapped to ``level``."""
    _check_level(level, scale.m)
    return scale.mu + (level - 1) * scale.d0, scale.mu + level * scale.d0


# --------------------------------------------------------------------------
# Step 2


def _check_level(level, m):
    if not (1 <= level <= m):
        raise LevelOutOfRange(f"level {level} outside [1, {m}]")


def _push_right(y: list, j: int, mass: float) -> None:
    # mass on bound B_j travelling towards B_n
    n = len(y)
    while j < n:
        y[j - 1] += mass * (2.0 / 3.0)
        mass = mass / 3.0
        j += 1
    y[n - 1] += mass


def _push_left(y: list, j: int, mass: float) -> None:
    # mirror image of _push_right
    while j > 0:
        y[j] += mass * (2.0 / 3.0)
        mass = mass / 3.0
        j -= 1
    y[0] += mass


def _tuple_values(level: int, m: int, n: int) -> list[float]:
    # Position of the level in interval units is t = (2l - 1) n / (2m); keep
    # numerator and denominator integral so the interval test is exact.
    num = (2 * level - 1) * n
    den = 2 * m
    y = [0.0] * n
    k, rem = divmod(num, den)
    if rem == 0:
        # level sits exactly on the inner bound B_k
        _push_right(y, k + 1, 0.5)
        _push_left(y, k - 1, 0.5)
        return y
    upper = rem / den
    lower = (den - rem) / den
    _push_right(y, k + 1, upper)
    _push_left(y, k, lower)
    if 1 <= k <= n - 2:
        y[k] = 2.0 / 3.0
    return y


def barycentric_tuple(level: int, m: int, n: int) -> BarycentricTuple:
    """Barycentric n-tuple for ``level`` on an m-point scale."""
    if n < 2:
        raise BadTupleWidth(f"tuple width must be >= 2, got {n}")
    if m < 1:
        raise LevelOutOfRange(f"scale size must be >= 1, got {m}")
    level = int(level)
    _check_level(level, m)
    return BarycentricTuple(tuple(_tuple_values(level, m, n)), level, m)


def _bound_levels(m: int, n: int) -> list[int]:
    out = []
    for k in range(1, n):
        num = 2 * k * m + n
        if num % (2 * n) == 0:
            out.append(num // (2 * n))
    return out


def decode_tuple(values, m: int | None = None, tol: float = 1e-9) -> int:
    """Recover the level that produced a barycentric tuple.

    The level is first estimated from the dominant element and the far tail,
    then confirmed by re-encoding; if that fails every level is tried.  A
    match means max absolute deviation <= ``tol``.
    """
    if isinstance(values, BarycentricTuple):
        m = values.m if m is None else m
        values = values.values
    if m is None:
        raise NoPreimage("scale size m is required to decode")
    y = np.asarray(values, dtype=float)
    n = y.size
    if n < 2:
        raise BadTupleWidth(f"tuple width must be >= 2, got {n}")

    def dev(level):
        return float(np.max(np.abs(np.asarray(_tuple_values(level, m, n)) - y)))

    d = int(np.argmax(y))
    if d < n - 1:
        t = d + y[-1] * 3.0 ** (n - 1 - d)
    else:
        t = d + 1 - y[0] * 3.0**d
    guess = int(round(t * m / n + 0.5))
    if 1 <= guess <= m and dev(guess) <= tol:
        return guess
    candidates = {c for c in (guess - 1, guess, guess + 1) if 1 <= c <= m}
    candidates.update(_bound_levels(m, n))
    best = min(sorted(candidates), key=dev, default=None)
    if best is not None and dev(best) <= tol:
        return best
    devs = [dev(level) for level in range(1, m + 1)]
    best = int(np.argmin(devs)) + 1
    if devs[best - 1] > tol:
        raise NoPreimage(
            f"no level of a {m}-point scale matches the tuple (closest {best}, "
            f"deviation {devs[best - 1]:.3g} > {tol:g})"
        )
    return best


def encode_ordinal(levels: Iterable[int], m: int, n: int) -> np.ndarray:
    """Row-wise barycentric coding of integer levels; shape (len(levels), n)."""
    lev = np.asarray(list(levels) if not isinstance(levels, np.ndarray) else levels)
    if lev.size and (lev.min() < 1 or lev.max() > m):
        bad = lev[(lev < 1) | (lev > m)][0]
        raise LevelOutOfRange(f"level {bad} outside [1, {m}]")
    if n < 2:
        raise BadTupleWidth(f"tuple width must be >= 2, got {n}")
    out = np.empty((lev.size, n))
    cache: dict[int, list[float]] = {}
    for i, level in enumerate(lev.tolist()):
        row = cache.get(level)
        if row is None:
            row = cache[level] = _tuple_values(int(level), m, n)
        out[i] = row
    return out


def encode_nominal(column: Sequence) -> tuple[np.ndarray, list]:
    """Dummy coding, categories in order of first appearance."""
    values = list(column)
    if not values:
        raise EmptyColumn("cannot encode an empty column")
    cats = list(dict.fromkeys(values))
    index = {c: j for j, c in enumerate(cats)}
    block = np.zeros((len(values), len(cats)))
    block[np.arange(len(values)), [index[v] for v in values]] = 1.0
    if len(cats) == 1:
        warnings.warn("single-category column gives a zero-variance block",
                      ZeroVarianceBlockWarning, stacklevel=2)
    return block, cats


# --------------------------------------------------------------------------
# Alternative fuzzy codings


def triangular_tuple(x: float, hinges: Sequence[float]) -> np.ndarray:
    """Triangular membership of ``x`` for the given increasing hinge points."""
    h = np.asarray(hinges, dtype=float)
    if h.size < 2 or np.any(np.diff(h) <= 0):
        raise DegenerateHinges(f"hinges must be strictly increasing, got {list(h)}")
    if not (h[0] <= x <= h[-1]):
        raise OutOfHingeRange(f"{x} outside [{h[0]}, {h[-1]}]")
    out = np.zeros(h.size)
    j = int(np.searchsorted(h, x, side="right")) - 1
    if j >= h.size - 1:
        out[-1] = 1.0
        return out
    w = (x - h[j]) / (h[j + 1] - h[j])
    out[j] = 1.0 - w
    out[j + 1] = w
    return out


def triangular_hinges(column: Sequence[float], n: int) -> np.ndarray:
    """Hinges at evenly spaced empirical quantiles (min, median, max for n=3)."""
    x = np.asarray(column, dtype=float)
    lo, hi = float(x.min()), float(x.max())
    if hi <= lo:
        raise ConstantColumn("column is constant; triangular coding undefined")
    h = np.quantile(x, np.linspace(0.0, 1.0, n))
    if np.any(np.diff(h) <= 0):
        h = np.linspace(lo, hi, n)
    return h


def triangular_block(column: Sequence[float], n: int) -> np.ndarray:
    x = np.asarray(column, dtype=float)
    h = triangular_hinges(x, n)
    j = np.clip(np.searchsorted(h, x, side="right") - 1, 0, n - 2)
    w = (x - h[j]) / (h[j + 1] - h[j])
    out = np.zeros((x.size, n))
    rows = np.arange(x.size)
    out[rows, j] = 1.0 - w
    out[rows, j + 1] = w
    return out


def escofier_pair(column: Sequence[float]) -> np.ndarray:
    """Bipolar coding ``((1 + z)/2, (1 - z)/2)`` of the standardised column.

    Entries are negative whenever ``|z| > 1``.
    """
    x = np.asarray(column, dtype=float)
    sd = x.std()
    if x.size == 0 or sd == 0:
        raise ConstantColumn("escofier coding needs a column with positive variance")
    z = (x - x.mean()) / sd
    return np.column_stack([(1 + z) / 2, (1 - z) / 2])


# --------------------------------------------------------------------------
# Schema and full matrix


@dataclass
class ColumnSpec:
    name: str
    kind: Kind
    levels: int | None = None
    n_categories: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaMismatch(f"column {self.name!r}: unknown kind {self.kind!r}")
        if self.kind == "ordinal" and (self.levels is None or self.levels < 1):
            raise SchemaMismatch(f"ordinal column {self.name!r} needs 'levels'")
        if self.n_categories is not None and self.n_categories < 2:
            raise SchemaMismatch(f"column {self.name!r}: n_categories must be >= 2")


@dataclass
class VariableSchema:
    columns: list[ColumnSpec]
    n_categories: int = DEFAULT_N_CATEGORIES

    def __post_init__(self):
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise SchemaMismatch("duplicate column names in schema")

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.columns]

    def width(self, col: ColumnSpec) -> int:
        return col.n_categories or self.n_categories

    def __getitem__(self, name: str) -> ColumnSpec:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        cols = []
        for c in self.columns:
            d = {"name": c.name, "kind": c.kind}
            if c.levels is not None:
                d["levels"] = c.levels
            if c.n_categories is not None:
                d["n_categories"] = c.n_categories
            cols.append(d)
        return {"columns": cols}

    @classmethod
    def from_dict(cls, d: dict, n_categories: int = DEFAULT_N_CATEGORIES) -> "VariableSchema":
        try:
            cols = [ColumnSpec(name=c["name"], kind=c["kind"], levels=c.get("levels"),
                               n_categories=c.get("n_categories"))
                    for c in d["columns"]]
        except (KeyError, TypeError) as exc:
            raise SchemaMismatch(f"malformed schema: {exc}") from exc
        return cls(cols, n_categories=n_categories)


@dataclass
class CodedMatrix:
    entries: np.ndarray
    column_blocks: dict[str, tuple[int, int]]
    column_labels: list[str]
    scales: dict[str, OrdinalScale] = field(default_factory=dict)
    categories: dict[str, list] = field(default_factory=dict)
    method: str = "barycentric"
    has_negative: bool = False

    @property
    def n_variables(self) -> int:
        return len(self.column_blocks)

    @property
    def shape(self):
        return self.entries.shape

    def block(self, name: str) -> np.ndarray:
        a, b = self.column_blocks[name]
        return self.entries[:, a:b]


def _check_table(data: pd.DataFrame, schema: VariableSchema) -> None:
    missing = [n for n in schema.names if n not in data.columns]
    extra = [n for n in data.columns if n not in schema.names]
    if missing or extra:
        raise SchemaMismatch(f"schema/table mismatch: missing={missing} extra={extra}")
    for name in schema.names:
        isna = data[name].isna().to_numpy()
        if isna.any():
            row = int(np.flatnonzero(isna)[0])
            raise MissingValue(f"missing value in column {name!r} at row {row}")


def _ordinal_levels(data: pd.DataFrame, col: ColumnSpec) -> np.ndarray:
    raw = data[col.name].to_numpy()
    try:
        lev = raw.astype(float)
    except (TypeError, ValueError) as exc:
        raise SchemaMismatch(f"ordinal column {col.name!r} must hold integers") from exc
    if np.any(lev != np.round(lev)):
        raise SchemaMismatch(f"ordinal column {col.name!r} must hold integers")
    return lev.astype(np.int64)


def build_coded_matrix(data: pd.DataFrame, schema: VariableSchema,
                       method: Method = "barycentric") -> CodedMatrix:
    """Assemble the coded matrix Z, one block per source variable."""
    if method not in METHODS:
        raise SchemaMismatch(f"unknown coding method {method!r}")
    _check_table(data, schema)
    blocks, labels, spans = [], [], {}
    scales, categories = {}, {}
    start = 0
    for col in schema.columns:
        n = schema.width(col)
        if col.kind == "nominal" or (col.kind == "ordinal" and method != "barycentric"):
            values = data[col.name].tolist()
            block, cats = encode_nominal(values)
            categories[col.name] = cats
            names = [f"{col.name}_{c}" for c in cats]
        elif col.kind == "ordinal":
            block = encode_ordinal(_ordinal_levels(data, col), col.levels, n)
            names = [f"{col.name}_{j + 1}" for j in range(n)]
        else:
            x = pd.to_numeric(data[col.name], errors="raise").to_numpy(dtype=float)
            if method == "barycentric":
                try:
                    levels, scale = discretize(x)
                except ConstantColumn as exc:
                    raise ConstantColumn(f"column {col.name!r}: {exc}") from exc
                scales[col.name] = scale
                block = encode_ordinal(levels, scale.m, n)
            elif method == "triangular":
                block = triangular_block(x, n)
            else:
                block = escofier_pair(x)
            names = [f"{col.name}_{j + 1}" for j in range(block.shape[1])]
        blocks.append(block)
        labels.extend(names)
        spans[col.name] = (start, start + block.shape[1])
        start += block.shape[1]
    Z = np.hstack(blocks) if blocks else np.zeros((len(data), 0))
    return CodedMatrix(entries=Z, column_blocks=spans, column_labels=labels,
                       scales=scales, categories=categories, method=method,
                       has_negative=bool((Z < 0).any()))
