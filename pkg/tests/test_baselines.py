import itertools

import numpy as np
import pandas as pd
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixhclust.baselines import gower, pam, pam_build
from mixhclust.coding import ColumnSpec, VariableSchema
from mixhclust.errors import BadK, ConstantContinuousColumn
from mixhclust.evaluation import ari


def mixed_table(rng, n):
    df = pd.DataFrame({"x": rng.normal(size=n), "o": rng.integers(1, 5, n),
                       "g": rng.choice(list("abc"), n)})
    schema = VariableSchema([ColumnSpec("x", "continuous"),
                             ColumnSpec("o", "ordinal", levels=4),
                             ColumnSpec("g", "nominal")])
    return df, schema


def exhaustive_cost(d, K):
    n = d.shape[0]
    return min(d[:, list(m)].min(axis=1).sum() for m in itertools.combinations(range(n), K))


# --- gower ------------------------------------------------------------------------


def test_gower_worked_example():
    df = pd.DataFrame({"x": [0.0, 5.0, 10.0], "g": ["a", "a", "b"]})
    schema = VariableSchema([ColumnSpec("x", "continuous"), ColumnSpec("g", "nominal")])
    d = gower(df, schema)
    assert d[0, 1] == pytest.approx(0.25)
    assert d[0, 2] == pytest.approx(1.0)  # opposite extremes, different category
    assert d[1, 2] == pytest.approx(0.75)


def test_gower_identical_rows_zero():
    df = pd.DataFrame({"x": [1.0, 1.0, 3.0], "g": ["a", "a", "b"]})
    schema = VariableSchema([ColumnSpec("x", "continuous"), ColumnSpec("g", "nominal")])
    assert gower(df, schema)[0, 1] == 0.0


def test_gower_ordinal_uses_levels():
    df = pd.DataFrame({"o": [1, 2, 4]})
    schema = VariableSchema([ColumnSpec("o", "ordinal", levels=4)])
    d = gower(df, schema)
    assert d[0, 1] == pytest.approx(1 / 3)
    assert d[0, 2] == pytest.approx(1.0)


def test_gower_zero_range_continuous():
    df = pd.DataFrame({"x": [2.0, 2.0], "g": ["a", "b"]})
    schema = VariableSchema([ColumnSpec("x", "continuous"), ColumnSpec("g", "nominal")])
    with pytest.raises(ConstantContinuousColumn):
        gower(df, schema)


@given(st.integers(0, 10_000), st.integers(2, 30))
@settings(max_examples=30, deadline=None)
def test_gower_properties(seed, n):
    df, schema = mixed_table(np.random.default_rng(seed), n)
    df.loc[0, "x"], df.loc[1, "x"] = -5.0, 5.0  # guarantee positive range
    d = gower(df, schema)
    assert np.all(d >= 0) and np.all(d <= 1)
    assert np.array_equal(d, d.T)
    assert np.all(np.diag(d) == 0)


# --- pam ------------------------------------------------------------------------------


def test_pam_two_pairs():
    X = np.array([[0.0], [0.1], [10.0], [10.2]])
    d = np.abs(X - X.T)
    p, info = pam(d, 2, return_details=True)
    np.testing.assert_array_equal(p.labels, [1, 1, 2, 2])
    assert info["cost"] == pytest.approx(exhaustive_cost(d, 2))


def test_pam_k_equals_n():
    d = np.abs(np.subtract.outer(np.arange(6.0), np.arange(6.0)))
    p, info = pam(d, 6, return_details=True)
    assert info["cost"] == 0.0
    assert p.K == 6


def test_pam_bad_k():
    d = np.zeros((3, 3))
    with pytest.raises(BadK):
        pam(d, 0)
    with pytest.raises(BadK):
        pam(d, 4)


def tiny_instance(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 13))
    K = int(rng.integers(1, 4))
    df, schema = mixed_table(rng, n)
    df.loc[0, "x"], df.loc[1, "x"] = -3.0, 3.0
    return gower(df, schema), K


@pytest.mark.parametrize("seed", range(30))
def test_pam_is_swap_local_optimum(seed):
    d, K = tiny_instance(seed)
    _, info = pam(d, K, return_details=True)
    med = info["medoids"]
    assert info["cost"] <= info["build_cost"] + 1e-12
    assert np.all(np.diff(info["cost_history"]) <= 1e-12)
    assert info["cost"] >= exhaustive_cost(d, K) - 1e-12
    for i in range(K):
        for h in range(d.shape[0]):
            if h not in med:
                trial = med[:i] + [h] + med[i + 1:]
                assert d[:, trial].min(axis=1).sum() >= info["cost"] - 1e-12


def test_pam_reaches_exhaustive_optimum_on_most_tiny_instances():
    # PAM is a heuristic; on this corpus it misses the optimum on a few seeds
    misses = []
    for seed in range(100):
        d, K = tiny_instance(seed)
        _, info = pam(d, K, return_details=True)
        if info["cost"] > exhaustive_cost(d, K) + 1e-12:
            misses.append(seed)
    print(f"PAM missed the exhaustive optimum on seeds {misses}")
    assert len(misses) <= 10


def test_pam_build_first_medoid_is_most_central():
    d = np.abs(np.subtract.outer(np.arange(5.0), np.arange(5.0)))
    assert pam_build(d, 1) == [2]


@pytest.mark.parametrize("seed", range(10))
def test_pam_permutation_invariant(seed):
    rng = np.random.default_rng(seed)
    X = np.concatenate([rng.normal(c, 0.3, size=(8, 2)) for c in (0.0, 4.0, 8.0)])
    perm = rng.permutation(len(X))
    d = np.linalg.norm(X[:, None] - X[None], axis=-1)
    a = pam(d, 3).labels
    b = pam(d[np.ix_(perm, perm)], 3).labels
    assert ari(a[perm], b) == 1.0


def test_pam_deterministic():
    rng = np.random.default_rng(0)
    df, schema = mixed_table(rng, 40)
    d = gower(df, schema)
    assert np.array_equal(pam(d, 4, seed=1).labels, pam(d, 4, seed=2).labels)
