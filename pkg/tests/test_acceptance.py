"""Acceptance checks, one group per criterion.

Run ``pytest tests/test_acceptance.py`` to get a PASS/FAIL line per criterion
in the terminal summary.
"""

import time
import timeit

import numpy as np
import pandas as pd
import pytest

from reference_oracle import tuple_for_level_exact
from ward_oracle import naive_ward
from mixhclust.cli import main
from mixhclust.coding import (
    ColumnSpec,
    VariableSchema,
    barycentric_tuple,
    build_coded_matrix,
    decode_tuple,
    discretize,
    encode_ordinal,
)
from mixhclust.correspondence import chi2_distance_matrix, correspondence_view, total_inertia
from mixhclust.evaluation import ari
from mixhclust.pipeline import hierarchical
from mixhclust.simgen import SimDesign, expand_grid, generate, run_grid
from mixhclust.ward import inertia_gains, select_k, ward_cluster

TOY_X = [40, 33, 32.5, 32, 55.2, 60.1, 32]
TOY_N3 = [
    [0.711, 0.193, 0.096],
    [0.956, 0.029, 0.015],
    [0.974, 0.018, 0.009],
    [0.991, 0.006, 0.003],
    [0.061, 0.123, 0.816],
    [0.003, 0.006, 0.991],
    [0.991, 0.006, 0.003],
]
TOY_N5 = [
    [0.184, 0.667, 0.099, 0.033, 0.017],
    [0.927, 0.049, 0.016, 0.005, 0.003],
    [0.956, 0.029, 0.010, 0.003, 0.002],
    [0.985, 0.010, 0.003, 0.001, 5e-4],
    [0.011, 0.023, 0.068, 0.205, 0.693],
    [5e-4, 0.001, 0.003, 0.010, 0.985],
    [0.985, 0.010, 0.003, 0.001, 5e-4],
]


def coded_column(x, n):
    df = pd.DataFrame({"X": x})
    schema = VariableSchema([ColumnSpec("X", "continuous", n_categories=n)])
    return build_coded_matrix(df, schema).entries


# --- 1 ---------------------------------------------------------------------------


@pytest.mark.criterion(1, "toy-column golden values, n=3 and n=5, within 5e-4; < 1 ms")
@pytest.mark.parametrize("n, expected", [(3, TOY_N3), (5, TOY_N5)])
def test_c1_toy_column(n, expected):
    Z = coded_column(TOY_X, n)
    np.testing.assert_allclose(Z, expected, rtol=0, atol=5e-4)

    def code():
        levels, scale = discretize(TOY_X)
        return encode_ordinal(levels, scale.m, n)

    np.testing.assert_array_equal(code(), Z)
    per_call = min(timeit.repeat(code, number=50, repeat=5)) / 50
    print(f"criterion 1: n={n} coding takes {per_call * 1e3:.3f} ms")
    assert per_call < 1e-3


# --- 2 ---------------------------------------------------------------------------


@pytest.mark.criterion(2, "Step-1 worked example: d0=0.5, m=57, T(40)=17, T(33)=3")
def test_c2_step1_example():
    levels, scale = discretize(TOY_X)
    assert scale.d0 == 0.5
    assert scale.m == 57
    assert int(scale.level(40)) == 17 and int(scale.level(33)) == 3
    assert levels[0] == 17 and levels[1] == 3


# --- 3 ---------------------------------------------------------------------------


@pytest.mark.criterion(3, "1,000 random tuples match the reference routine within 1e-10")
def test_c3_reference_equivalence():
    rng = np.random.default_rng(123)
    worst = 0.0
    for _ in range(1000):
        m = int(rng.integers(1, 501))
        l = int(rng.integers(1, m + 1))
        n = int(rng.integers(2, 8))
        ours = np.array(barycentric_tuple(l, m, n).values)
        ref = np.array(tuple_for_level_exact(l, m, n))
        worst = max(worst, float(np.max(np.abs(ours - ref))))
    print(f"criterion 3: max abs deviation {worst:.3e}")
    assert worst <= 1e-10


# --- 4 ---------------------------------------------------------------------------


@pytest.mark.criterion(4, "coding properties (sum, sign, symmetry, centre, decode, scaling); < 10 s")
def test_c4_coding_properties():
    t0 = time.perf_counter()
    for n in range(2, 8):
        for m in range(1, 201):
            block = encode_ordinal(range(1, m + 1), m, n)
            assert np.all(np.abs(block.sum(axis=1) - 1) <= 1e-12)
            assert np.all(block >= 0)
            # level l and level m + 1 - l are mirror images
            assert np.all(np.abs(block - block[::-1, ::-1]) <= 1e-12)
            for l in range(1, m + 1):
                num, den = (2 * l - 1) * n, 2 * m
                p, rem = divmod(num, den)
                if rem and 1 <= p <= n - 2:
                    assert block[l - 1, p] == 2 / 3
                assert decode_tuple(block[l - 1], m=m) == l
    rng = np.random.default_rng(4)
    for _ in range(200):
        x = rng.normal(rng.uniform(-50, 50), rng.uniform(0.1, 20), size=int(rng.integers(3, 60)))
        z = (x - x.mean()) / x.std(ddof=1)
        assert np.max(np.abs(coded_column(x, 3) - coded_column(z, 3))) <= 1e-9
    elapsed = time.perf_counter() - t0
    print(f"criterion 4: {elapsed:.2f} s")
    assert elapsed < 10


# --- 5 ---------------------------------------------------------------------------


@pytest.mark.criterion(5, "chi-square: column-merge invariance and equal-mass proportionality")
def test_c5_chi_square_geometry():
    rng = np.random.default_rng(55)
    for _ in range(100):
        I, J = int(rng.integers(3, 15)), int(rng.integers(2, 8))
        Z = rng.uniform(0.05, 5.0, size=(I, J))
        j = int(rng.integers(J))
        split = np.column_stack([Z, rng.uniform(0.2, 4.0) * Z[:, j]])
        merged = Z.copy()
        merged[:, j] = split[:, j] + split[:, -1]
        a = chi2_distance_matrix(correspondence_view(split))
        b = chi2_distance_matrix(correspondence_view(merged))
        assert np.max(np.abs(a - b)) <= 1e-10
    for _ in range(100):
        I, J = int(rng.integers(3, 15)), int(rng.integers(2, 8))
        U = rng.uniform(0.05, 5.0, size=(I, J))
        view = correspondence_view(U / U.sum(axis=0))  # equal column masses
        assert np.allclose(view.c, 1 / J, rtol=1e-12)
        A = view.profiles
        eu = np.sum((A[:, None] - A[None]) ** 2, axis=-1)
        np.testing.assert_allclose(chi2_distance_matrix(view, squared=True), J * eu,
                                   rtol=1e-9, atol=1e-12)


# --- 6 ---------------------------------------------------------------------------


@pytest.mark.criterion(6, "Ward: sum of costs = inertia, recurrence = naive, monotone; < 30 s")
def test_c6_ward_identities():
    t0 = time.perf_counter()
    rng = np.random.default_rng(66)
    for I in [2, 3, 5, 8, 13, 21, 34, 50, 50, 50]:
        view = correspondence_view(rng.uniform(0.05, 3.0, size=(I, int(rng.integers(2, 9)))))
        d = ward_cluster(view)
        costs = d.costs
        assert abs(costs.sum() - total_inertia(view)) <= 1e-9
        assert np.all(np.diff(costs) >= -1e-12)
        for mg, (members, cost) in zip(d.merges, naive_ward(view)):
            assert set(d.members(mg.node)) == members
            assert abs(mg.cost - cost) <= 1e-10
    # the same identity on pipeline-coded mixed data
    data = generate(SimDesign(K=3, N=300, overlap=0.01, seed=6))
    run = hierarchical(data.table, data.schema)
    view = correspondence_view(run.coded)
    assert abs(run.dendrogram.costs.sum() - total_inertia(view)) <= 1e-9
    assert np.all(np.diff(run.dendrogram.costs) >= -1e-12)
    elapsed = time.perf_counter() - t0
    print(f"criterion 6: {elapsed:.2f} s")
    assert elapsed < 30


# --- 7 ---------------------------------------------------------------------------


@pytest.mark.criterion(7, "ARI: -0.5 example, identity = 1, random mean in [-0.02, 0.02]")
def test_c7_ari():
    assert ari([1, 1, 2, 2], [1, 2, 1, 2]) == -0.5
    assert ari([1, 1, 2, 3, 3], [1, 1, 2, 3, 3]) == 1.0
    rng = np.random.default_rng(77)
    mean = float(np.mean([ari(rng.integers(1, 5, 200), rng.integers(1, 5, 200))
                          for _ in range(500)]))
    print(f"criterion 7: mean ARI of random partitions {mean:+.4f}")
    assert -0.02 <= mean <= 0.02


# --- 8 ---------------------------------------------------------------------------


@pytest.mark.slow
@pytest.mark.criterion(8, "simulation: ARI falls with overlap, floor at 0.1%, K=3 recovered")
def test_c8_simulation():
    t0 = time.perf_counter()
    overlaps = (0.001, 0.01, 0.02)
    designs = expand_grid(K=(4,), N=(500,), density=("equal",), overlap=overlaps)
    table = run_grid(designs, ["mixed-hierarchical-B"], replicates=10, master_seed=2024)
    means = table.groupby("overlap")["ari"].mean().reindex(overlaps).to_numpy()
    print("criterion 8a/b: mean ARI by overlap", {o: round(float(v), 4) for o, v in zip(overlaps, means)})
    assert np.all(np.diff(means) < 0)
    assert means[0] >= 0.65

    hits = 0
    for seed in range(25):
        data = generate(SimDesign(K=3, N=500, overlap=0.001, seed=seed))
        d = hierarchical(data.table, data.schema).dendrogram
        hits += select_k(inertia_gains(d)) == 3
    print(f"criterion 8c: select_k found K=3 in {hits}/25 runs")
    assert hits >= 20
    elapsed = time.perf_counter() - t0
    print(f"criterion 8: {elapsed:.1f} s")
    assert elapsed < 300


# --- 9 ---------------------------------------------------------------------------


def _snapshot(path):
    return {p.name: p.read_bytes() for p in sorted(path.iterdir())}


@pytest.mark.criterion(9, "every command re-run reproduces its outputs byte for byte")
def test_c9_determinism(tmp_path):
    sim = tmp_path / "sim"
    commands = {
        "simulate": ["simulate", "--clusters", "3", "--rows", "120", "--seed", "8",
                     "--out", str(sim)],
    }
    assert main(commands["simulate"]) == 0
    data, schema = str(sim / "data.csv"), str(sim / "schema.json")
    for coding in ("barycentric", "triangular", "escofier"):
        commands[f"code-{coding}"] = ["code", "--input", data, "--schema", schema,
                                      "--coding", coding, "--out", str(tmp_path / f"code-{coding}")]
        commands[f"cluster-{coding}"] = ["cluster", "--input", data, "--schema", schema,
                                         "--coding", coding,
                                         "--out", str(tmp_path / f"cluster-{coding}")]
    dj = str(tmp_path / "cluster-barycentric" / "dendrogram.json")
    part = str(tmp_path / "cluster-barycentric" / "partition.csv")
    commands["cut"] = ["cut", "--input", dj, "--k", "4", "--out", str(tmp_path / "cut")]
    commands["selectk"] = ["selectk", "--input", dj, "--out", str(tmp_path / "selectk")]
    commands["bench"] = ["bench", "--clusters", "2", "--rows", "80", "--replicates", "2",
                         "--overlap", "0.001", "0.02", "--out", str(tmp_path / "bench")]
    outputs = {}
    for name, argv in commands.items():
        if name != "simulate":
            assert main(argv) == 0, name
        outputs[name] = _snapshot(tmp_path / argv[argv.index("--out") + 1].split("/")[-1])
    for name, argv in commands.items():
        assert main(argv) == 0, name
        again = _snapshot(tmp_path / argv[argv.index("--out") + 1].split("/")[-1])
        assert again == outputs[name], name
        assert "manifest.json" in again
    # ari prints to stdout only; check its value is stable
    assert main(["ari", "--input", part, "--reference", part]) == 0
