import csv
import io
import math

import numpy as np

from winnowcover.bounds import theorem1_bound
from winnowcover.harness import (SWEEP_COLUMNS, TrialSummary, compare_to_bounds, empirical_ratio,
                                 row_bounds, rows_to_csv, sweep, trial_costs, trial_seed)
from winnowcover.instance import SetSystem, stats
from winnowcover.rng import splitmix64


def test_trial_seed_derivation():
    assert trial_seed(7, 3) == splitmix64(7 ^ 3)


def test_toy_ratio(toy):
    summary = empirical_ratio(*toy, trials=20_000, master_seed=1)
    assert summary.opt_cost == 1.0
    assert abs(summary.empirical_ratio - 1.25) < 0.02
    assert summary.empirical_ratio == summary.mean_cost


def test_deterministic_instance_has_no_spread():
    system = SetSystem.from_lists([[0, 1], [0], [1]], costs=[2.0, 1.0, 1.0], k=2)
    summary = empirical_ratio(system, [0, 1], trials=50, master_seed=4)
    assert summary.std_err == 0.0 and summary.empirical_ratio == 1.0


def test_same_seed_same_summary(toy):
    assert empirical_ratio(*toy, trials=300, master_seed=9) == \
        empirical_ratio(*toy, trials=300, master_seed=9)


def test_parallel_matches_serial(toy):
    serial = trial_costs(*toy, trials=64, master_seed=2)
    parallel = trial_costs(*toy, trials=64, master_seed=2, n_jobs=2)
    assert np.array_equal(serial, parallel)


class TestCompare:
    def test_toy_passes_theorem1(self, toy):
        summary = empirical_ratio(*toy, trials=2000, master_seed=0)
        assert theorem1_bound(2, 1) == 6.0
        assert compare_to_bounds(summary, {"theorem1": theorem1_bound(2, 1)}).passed

    def test_fabricated_fail(self):
        s = TrialSummary(100, 10.0, 1.0, 10.0, 0.1, 0)
        verdict = compare_to_bounds(s, {"a": 9.0, "b": 20.0})
        assert not verdict.passed and verdict.checks == {"a": False, "b": True}

    def test_boundary_non_strict(self):
        s = TrialSummary(100, 3.0, 1.0, 3.0, 0.0, 0)
        assert compare_to_bounds(s, 3.0).passed

    def test_missing_bounds_skipped(self):
        s = TrialSummary(100, 3.0, 1.0, 3.0, 0.0, 0)
        assert compare_to_bounds(s, {"theorem7": None, "theorem1": 4.0}).checks == {"theorem1": True}


class TestRowBounds:
    def test_unit_unweighted_k(self):
        b = row_bounds(4, 6, 2, 2.0, "unweighted-k", True)
        assert b["theorem1"] == theorem1_bound(4, 6, 2, 2) and b["theorem10"] is not None
        assert b["theorem7"] is None

    def test_unit_k1_universal(self):
        b = row_bounds(4, 6, 1, 1.0, "universal", True)
        assert b["theorem7"] is not None and b["theorem10"] is None

    def test_weighted(self):
        b = row_bounds(4, 6, 1, 1.5, "universal", False)
        assert b["theorem1"] == theorem1_bound(4, 6, 1, 1.5)
        assert b["theorem7"] is None and b["theorem10"] is None


class TestSweep:
    def test_one_point(self):
        rows = sweep({"n": 8, "num_sets": 5, "density": 0.5, "trials": 20, "seed": 3})
        assert len(rows) == 1 and rows[0].error == "" and rows[0].baseline == "exact"

    def test_unit_unweighted_k_columns(self):
        rows = sweep({"n": 10, "num_sets": 6, "density": 0.6, "k": 2,
                      "variant": "unweighted-k", "trials": 20})
        r = rows[0]
        assert r.theorem10 is not None and r.theorem1 == theorem1_bound(r.m, r.d, 2, 2)
        assert r.verdict == "PASS"

    def test_weighted_columns_empty(self):
        rows = sweep({"n": 10, "num_sets": 6, "density": 0.5, "cost_model": "uniform:1:3",
                      "trials": 20})
        assert rows[0].theorem7 is None and rows[0].theorem10 is None
        line = rows_to_csv(rows).splitlines()[1].split(",")
        assert line[SWEEP_COLUMNS.index("theorem7")] == ""

    def test_grid_order_and_errors(self):
        config = {"n": [6, 8], "num_sets": 4, "density": 0.5, "k": [1, 9], "trials": 10}
        rows = sweep(config)
        assert [(r.n, r.k) for r in rows] == [(6, 1), (6, 9), (8, 1), (8, 9)]
        assert rows[1].error and rows[3].error and not rows[0].error

    def test_csv_reproducible(self):
        config = {"n": [6, 9], "num_sets": [4, 6], "density": 0.5, "trials": 15, "seed": 1}
        out = rows_to_csv(sweep(config))
        assert out == rows_to_csv(sweep(config))
        header = next(csv.reader(io.StringIO(out)))
        assert header == SWEEP_COLUMNS

    def test_greedy_baseline_label(self):
        rows = sweep({"n": 6, "num_sets": 5, "density": 0.5, "trials": 5, "max_exact_sets": 3})
        assert rows[0].baseline == "greedy" and rows[0].verdict == ""


def test_ratio_grows_with_log_d_over_k():
    """Fixed structure with every element in 6 sets; raising k shrinks d/k."""
    rng = np.random.default_rng(0)
    n, num_sets, m = 24, 12, 6
    members = [[] for _ in range(num_sets)]
    for e in range(n):
        for s in rng.choice(num_sets, m, replace=False):
            members[s].append(e)
    base = SetSystem.from_lists(members)
    xs, ys, ses = [], [], []
    for k in (1, 2, 3, 4, 5):
        system = base.with_k(k)
        s = empirical_ratio(system, rng.permutation(n).tolist(), trials=200, master_seed=k)
        xs.append(math.log(stats(system).d / k))
        ys.append(s.empirical_ratio)
        ses.append(max(s.std_err, 1e-6))
    w = 1.0 / np.square(ses)
    X = np.column_stack([np.ones(len(xs)), xs])
    cov = np.linalg.inv(X.T @ (X * w[:, None]))
    slope = (cov @ X.T @ (w * np.asarray(ys)))[1]
    assert slope >= -2.0 * math.sqrt(cov[1, 1])
