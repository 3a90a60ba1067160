"""Seeded Monte-Carlo experiments and comparison with the analytic bounds."""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import asdict, dataclass, fields
from typing import Mapping

import numpy as np

from . import bounds as _bounds
from .engine import Variant, run
from .instance import SetSystem, check_instance, random_system, stats
from .offline import DEFAULT_MAX_SETS, exact_optimum, greedy_multicover, kappa
from .rng import splitmix64


@dataclass(frozen=True)
class TrialSummary:
    """Aggregate of repeated independent runs on one instance.

    ``std_err`` is the standard error of the per-trial ratio
    ``cost / opt_cost`` (sample standard deviation over ``sqrt(trials)``).
    """

    trials: int
    mean_cost: float
    opt_cost: float
    empirical_ratio: float
    std_err: float
    seed: int


def trial_seed(master_seed: int, trial_index: int) -> int:
    return splitmix64(master_seed ^ trial_index)


def _one_trial(system, sequence, variant, seed):
    return run(system, sequence, variant, seed).total_cost


def trial_costs(system: SetSystem, sequence, variant=Variant.UNIVERSAL, trials=100,
                master_seed=0, n_jobs=None) -> np.ndarray:
    """Per-trial total costs, in trial-index order."""
    seeds = [trial_seed(master_seed, t) for t in range(trials)]
    if n_jobs in (None, 1):
        costs = [_one_trial(system, sequence, variant, s) for s in seeds]
    else:
        from joblib import Parallel, delayed

        costs = Parallel(n_jobs=n_jobs)(
            delayed(_one_trial)(system, sequence, variant, s) for s in seeds
        )
    return np.asarray(costs, dtype=float)


def summarize(costs, opt_cost: float, seed: int) -> TrialSummary:
    costs = np.asarray(costs, dtype=float)
    trials = len(costs)
    ratios = costs / opt_cost
    std_err = float(ratios.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return TrialSummary(trials, float(costs.mean()), float(opt_cost),
                        float(ratios.mean()), std_err, seed)


def empirical_ratio(system: SetSystem, sequence, variant=Variant.UNIVERSAL, trials=100,
                    master_seed=0, n_jobs=None, opt_cost=None) -> TrialSummary:
    """Mean online cost over ``trials`` seeded runs, relative to the exact offline optimum."""
    sequence = check_instance(system, sequence)
    if opt_cost is None:
        opt_cost = exact_optimum(system, sequence).cost
    costs = trial_costs(system, sequence, variant, trials, master_seed, n_jobs)
    return summarize(costs, opt_cost, master_seed)


@dataclass(frozen=True)
class Verdict:
    passed: bool
    checks: dict[str, bool]

    def __bool__(self):
        return self.passed


def compare_to_bounds(summary: TrialSummary, bounds: Mapping[str, float | None] | float) -> Verdict:
    """PASS when ``ratio - 3 * std_err`` does not exceed each supplied upper bound."""
    if not isinstance(bounds, Mapping):
        bounds = {"bound": bounds}
    low = summary.empirical_ratio - 3.0 * summary.std_err
    checks = {name: bool(low <= b) for name, b in bounds.items() if b is not None}
    return Verdict(all(checks.values()), checks)


@dataclass
class SweepRow:
    n: int
    num_sets: int
    density: float
    cost_model: str
    m: int | None
    d: int | None
    k: int
    variant: str
    kappa: float | None
    baseline: str
    empirical_ratio: float | None
    std_err: float | None
    theorem1: float | None
    theorem7: float | None
    theorem10: float | None
    verdict: str
    error: str


SWEEP_COLUMNS = [f.name for f in fields(SweepRow)]


def row_bounds(m, d, k, kappa_value, variant, unit_cost) -> dict[str, float | None]:
    """Bounds whose preconditions hold for this grid point; others map to ``None``."""
    out = {"theorem1": None, "theorem7": None, "theorem10": None}
    if m is None or m < 2:
        return out
    variant = Variant(variant)
    out["theorem1"] = _bounds.theorem1_bound(m, d, k, k if unit_cost else kappa_value)
    if unit_cost and k == 1 and variant is Variant.UNIVERSAL:
        out["theorem7"] = _bounds.theorem7_bound(m, d)
    if unit_cost and variant is Variant.UNWEIGHTED_K:
        out["theorem10"] = _bounds.theorem10_bound(m, d, k)
    return out


def _as_list(value):
    return list(value) if isinstance(value, (list, tuple)) else [value]


def sweep(config: Mapping) -> list[SweepRow]:
    """One row per point of the cartesian grid in ``config``.

    Keys (scalars or lists): ``n``, ``num_sets``, ``density``, ``k``,
    ``variant``, ``cost_model``; scalars ``trials`` and ``seed``. Exact
    optima are used while at most ``max_exact_sets`` sets are relevant,
    greedy costs beyond that (``baseline`` column says which).
    """
    trials = int(config.get("trials", 100))
    seed = int(config.get("seed", 0))
    max_exact = int(config.get("max_exact_sets", DEFAULT_MAX_SETS))
    grid = itertools.product(
        _as_list(config["n"]), _as_list(config["num_sets"]), _as_list(config["density"]),
        _as_list(config.get("cost_model", "unit")), _as_list(config.get("k", 1)),
        _as_list(config.get("variant", "universal")),
    )
    rows = []
    for idx, (n, num_sets, density, cost_model, k, variant) in enumerate(grid):
        row = SweepRow(n, num_sets, density, str(cost_model), None, None, k, str(variant), None,
                       "", None, None, None, None, None, "", "")
        try:
            variant = Variant(variant).value
            row.variant = variant
            system, seq = random_system(n, num_sets, density, cost_model, k, seed=seed + idx)
            row.m, row.d = stats(system)
            if num_sets <= max_exact:
                ref, row.baseline = exact_optimum(system, seq, max_sets=max_exact), "exact"
            else:
                ref, row.baseline = greedy_multicover(system, seq), "greedy"
            row.kappa = kappa(system, ref, seq)
            summary = empirical_ratio(system, seq, variant, trials, seed + idx, opt_cost=ref.cost)
            row.empirical_ratio, row.std_err = summary.empirical_ratio, summary.std_err
            b = row_bounds(row.m, row.d, k, row.kappa, variant, system.is_unit_cost)
            row.theorem1, row.theorem7, row.theorem10 = b["theorem1"], b["theorem7"], b["theorem10"]
            if row.baseline == "exact" and any(v is not None for v in b.values()):
                row.verdict = "PASS" if compare_to_bounds(summary, b) else "FAIL"
        except Exception as exc:  # noqa: BLE001 - recorded per row, sweep continues
            row.error = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        d = asdict(row)
        writer.writerow([_fmt(d[c]) for c in SWEEP_COLUMNS])
    return buf.getvalue()
