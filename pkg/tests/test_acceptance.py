"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Criterion 4 is reported as two lines (4a and 4b) so each tail statement
keeps its own verdict.
"""

import csv
import math
import time
from pathlib import Path

import numpy as np

from winnowcover.adversary import binary_tree_base, lift_osc_k, random_base
from winnowcover.bounds import theorem1_bound, theorem10_bound
from winnowcover.checks import lemma12_sweep, lemma13_sweep, random_trials
from winnowcover.engine import Variant, run
from winnowcover.harness import compare_to_bounds, empirical_ratio
from winnowcover.instance import InstanceError, random_system, stats, validate
from winnowcover.offline import exact_optimum, greedy_multicover, is_cover
from winnowcover.prob import enumerate_pmf, f_worst_case, poisson_binomial, reproduce_table1

TABLE = Path(__file__).parent / "data" / "table1.tsv"
F_PUBLISHED = {1: 1.086, 2: 0.543, 4: 0.157, 8: -0.112}


def draw_instance(rng, n_range, sets_range, density_range, k_choices, weighted_share=0.0):
    """Keep drawing until a feasible random instance comes out."""
    while True:
        k = int(rng.choice(k_choices))
        num_sets = int(rng.integers(max(k, sets_range[0]), sets_range[1] + 1))
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        density = float(rng.uniform(*density_range))
        cost_model = "uniform:0.5:4" if rng.random() < weighted_share else "unit"
        try:
            return random_system(n, num_sets, density, cost_model, k,
                                 seed=int(rng.integers(2**63)))
        except InstanceError:
            continue


def test_c1_table1(record):
    start = time.perf_counter()
    with TABLE.open(encoding="utf-8") as fh:
        table = {int(r["ell"]): (float(r["x0"]), float(r["C"]))
                 for r in csv.DictReader(fh, delimiter="\t")}
    rows = reproduce_table1()
    x_gap = max(abs(r.x0 - table[r.ell][0]) for r in rows)
    c_rel = max(abs(r.c - table[r.ell][1]) / table[r.ell][1] for r in rows)
    worst = max(r.c for r in rows)
    elapsed = time.perf_counter() - start
    ok = (len(rows) == 39 and x_gap <= 1e-5 and c_rel <= 1e-9 and worst < 0.049 and elapsed < 1)
    record("1 table reproduction", ok,
           f"x0 gap {x_gap:.2e}, C rel gap {c_rel:.2e}, max C {worst:.6f}, {elapsed:.3f}s")
    assert ok


def test_c2_f_table(record):
    start = time.perf_counter()
    gaps = {m: abs(f_worst_case(1 / m) - v) for m, v in F_PUBLISHED.items()}
    others = ", ".join(f"F(1/{m})={f_worst_case(1 / m):.3f}" for m in (3, 5, 6, 7))
    elapsed = time.perf_counter() - start
    ok = max(gaps.values()) <= 1e-3 and elapsed < 1
    record("2 F dyadic entries", ok,
           f"max gap {max(gaps.values()):.2e}; unasserted {others}; {elapsed:.3f}s")
    assert ok


def test_c3_pmf_oracle(record):
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(500):
        tv = random_trials(rng, max_n=15)
        worst = max(worst, float(np.max(np.abs(poisson_binomial(tv) - enumerate_pmf(tv)))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 30
    record("3 PMF vs enumeration", ok, f"500 vectors, max gap {worst:.2e}, {elapsed:.2f}s")
    assert ok


def test_c4a_lemma12(record):
    start = time.perf_counter()
    checked, failures = lemma12_sweep(10_000, seed=12)
    elapsed = time.perf_counter() - start
    ok = failures == 0 and checked == 10_000 and elapsed < 60
    record("4a pmf rises below the mean", ok, f"{checked - failures}/{checked} hold, {elapsed:.1f}s")
    assert ok


def test_c4b_lemma13(record):
    start = time.perf_counter()
    checked, failures = lemma13_sweep(10_000, seed=13)
    elapsed = time.perf_counter() - start
    ok = failures == 0 and checked == 10_000 and elapsed < 60
    record("4b lower tail under Poisson term", ok, f"{checked - failures}/{checked} hold, {elapsed:.1f}s")
    assert ok


def test_c5_coverage_and_determinism(record):
    start = time.perf_counter()
    rng = np.random.default_rng(5)
    runs = problems = 0
    for _ in range(1000):
        system, seq = draw_instance(rng, (1, 20), (1, 15), (0.3, 0.9), [1, 2, 3, 5],
                                    weighted_share=0.5)
        variants = [Variant.UNIVERSAL] + ([Variant.UNWEIGHTED_K] if system.is_unit_cost else [])
        seed = int(rng.integers(2**64, dtype=np.uint64))
        for variant in variants:
            first = run(system, seq, variant, seed)
            second = run(system, seq, variant, seed)
            runs += 1
            if first.trace_jsonl() != second.trace_jsonl():
                problems += 1
            elif not is_cover(system, first.final_state.selected, seq):
                problems += 1
    elapsed = time.perf_counter() - start
    ok = problems == 0 and elapsed < 120
    record("5 coverage and determinism", ok,
           f"1000 instances, {runs} runs, {problems} problems, {elapsed:.1f}s")
    assert ok


def test_c6_toy_expectation(toy, record):
    start = time.perf_counter()
    summary = empirical_ratio(*toy, trials=100_000, master_seed=6)
    elapsed = time.perf_counter() - start
    ok = abs(summary.mean_cost - 1.25) <= 0.02 and elapsed < 10
    record("6 toy expectation", ok,
           f"mean cost {summary.mean_cost:.4f} over 1e5 trials, {elapsed:.2f}s")
    assert ok


def test_c7_bound_dominance(record):
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    violations, checks, done = [], 0, 0
    while done < 50:
        system, seq = draw_instance(rng, (6, 30), (4, 25), (0.15, 0.5), [1, 2, 3])
        m, d = stats(system)
        if m < 2 or not seq:
            continue
        done += 1
        k = system.k
        opt = exact_optimum(system, seq).cost
        for variant in (Variant.UNIVERSAL, Variant.UNWEIGHTED_K):
            summary = empirical_ratio(system, seq, variant, trials=200,
                                      master_seed=int(rng.integers(2**63)), opt_cost=opt)
            bounds = {"theorem1": theorem1_bound(m, d, k, kappa=k)}
            if variant is Variant.UNWEIGHTED_K:
                bounds["theorem10"] = theorem10_bound(m, d, k)
            verdict = compare_to_bounds(summary, bounds)
            checks += len(verdict.checks)
            if not verdict:
                violations.append((m, d, k, variant.value, summary.empirical_ratio))
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 600
    record("7 bound dominance", ok,
           f"50 instances, {checks} comparisons, {len(violations)} violations, {elapsed:.1f}s")
    assert ok, violations


def test_c8_lift_correctness(record):
    start = time.perf_counter()
    bases = [binary_tree_base(1), binary_tree_base(1, path=[1])]
    rng = np.random.default_rng(8)
    for m_base in range(1, 5):
        for n_base in range(1, 7):
            bases.append(random_base(m_base, n_base, seed=int(rng.integers(2**32))))
    bad, cases = [], 0
    for k in (1, 2, 4):
        for base in bases:
            m_base = base.system.num_sets
            assert m_base <= 4 and base.system.universe_size <= 6
            lifted = lift_osc_k(base, k)
            cases += 1
            system = lifted.system
            opt = exact_optimum(system, lifted.sequence)
            if (system.num_sets != k + k * m_base or validate(system, lifted.sequence)
                    or system.k != k or opt.cost > 2 * k):
                bad.append((k, m_base, base.system.universe_size, opt.cost))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    record("8 lift correctness", ok, f"{cases} lifts, {len(bad)} bad, {elapsed:.1f}s")
    assert ok, bad


def test_c9_greedy_quality(record):
    start = time.perf_counter()
    rng = np.random.default_rng(9)
    worst, bad = 0.0, 0
    for _ in range(100):
        system, seq = draw_instance(rng, (4, 14), (3, 15), (0.2, 0.6), [1, 2, 3])
        d = stats(system).d
        opt = exact_optimum(system, seq).cost
        greedy = greedy_multicover(system, seq).cost
        if opt == 0:
            continue
        ratio = greedy / opt
        worst = max(worst, ratio / (1 + math.log(d)))
        bad += greedy > (1 + math.log(d)) * opt + 1e-9
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 60
    record("9 greedy quality", ok,
           f"100 instances, worst greedy/((1+ln d) OPT) = {worst:.3f}, {elapsed:.1f}s")
    assert ok
