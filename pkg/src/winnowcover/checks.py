"""Randomized numeric sweeps over the probability facts, shared by the CLI."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .prob import (E_MINUS_3, check_lemma12, check_lemma13, enumerate_pmf, f_worst_case,
                   poisson_binomial, reproduce_table1)

# Worst-case potential values at z = 1/m for m = 1, 2, 4, 8, to three decimals.
REFERENCE_F = {1: 1.086, 2: 0.543, 4: 0.157, 8: -0.112}
TABLE_CEILING = 0.049


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def random_trials(rng: np.random.Generator, max_n: int = 30) -> np.ndarray:
    """A trial vector with a random length and a randomly shaped probability profile."""
    n = int(rng.integers(1, max_n + 1))
    shape = rng.integers(0, 3)
    if shape == 0:
        return rng.random(n)
    if shape == 1:
        return rng.beta(0.5, 0.5, n)
    return np.full(n, rng.random())


def lemma12_sweep(samples: int, seed: int = 0):
    """Return (checked, failures) over ``samples`` inputs meeting the precondition."""
    rng = np.random.default_rng(seed)
    checked = failures = 0
    while checked < samples:
        p = random_trials(rng)
        if not np.any((p > 0) & (p < 1)):
            continue
        top = int(math.floor((p.sum() + 1) / 2))
        if top < 1:
            continue
        a = int(rng.integers(1, top + 1))
        checked += 1
        failures += not check_lemma12(p, a)
    return checked, failures


def lemma13_sweep(samples: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    checked = failures = 0
    while checked < samples:
        p = random_trials(rng)
        if p.sum() <= 0:
            continue
        a = int(rng.integers(0, int(math.floor(p.sum() / 2)) + 1))
        checked += 1
        failures += not check_lemma13(p, a).holds
    return checked, failures


def pmf_agreement(samples: int, seed: int = 0, max_n: int = 15) -> float:
    """Largest absolute gap between the DP and enumerated PMFs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        p = random_trials(rng, max_n)
        worst = max(worst, float(np.abs(poisson_binomial(p) - enumerate_pmf(p)).max()))
    return worst


def run_all(samples: int = 10_000, seed: int = 0) -> list[CheckResult]:
    out = []
    rows = reproduce_table1()
    worst = max(r.c for r in rows)
    out.append(CheckResult(
        "table1", worst < TABLE_CEILING < E_MINUS_3,
        f"max C(2, l, x0) over l=2..40 is {worst:.12g} (< {TABLE_CEILING} < e^-3)",
    ))
    gaps = {m: abs(f_worst_case(1.0 / m) - ref) for m, ref in REFERENCE_F.items()}
    out.append(CheckResult(
        "f-table", max(gaps.values()) <= 1e-3,
        ", ".join(f"F(1/{m})={f_worst_case(1.0 / m):.4f}" for m in range(1, 9)),
    ))
    neg = {m: f_worst_case(1.0 / m) for m in (128, 256)}
    out.append(CheckResult(
        "f-negative", all(v <= 0 for v in neg.values()),
        ", ".join(f"F(1/{m})={v:.4f}" for m, v in neg.items()),
    ))
    gap = pmf_agreement(min(samples, 500), seed)
    out.append(CheckResult("pmf-vs-enumeration", gap <= 1e-12, f"max abs gap {gap:.3g}"))
    n12, f12 = lemma12_sweep(samples, seed)
    out.append(CheckResult("lemma12", f12 == 0, f"{n12 - f12}/{n12} inputs satisfy it"))
    n13, f13 = lemma13_sweep(samples, seed)
    out.append(CheckResult("lemma13", f13 == 0, f"{n13 - f13}/{n13} inputs satisfy it"))
    return out
