"""Randomized winnowing for online weighted set multicover.

Every presented element that is short of ``k`` selected covering sets
raises the accumulated probability of each of its unselected sets,
samples each of them with the per-step probability, then tops up the
coverage greedily with the cheapest remaining sets.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .instance import InstanceError, SetSystem, check_instance, stats
from .rng import SplitMix64


class Variant(str, enum.Enum):
    """Probability rule used when an element is under-covered.

    ``UNIVERSAL`` scales by the ``deficit``-th cheapest candidate cost and
    accumulates the unclamped probability. ``UNWEIGHTED_K`` is the
    unit-cost rule ``min(alpha_p + deficit / |S_i|, 1)`` and accumulates
    the clamped value.
    """

    UNIVERSAL = "universal"
    UNWEIGHTED_K = "unweighted-k"


class EngineError(RuntimeError):
    """The algorithm reached a state its preconditions rule out."""


class TraceMismatch(ValueError):
    """A recorded trace is inconsistent with the algorithm on its instance."""


class SetDraw(NamedTuple):
    set_id: int
    p_computed: float
    p_used: float
    selected_randomly: bool


class StepRecord(NamedTuple):
    element: int
    deficit_before: int
    mu: float | None
    per_set: tuple[SetDraw, ...]
    greedy_selected: tuple[int, ...]

    def to_json(self) -> str:
        return json.dumps(
            {
                "element": self.element,
                "deficit_before": self.deficit_before,
                "mu": self.mu,
                "per_set": [
                    {"set_id": d.set_id, "p_computed": d.p_computed,
                     "p_used": d.p_used, "selected_randomly": d.selected_randomly}
                    for d in self.per_set
                ],
                "greedy_selected": list(self.greedy_selected),
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, line: str) -> "StepRecord":
        obj = json.loads(line)
        draws = tuple(
            SetDraw(int(d["set_id"]), float(d["p_computed"]), float(d["p_used"]),
                    bool(d["selected_randomly"]))
            for d in obj["per_set"]
        )
        mu = obj["mu"]
        return cls(int(obj["element"]), int(obj["deficit_before"]),
                   None if mu is None else float(mu), draws,
                   tuple(int(s) for s in obj["greedy_selected"]))


@dataclass
class OnlineState:
    """Mutable state of one run: selected sets, accumulated probabilities, RNG."""

    selected: set[int]
    alpha_p: list[float]
    rng: SplitMix64

    @classmethod
    def initial(cls, system: SetSystem, seed: int = 0) -> "OnlineState":
        return cls(set(), [0.0] * system.num_sets, SplitMix64(seed))


@dataclass
class RunResult:
    total_cost: float
    trace: list[StepRecord]
    final_state: OnlineState
    variant: Variant = Variant.UNIVERSAL
    seed: int = 0

    def trace_jsonl(self) -> bytes:
        return trace_to_jsonl(self.trace)


def stat(candidates: Iterable[tuple[int, float]], j: int) -> float:
    """Cost of the ``j``-th cheapest candidate under (cost, set_id) order."""
    ordered = sorted(candidates, key=lambda c: (c[1], c[0]))
    if not 1 <= j <= len(ordered):
        raise ValueError(f"cannot pick {j} sets from {len(ordered)} candidates")
    return ordered[j - 1][1]


def _check_variant(system: SetSystem, variant) -> Variant:
    variant = Variant(variant)
    if variant is Variant.UNWEIGHTED_K and not system.is_unit_cost:
        raise InstanceError("the unweighted-k variant requires every set cost to be 1")
    return variant


def process_element(system: SetSystem, state: OnlineState, i: int,
                    variant=Variant.UNIVERSAL) -> StepRecord:
    """Handle the arrival of element ``i``; mutates ``state``."""
    variant = Variant(variant)
    covering = system.element_sets[i]
    selected = state.selected
    k = system.k
    deficit = k - sum(1 for s in covering if s in selected)
    if deficit <= 0:
        return StepRecord(i, deficit, None, (), ())

    costs = system.cost_of
    candidates = [s for s in covering if s not in selected]
    if len(candidates) < deficit:
        raise EngineError(f"element {i} has {len(candidates)} candidates for deficit {deficit}")
    inv_freq = 1.0 / len(covering)
    if variant is Variant.UNIVERSAL:
        mu = stat(((s, costs[s]) for s in candidates), deficit)
    else:
        mu = 1.0
    mu = float(mu)

    alpha_p = state.alpha_p
    rng = state.rng
    draws = []
    for s in candidates:
        ap = alpha_p[s]
        if variant is Variant.UNIVERSAL:
            p = (mu / costs[s]) * (ap + inv_freq)
        else:
            p = min(ap + deficit * inv_freq, 1.0)
        alpha_p[s] = ap + p
        p_used = min(p, 1.0)
        hit = rng.uniform() < p_used
        if hit:
            selected.add(s)
        draws.append(SetDraw(s, float(p), float(p_used), hit))

    remaining = k - sum(1 for s in covering if s in selected)
    greedy = []
    for _ in range(remaining):
        pool = [s for s in covering if s not in selected]
        if not pool:
            raise EngineError(f"element {i} cannot reach coverage {k}")
        best = min(pool, key=lambda s: (costs[s], s))
        selected.add(best)
        greedy.append(best)
    return StepRecord(i, deficit, mu, tuple(draws), tuple(greedy))


def total_cost(system: SetSystem, selected: Iterable[int]) -> float:
    return math.fsum(system.sets[s].cost for s in sorted(selected))


class OnlineSession:
    """Incremental driver over one ``OnlineState``.

    Exposes ``selected`` and ``process`` so adaptive adversaries can probe it.
    """

    def __init__(self, system: SetSystem, variant=Variant.UNIVERSAL, seed: int = 0):
        self.system = system
        self.variant = _check_variant(system, variant)
        self.seed = seed
        self.state = OnlineState.initial(system, seed)
        self.trace: list[StepRecord] = []

    @property
    def selected(self) -> frozenset[int]:
        return frozenset(self.state.selected)

    def process(self, element: int) -> StepRecord:
        if self.system.frequency(element) < self.system.k:
            raise InstanceError(
                f"element {element} in {self.system.frequency(element)} < {self.system.k} sets"
            )
        record = process_element(self.system, self.state, element, self.variant)
        self.trace.append(record)
        return record

    def result(self) -> RunResult:
        return RunResult(total_cost(self.system, self.state.selected), list(self.trace),
                         self.state, self.variant, self.seed)


def run(system: SetSystem, sequence: Sequence[int], variant=Variant.UNIVERSAL, seed: int = 0,
        allow_duplicates=False) -> RunResult:
    """Run the online algorithm over ``sequence`` in order."""
    sequence = check_instance(system, sequence, allow_duplicates=allow_duplicates)
    session = OnlineSession(system, variant, seed)
    for i in sequence:
        session.process(i)
    return session.result()


def trace_to_jsonl(trace: Iterable[StepRecord]) -> bytes:
    return "".join(r.to_json() + "\n" for r in trace).encode("utf-8")


def trace_from_jsonl(data: bytes | str) -> list[StepRecord]:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return [StepRecord.from_json(line) for line in data.splitlines() if line.strip()]


@dataclass
class ReplayState:
    selected: set[int] = field(default_factory=set)
    alpha_p: list[float] = field(default_factory=list)


def replay(system: SetSystem, trace: Iterable[StepRecord], variant=Variant.UNIVERSAL,
           on_step=None) -> ReplayState:
    """Rebuild the run state from a trace, checking every recorded quantity.

    Random outcomes are taken from the trace; everything else (deficits,
    mu, probabilities, greedy choices) is recomputed and must match exactly.
    ``on_step(record, state)`` is called before each record is applied.
    """
    variant = _check_variant(system, variant)
    state = ReplayState(set(), [0.0] * system.num_sets)
    costs = system.cost_of
    for pos, rec in enumerate(trace):
        if on_step is not None:
            on_step(rec, state)
        covering = system.element_sets[rec.element]
        deficit = system.k - sum(1 for s in covering if s in state.selected)
        if deficit != rec.deficit_before:
            raise TraceMismatch(f"step {pos}: deficit {rec.deficit_before} != {deficit}")
        if deficit <= 0:
            if rec.per_set or rec.greedy_selected:
                raise TraceMismatch(f"step {pos}: covered element changed state")
            continue
        candidates = [s for s in covering if s not in state.selected]
        if [d.set_id for d in rec.per_set] != candidates:
            raise TraceMismatch(f"step {pos}: candidate sets differ")
        inv_freq = 1.0 / len(covering)
        if variant is Variant.UNIVERSAL:
            mu = float(stat(((s, costs[s]) for s in candidates), deficit))
        else:
            mu = 1.0
        if rec.mu != mu:
            raise TraceMismatch(f"step {pos}: mu {rec.mu} != {mu}")
        for d in rec.per_set:
            ap = state.alpha_p[d.set_id]
            if variant is Variant.UNIVERSAL:
                p = (mu / costs[d.set_id]) * (ap + inv_freq)
            else:
                p = min(ap + deficit * inv_freq, 1.0)
            if d.p_computed != p or d.p_used != min(p, 1.0):
                raise TraceMismatch(f"step {pos}: probability of set {d.set_id} differs")
            if d.p_used >= 1.0 and not d.selected_randomly:
                raise TraceMismatch(f"step {pos}: certain selection of set {d.set_id} missing")
            state.alpha_p[d.set_id] = ap + p
            if d.selected_randomly:
                state.selected.add(d.set_id)
        for s in rec.greedy_selected:
            pool = [t for t in covering if t not in state.selected]
            if not pool or s != min(pool, key=lambda t: (costs[t], t)):
                raise TraceMismatch(f"step {pos}: greedy choice {s} is not a cheapest candidate")
            state.selected.add(s)
        if system.k - sum(1 for s in covering if s in state.selected) > 0:
            raise TraceMismatch(f"step {pos}: element {rec.element} left under-covered")
    return state


@dataclass
class Diagnostics:
    """Per-element and per-set analysis quantities reconstructed from a trace.

    Attributes
    ----------
    xi : ndarray, shape (steps,)
        Sum of accumulated probabilities over covering sets outside the
        optimum, at the moment each element arrived.
    alpha : ndarray of int, shape (steps,)
        Number of already-selected covering sets outside the optimum at
        that moment.
    potential : ndarray, shape (steps + 1, num_sets)
        ``log2(m * alpha_p[S] + 1)`` before any step (row 0) and after
        each step.
    """

    xi: np.ndarray
    alpha: np.ndarray
    potential: np.ndarray


def diagnostics(result: RunResult, system: SetSystem, optimum: Iterable[int]) -> Diagnostics:
    optimum = frozenset(optimum)
    for rec in result.trace:
        got = sum(1 for s in system.element_sets[rec.element] if s in optimum)
        if got < system.k:
            raise ValueError(f"optimum covers element {rec.element} only {got} < {system.k} times")
    m = stats(system).m
    xi, alpha, rows = [], [], []

    def before(rec, state):
        outside = [s for s in system.element_sets[rec.element] if s not in optimum]
        xi.append(math.fsum(state.alpha_p[s] for s in outside))
        alpha.append(sum(1 for s in outside if s in state.selected))
        rows.append(np.log2(m * np.asarray(state.alpha_p) + 1.0))

    final = replay(system, result.trace, result.variant, on_step=before)
    rows.append(np.log2(m * np.asarray(final.alpha_p) + 1.0))
    return Diagnostics(np.array(xi, dtype=float), np.array(alpha, dtype=int),
                       np.vstack(rows) if rows else np.zeros((1, system.num_sets)))
