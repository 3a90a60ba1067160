"""Offline multicover baselines: exact optimum, greedy, and the kappa statistic."""

from __future__ import annotations

import itertools
import math
from typing import Iterable, NamedTuple

import numpy as np
from scipy.optimize import linprog

from .instance import SetSystem

DEFAULT_MAX_SETS = 30
DEFAULT_NODE_BUDGET = 2_000_000
_REL_TOL = 1e-9
_LP_SLACK = 1e-6  # LP bounds are loosened by this relative amount before pruning


class InfeasibleError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class Cover(NamedTuple):
    set_ids: frozenset[int]
    cost: float


def _cover(system: SetSystem, ids) -> Cover:
    ids = frozenset(ids)
    return Cover(ids, math.fsum(system.sets[s].cost for s in sorted(ids)))


def _demand(system, presented, k):
    presented = sorted(set(int(i) for i in presented))
    k = system.k if k is None else k
    for i in presented:
        if system.frequency(i) < k:
            raise InfeasibleError(f"element {i} lies in {system.frequency(i)} < {k} sets")
    return presented, k


def is_cover(system: SetSystem, set_ids: Iterable[int], presented: Iterable[int], k=None) -> bool:
    chosen = frozenset(set_ids)
    k = system.k if k is None else k
    return all(sum(1 for s in system.element_sets[i] if s in chosen) >= k for i in presented)


def exact_optimum(system: SetSystem, presented: Iterable[int], k: int | None = None,
                  max_sets: int = DEFAULT_MAX_SETS, node_budget: int = DEFAULT_NODE_BUDGET) -> Cover:
    """Minimum-cost ``k``-multicover of ``presented`` by depth-first branch and bound.

    Only sets meeting ``presented`` take part; there may be at most
    ``max_sets`` of them. Sets are branched in ascending id order with the
    include branch first, so among covers whose costs agree to a relative
    1e-9 the lexicographically smallest sorted id tuple is returned.

    Raises
    ------
    InfeasibleError
        Some presented element lies in fewer than ``k`` sets.
    BudgetExceeded
        Too many relevant sets, or the search visited ``node_budget`` nodes.
    """
    presented, k = _demand(system, presented, k)
    if not presented:
        return Cover(frozenset(), 0.0)
    relevant = sorted({s for i in presented for s in system.element_sets[i]})
    if len(relevant) > max_sets:
        raise BudgetExceeded(f"{len(relevant)} relevant sets exceed the exact-search limit {max_sets}")

    pos = {e: j for j, e in enumerate(presented)}
    costs = system.cost_of
    members = {s: tuple(pos[e] for e in system.sets[s].elements if e in pos) for s in relevant}
    # containing[e]: ids of sets holding presented element e, cheapest first
    containing = [sorted(system.element_sets[i], key=lambda s: (costs[s], s)) for i in presented]

    need = [k] * len(presented)
    available = [len(c) for c in containing]
    excluded: set[int] = set()

    greedy = greedy_multicover(system, presented, k)
    best_cost = greedy.cost * (1 + 2 * _REL_TOL) + 2 * _REL_TOL
    best_ids: tuple[int, ...] | None = None
    chosen: list[int] = []
    nodes = 0

    chosen_set: set[int] = set()
    col = {s: j for j, s in enumerate(relevant)}
    incidence = np.zeros((len(presented), len(relevant)))
    for s in relevant:
        incidence[list(members[s]), col[s]] = 1.0
    cost_vec = np.array([costs[s] for s in relevant])
    integral = all(float(c).is_integer() for c in cost_vec)

    def lp_bound():
        # Fractional relaxation over the sets still undecided; inf when infeasible.
        open_cols = [col[s] for s in relevant if s not in excluded and s not in chosen_set]
        rows = [e for e, r in enumerate(need) if r > 0]
        res = linprog(cost_vec[open_cols], A_ub=-incidence[np.ix_(rows, open_cols)],
                      b_ub=-np.array([need[e] for e in rows], dtype=float),
                      bounds=(0.0, 1.0), method="highs")
        if res.status == 2:
            return math.inf
        if res.status != 0:
            return 0.0
        value = res.fun - _LP_SLACK * max(1.0, abs(res.fun))
        return math.ceil(value) if integral else value

    def lower_bound():
        # Every needy element still has to buy need[e] distinct open sets.
        # Charge each set c_S / |S ∩ needy| per element (sums to at most
        # c_S), and compare with the dearest single-element demand.
        share = {}
        total = worst = 0.0
        for e, r in enumerate(need):
            if r <= 0:
                continue
            open_sets = [s for s in containing[e] if s not in excluded and s not in chosen_set]
            worst = max(worst, math.fsum(costs[s] for s in open_sets[:r]))
            for s in open_sets:
                if s not in share:
                    share[s] = costs[s] / sum(1 for x in members[s] if need[x] > 0)
            total += math.fsum(sorted(share[s] for s in open_sets)[:r])
        return max(total, worst)

    def search(idx, cost):
        nonlocal best_cost, best_ids, nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(f"exact search exceeded {node_budget} nodes")
        if all(r <= 0 for r in need):
            if cost < best_cost - _REL_TOL * max(1.0, best_cost):
                best_cost, best_ids = cost, tuple(sorted(chosen))
            return
        if any(r > available[e] for e, r in enumerate(need)):
            return
        cutoff = best_cost - _REL_TOL * max(1.0, best_cost)
        if cost + lower_bound() >= cutoff:
            return
        if idx < len(relevant) and cost + lp_bound() >= cutoff:
            return
        if idx == len(relevant):
            return
        s = relevant[idx]
        useful = any(need[e] > 0 for e in members[s])
        if useful:
            chosen.append(s)
            chosen_set.add(s)
            for e in members[s]:
                need[e] -= 1
            search(idx + 1, math.fsum(costs[t] for t in sorted(chosen)))
            for e in members[s]:
                need[e] += 1
            chosen_set.discard(s)
            chosen.pop()
        excluded.add(s)
        for e in members[s]:
            available[e] -= 1
        search(idx + 1, cost)
        for e in members[s]:
            available[e] += 1
        excluded.discard(s)

    search(0, 0.0)
    if best_ids is None:
        return greedy
    return _cover(system, best_ids)


def enumerate_optimum(system: SetSystem, presented: Iterable[int], k: int | None = None,
                      max_sets: int = 20) -> Cover:
    """Exhaustive oracle over every subset of the relevant sets (small inputs only)."""
    presented, k = _demand(system, presented, k)
    if not presented:
        return Cover(frozenset(), 0.0)
    relevant = sorted({s for i in presented for s in system.element_sets[i]})
    if len(relevant) > max_sets:
        raise BudgetExceeded(f"{len(relevant)} sets too many to enumerate")
    best = None
    for r in range(len(relevant) + 1):
        for ids in itertools.combinations(relevant, r):
            if not is_cover(system, ids, presented, k):
                continue
            c = _cover(system, ids)
            key = tuple(sorted(ids))
            if (best is None or c.cost < best[0] - _REL_TOL * max(1.0, best[0])
                    or (abs(c.cost - best[0]) <= _REL_TOL * max(1.0, best[0]) and key < best[1])):
                best = (c.cost, key)
    return _cover(system, best[1])


def greedy_multicover(system: SetSystem, presented: Iterable[int], k: int | None = None) -> Cover:
    """Greedy multicover: repeatedly take the set with the lowest cost per newly served demand.

    With unit costs this is the classic rule of picking the set that
    covers the most elements still short of ``k``. Ties go to the smaller id.
    """
    presented, k = _demand(system, presented, k)
    need = {i: k for i in presented}
    chosen: set[int] = set()
    costs = system.cost_of
    candidates = sorted({s for i in presented for s in system.element_sets[i]})
    while any(r > 0 for r in need.values()):
        best, best_key = None, None
        for s in candidates:
            if s in chosen:
                continue
            gain = sum(1 for e in system.sets[s].elements if need.get(e, 0) > 0)
            if gain == 0:
                continue
            key = (costs[s] / gain, s)
            if best_key is None or key < best_key:
                best, best_key = s, key
        if best is None:
            raise InfeasibleError("no remaining set serves the outstanding demand")
        chosen.add(best)
        for e in system.sets[best].elements:
            if e in need:
                need[e] -= 1
    return _cover(system, chosen)


def kappa(system: SetSystem, optimum: Cover | Iterable[int], sequence: Iterable[int]) -> float:
    """Smallest ratio ``c(S_i ∩ OPT) / c_S`` over presented ``i`` and ``S`` in ``S_i ∩ OPT``."""
    ids = optimum.set_ids if isinstance(optimum, Cover) else frozenset(optimum)
    costs = system.cost_of
    best = math.inf
    for i in set(sequence):
        inside = [s for s in system.element_sets[i] if s in ids]
        if not inside:
            raise ValueError(f"optimum does not cover presented element {i}")
        total = math.fsum(costs[s] for s in inside)
        best = min(best, total / max(costs[s] for s in inside))
    return best
