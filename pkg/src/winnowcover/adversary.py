"""Hard-instance constructions for online multicover.

The lifts turn any single-cover base instance (``k = 1``) into a
``k``-multicover instance by adding a forced element ``x`` that lies in
exactly ``k`` extra sets; the extra sets also cover every base element
``k - 1`` times, so the base instance decides the remaining demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from .instance import InstanceError, SetSystem, WeightedSet, check_instance


@dataclass(frozen=True)
class BaseInstance:
    system: SetSystem
    sequence: tuple[int, ...]

    def __post_init__(self):
        if self.system.k != 1:
            raise InstanceError("base instances must have coverage factor 1")
        object.__setattr__(self, "sequence", check_instance(self.system, self.sequence))


@dataclass(frozen=True)
class LiftedInstance:
    """A lifted system plus bookkeeping of what the construction added.

    ``opt_stated`` and ``opt_forced`` are the two candidate optimum costs
    when the base optimum is a single unit set: ``1 + eps`` and ``1 + k*eps``
    for the weighted lift, ``2k`` (an upper bound) for the unweighted one.
    """

    system: SetSystem
    sequence: tuple[int, ...]
    extra_set_ids: tuple[int, ...]
    special_element: int
    padding_elements: tuple[int, ...]
    opt_stated: float
    opt_forced: float


def padding_count(k: int) -> int:
    return math.ceil(math.log2(k + 1))


def _lift(base: BaseInstance, k: int, copies: int, extra_cost: float, base_cost):
    if k < 1:
        raise ValueError("k must be >= 1")
    bsys = base.system
    n_base = bsys.universe_size
    x = copies * n_base
    n_pad = padding_count(k)
    padding = tuple(range(x + 1, x + 1 + n_pad))
    n = x + 1 + n_pad

    extra = [[x] for _ in range(k)]
    for t in range(k):
        code = t + 1  # distinct non-empty subsets of the padding elements
        extra[t].extend(padding[b] for b in range(n_pad) if code >> b & 1)
    for c in range(copies):
        for e in range(n_base):
            g = c * n_base + e
            skip = g % k  # each base element misses exactly one extra set
            for t in range(k):
                if t != skip:
                    extra[t].append(g)

    sets = [WeightedSet(t, extra_cost, tuple(sorted(extra[t]))) for t in range(k)]
    for c in range(copies):
        for s in bsys.sets:
            sets.append(WeightedSet(
                len(sets),
                s.cost if base_cost is None else base_cost,
                tuple(c * n_base + e for e in s.elements),
            ))
    system = SetSystem(n, tuple(sets), k)
    sequence = (x,) + tuple(c * n_base + e for c in range(copies) for e in base.sequence)
    return system, sequence, tuple(range(k)), x, padding


def lift_osc_k(base: BaseInstance, k: int) -> LiftedInstance:
    """``k`` renamed copies of the base plus ``k`` unit-cost extra sets.

    The result has ``k + k*m'`` sets and ``k*n' + 1 + ceil(log2(k+1))``
    elements; ``x`` is presented first, then each copy's sequence in turn.
    """
    system, seq, extra, x, pad = _lift(base, k, copies=k, extra_cost=1.0, base_cost=None)
    return LiftedInstance(system, seq, extra, x, pad, opt_stated=2.0 * k, opt_forced=2.0 * k)


def lift_wosc_k(base: BaseInstance, k: int, epsilon: float) -> LiftedInstance:
    """One copy of the base with unit-cost sets plus ``k`` extra sets of cost ``epsilon``."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    system, seq, extra, x, pad = _lift(base, k, copies=1, extra_cost=float(epsilon), base_cost=1.0)
    return LiftedInstance(system, seq, extra, x, pad,
                          opt_stated=1.0 + epsilon, opt_forced=1.0 + k * epsilon)


def binary_tree_base(depth: int, path: Sequence[int] | None = None, seed=None) -> BaseInstance:
    """Root-to-leaf paths of a complete binary tree of the given depth.

    Elements are tree nodes in heap order (root 0, children ``2v+1``,
    ``2v+2``); set ``j`` holds the nodes on the path to leaf ``j``. The
    sequence walks one root-to-leaf path (``path`` bits, a seeded random
    path, or the leftmost), so the leaf's set alone covers it.

    This family is a simple stand-in with a one-set optimum, not a
    certified lower-bound construction.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    n = 2 ** (depth + 1) - 1
    first_leaf = 2 ** depth - 1
    members = []
    for leaf in range(first_leaf, n):
        v, nodes = leaf, []
        while True:
            nodes.append(v)
            if v == 0:
                break
            v = (v - 1) // 2
        members.append(nodes)
    if path is None:
        path = np.random.default_rng(seed).integers(0, 2, size=depth).tolist() if seed is not None \
            else [0] * depth
    if len(path) != depth:
        raise ValueError(f"path needs {depth} bits")
    v, seq = 0, [0]
    for bit in path:
        v = 2 * v + 1 + int(bit)
        seq.append(v)
    return BaseInstance(SetSystem.from_lists(members, universe_size=n), tuple(seq))


def random_base(num_sets: int, n: int, seed=0, density=0.4) -> BaseInstance:
    """Small random base whose presented elements are all inside set 0."""
    if num_sets < 1 or n < 1:
        raise ValueError("need at least one set and one element")
    rng = np.random.default_rng(seed)
    presented = sorted(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False).tolist())
    members = [presented] + [
        np.flatnonzero(rng.random(n) < density).tolist() for _ in range(num_sets - 1)
    ]
    order = rng.permutation(len(presented))
    return BaseInstance(SetSystem.from_lists(members, universe_size=n),
                        tuple(presented[j] for j in order))


class Probe(Protocol):
    @property
    def selected(self) -> frozenset[int]: ...

    def process(self, element: int): ...


def adaptive_stress(system: SetSystem, k: int, probe: Probe, rounds: int) -> tuple[int, ...]:
    """Feed ``probe`` the elements it has covered least, one round at a time.

    Each round picks, among elements lying in at least ``k`` sets, the one
    whose covering sets hold the fewest selected sets (ties to the smaller
    id), hands it to the probe and records it. Stops after ``rounds`` or
    once every eligible element already has ``k`` selected covering sets.
    """
    eligible = [i for i in range(system.universe_size) if system.frequency(i) >= k]
    emitted = []
    for _ in range(rounds):
        chosen = probe.selected
        best, best_count = None, None
        for i in eligible:
            count = sum(1 for s in system.element_sets[i] if s in chosen)
            if best_count is None or count < best_count:
                best, best_count = i, count
        if best is None or best_count >= k:
            break
        probe.process(best)
        emitted.append(best)
    return tuple(emitted)
