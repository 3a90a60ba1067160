"""Weighted set systems, online element sequences and their file format."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np


class InstanceError(ValueError):
    """A set system or sequence violates a structural invariant."""


class InstanceFormatError(InstanceError):
    """An instance document could not be parsed."""

    def __init__(self, message, line=None, column=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}" + (f", column {column}" if column else ""))
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({'; '.join(where)})" if where else message)
        self.line = line
        self.column = column
        self.field = field


class WeightedSet(NamedTuple):
    id: int
    cost: float
    elements: tuple[int, ...]


@dataclass(frozen=True)
class SetSystem:
    """Immutable family of weighted subsets of ``range(universe_size)``.

    Parameters
    ----------
    universe_size : int
        Number of elements ``n``; element ids are ``0 .. n-1``.
    sets : sequence of WeightedSet
        Set ``j`` must carry ``id == j``; elements sorted and duplicate-free.
    k : int
        Coverage factor.
    """

    universe_size: int
    sets: tuple[WeightedSet, ...]
    k: int = 1

    def __post_init__(self):
        sets = tuple(
            WeightedSet(int(s[0]), float(s[1]), tuple(int(e) for e in s[2]))
            for s in self.sets
        )
        object.__setattr__(self, "sets", sets)
        problems = _structural_violations(self.universe_size, sets, self.k)
        if problems:
            raise InstanceError("; ".join(problems))

    @classmethod
    def from_lists(cls, members, costs=None, k=1, universe_size=None):
        """Build a system from a list of element lists (ids assigned by position)."""
        members = [sorted(set(m)) for m in members]
        if costs is None:
            costs = [1.0] * len(members)
        if universe_size is None:
            universe_size = 1 + max((e for m in members for e in m), default=-1)
        sets = [WeightedSet(j, float(c), tuple(m)) for j, (c, m) in enumerate(zip(costs, members))]
        return cls(universe_size, tuple(sets), k)

    @property
    def num_sets(self) -> int:
        return len(self.sets)

    @cached_property
    def costs(self) -> np.ndarray:
        out = np.array([s.cost for s in self.sets], dtype=float)
        out.flags.writeable = False
        return out

    @cached_property
    def cost_of(self) -> tuple[float, ...]:
        """Set costs as plain floats, indexed by set id."""
        return tuple(s.cost for s in self.sets)

    @cached_property
    def element_sets(self) -> tuple[tuple[int, ...], ...]:
        """``element_sets[i]`` is the ascending tuple of ids of sets containing ``i``."""
        table = [[] for _ in range(self.universe_size)]
        for s in self.sets:
            for e in s.elements:
                table[e].append(s.id)
        return tuple(tuple(row) for row in table)

    @cached_property
    def is_unit_cost(self) -> bool:
        return all(s.cost == 1.0 for s in self.sets)

    def frequency(self, element: int) -> int:
        return len(self.element_sets[element])

    def with_k(self, k: int) -> "SetSystem":
        return SetSystem(self.universe_size, self.sets, k)


class InstanceStats(NamedTuple):
    m: int
    d: int


def _structural_violations(n, sets, k) -> list[str]:
    out = []
    if not isinstance(n, (int, np.integer)) or n < 1:
        out.append(f"universe_size must be a positive integer, got {n!r}")
        n = 0
    if not isinstance(k, (int, np.integer)) or k < 1:
        out.append(f"coverage factor k must be a positive integer, got {k!r}")
    for pos, s in enumerate(sets):
        if s.id != pos:
            out.append(f"set at position {pos} has id {s.id}; ids must be 0..{len(sets) - 1}")
        if not (math.isfinite(s.cost) and s.cost > 0):
            out.append(f"set {s.id} has non-positive or non-finite cost {s.cost!r}")
        els = s.elements
        if any(b <= a for a, b in zip(els, els[1:])):
            out.append(f"set {s.id} elements are not strictly ascending")
        if els and (els[0] < 0 or els[-1] >= n):
            out.append(f"set {s.id} has elements outside [0, {n})")
    return out


def validate(system: SetSystem, sequence: Iterable[int], allow_duplicates=False) -> list[str]:
    """List every reason ``sequence`` cannot be multicovered online.

    An empty list means the instance is valid. Never raises.
    """
    problems = _structural_violations(system.universe_size, system.sets, system.k)
    if problems:
        return problems
    seen = set()
    for pos, i in enumerate(sequence):
        if not isinstance(i, (int, np.integer)) or not 0 <= i < system.universe_size:
            problems.append(f"sequence[{pos}] = {i!r} is not an element of the universe")
            continue
        if i in seen and not allow_duplicates:
            problems.append(f"element {i} presented more than once (sequence[{pos}])")
        seen.add(i)
        f = system.frequency(i)
        if f < system.k:
            problems.append(f"element {i} in {f} < {system.k} sets")
    return problems


def check_instance(system: SetSystem, sequence: Iterable[int], allow_duplicates=False) -> tuple[int, ...]:
    """Validate and return the sequence as a tuple; raise ``InstanceError`` on failure."""
    sequence = tuple(int(i) for i in sequence)
    problems = validate(system, sequence, allow_duplicates=allow_duplicates)
    if problems:
        raise InstanceError("; ".join(problems))
    return sequence


def stats(system: SetSystem) -> InstanceStats:
    """Maximum element frequency ``m`` and maximum set size ``d``."""
    if not system.sets:
        raise InstanceError("stats undefined for an empty set family")
    m = max((len(r) for r in system.element_sets), default=0)
    d = max(len(s.elements) for s in system.sets)
    return InstanceStats(m, d)


def _parse_cost_model(cost_model):
    if cost_model == "unit":
        return None
    if isinstance(cost_model, str) and cost_model.startswith("uniform"):
        _, lo, hi = cost_model.split(":")
        cost_model = ("uniform", float(lo), float(hi))
    if isinstance(cost_model, (tuple, list)) and len(cost_model) == 3 and cost_model[0] == "uniform":
        lo, hi = float(cost_model[1]), float(cost_model[2])
        if not 0 < lo <= hi:
            raise ValueError(f"uniform cost bounds need 0 < lo <= hi, got {lo}, {hi}")
        return lo, hi
    raise ValueError(f"unknown cost model {cost_model!r}; use 'unit' or ('uniform', lo, hi)")


def random_system(n, num_sets, density, cost_model="unit", k=1, seed=0, max_attempts=100):
    """Random set system where every element lies in at least ``k`` sets.

    Each set contains each element independently with probability
    ``density``. An element whose membership column falls short of ``k``
    sets is redrawn, at most ``max_attempts`` times.

    Returns
    -------
    system : SetSystem
    sequence : tuple of int
        A uniformly random permutation of the universe.
    """
    if n < 1 or num_sets < 1 or k < 1:
        raise ValueError("n, num_sets and k must be positive")
    if not 0 < density <= 1:
        raise ValueError(f"density must lie in (0, 1], got {density}")
    bounds = _parse_cost_model(cost_model)
    if k > num_sets:
        raise InstanceError(f"coverage k={k} infeasible with only {num_sets} sets")
    rng = np.random.default_rng(seed)
    member = np.zeros((num_sets, n), dtype=bool)
    for e in range(n):
        for _ in range(max_attempts):
            col = rng.random(num_sets) < density
            if col.sum() >= k:
                member[:, e] = col
                break
        else:
            raise InstanceError(
                f"element {e} reached fewer than k={k} sets after {max_attempts} attempts"
            )
    if bounds is None:
        costs = [1.0] * num_sets
    else:
        costs = rng.uniform(bounds[0], bounds[1], size=num_sets).tolist()
    members = [np.flatnonzero(row).tolist() for row in member]
    system = SetSystem.from_lists(members, costs, k=k, universe_size=n)
    sequence = tuple(int(i) for i in rng.permutation(n))
    return system, sequence


def to_document(system: SetSystem, sequence: Sequence[int]) -> dict:
    return {
        "universe_size": system.universe_size,
        "k": system.k,
        "sets": [
            {"id": s.id, "cost": s.cost, "elements": list(s.elements)} for s in system.sets
        ],
        "sequence": [int(i) for i in sequence],
    }


def write_instance(system: SetSystem, sequence: Sequence[int]) -> bytes:
    """Serialize to the UTF-8 JSON interchange format."""
    return (json.dumps(to_document(system, sequence), indent=1) + "\n").encode("utf-8")


def _expect(obj, key, kind, where):
    if key not in obj:
        raise InstanceFormatError("missing required field", field=f"{where}{key}")
    value = obj[key]
    ok = isinstance(value, kind) and not (kind is not bool and isinstance(value, bool))
    if not ok:
        raise InstanceFormatError(f"wrong type {type(value).__name__}", field=f"{where}{key}")
    return value


def from_document(doc) -> tuple[SetSystem, tuple[int, ...]]:
    if not isinstance(doc, dict):
        raise InstanceFormatError("top-level value must be an object")
    n = _expect(doc, "universe_size", int, "")
    k = _expect(doc, "k", int, "")
    raw_sets = _expect(doc, "sets", list, "")
    raw_seq = _expect(doc, "sequence", list, "")
    sets = []
    for pos, s in enumerate(raw_sets):
        where = f"sets[{pos}]."
        if not isinstance(s, dict):
            raise InstanceFormatError("set entry must be an object", field=f"sets[{pos}]")
        sid = _expect(s, "id", int, where)
        cost = _expect(s, "cost", (int, float), where)
        elements = _expect(s, "elements", list, where)
        for j, e in enumerate(elements):
            if not isinstance(e, int) or isinstance(e, bool):
                raise InstanceFormatError("element ids must be integers", field=f"{where}elements[{j}]")
        sets.append(WeightedSet(sid, float(cost), tuple(elements)))
    for j, e in enumerate(raw_seq):
        if not isinstance(e, int) or isinstance(e, bool):
            raise InstanceFormatError("sequence entries must be integers", field=f"sequence[{j}]")
    sets.sort(key=lambda s: s.id)
    system = SetSystem(n, tuple(sets), k)
    # duplicates may be stored; coverage of every listed element may not be violated
    return system, check_instance(system, raw_seq, allow_duplicates=True)


def read_instance(data: bytes | str) -> tuple[SetSystem, tuple[int, ...]]:
    """Parse an instance document; structural problems raise ``InstanceError``."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return from_document(doc)
