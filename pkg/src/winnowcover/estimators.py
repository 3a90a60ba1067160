"""scikit-learn style front ends.

``fit(system, sequence)`` replaces the usual ``fit(X, y)``: the set system
plays the role of the feature space and the sequence is the data. Fitted
attributes carry a trailing underscore, so ``check_is_fitted`` and
``clone`` work as usual.
"""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils import check_random_state
from sklearn.utils.validation import check_is_fitted

from .engine import OnlineSession, Variant, _check_variant
from .instance import InstanceError, SetSystem, check_instance
from .offline import exact_optimum, greedy_multicover


def check_system(system) -> SetSystem:
    if not isinstance(system, SetSystem):
        raise TypeError(f"expected a SetSystem, got {type(system).__name__}")
    if system.num_sets == 0:
        raise InstanceError("set system has no sets")
    return system


def _seed_from(random_state) -> int:
    if random_state is None:
        return 0
    if isinstance(random_state, numbers.Integral):
        return int(random_state) & ((1 << 64) - 1)
    return int(check_random_state(random_state).randint(0, 2**63 - 1, dtype=np.int64))


class OnlineMulticover(BaseEstimator):
    """Online multicover by randomized winnowing.

    Parameters
    ----------
    variant : {"universal", "unweighted-k"}
        Probability rule; ``"unweighted-k"`` needs unit costs.
    random_state : int, RandomState or None
        Seed of the SplitMix64 stream driving the random selections.
    allow_duplicates : bool
        Accept sequences that present an element more than once.

    Attributes
    ----------
    selected_ : frozenset of int
    total_cost_ : float
    alpha_p_ : ndarray of shape (num_sets,)
    trace_ : list of StepRecord
    """

    def __init__(self, variant="universal", random_state=0, allow_duplicates=False):
        self.variant = variant
        self.random_state = random_state
        self.allow_duplicates = allow_duplicates

    def fit(self, system, sequence):
        system = check_system(system)
        _check_variant(system, self.variant)
        self.session_ = OnlineSession(system, self.variant, _seed_from(self.random_state))
        return self.partial_fit(system, sequence)

    def partial_fit(self, system, sequence):
        """Present further elements, keeping the current selection."""
        system = check_system(system)
        if not hasattr(self, "session_") or self.session_.system != system:
            self.session_ = OnlineSession(system, self.variant, _seed_from(self.random_state))
        seen = [r.element for r in self.session_.trace]
        sequence = check_instance(system, sequence, allow_duplicates=True)
        if not self.allow_duplicates:
            check_instance(system, seen + list(sequence))
        for i in sequence:
            self.session_.process(i)
        self._sync()
        return self

    def _sync(self):
        result = self.session_.result()
        self.selected_ = frozenset(result.final_state.selected)
        self.total_cost_ = result.total_cost
        self.alpha_p_ = np.array(result.final_state.alpha_p)
        self.trace_ = result.trace
        self.variant_ = Variant(self.variant)

    def coverage(self, elements):
        """Number of selected sets containing each of ``elements``."""
        check_is_fitted(self, "selected_")
        table = self.session_.system.element_sets
        return np.array([sum(1 for s in table[i] if s in self.selected_) for i in elements])


class _OfflineMulticover(BaseEstimator):
    def fit(self, system, sequence):
        system = check_system(system)
        sequence = check_instance(system, sequence)
        cover = self._solve(system, sequence)
        self.selected_ = cover.set_ids
        self.total_cost_ = cover.cost
        return self


class GreedyMulticover(_OfflineMulticover):
    """Offline greedy multicover of the presented elements."""

    def _solve(self, system, sequence):
        return greedy_multicover(system, sequence)


class ExactMulticover(_OfflineMulticover):
    """Offline optimum by branch and bound (at most ``max_sets`` relevant sets)."""

    def __init__(self, max_sets=30, node_budget=2_000_000):
        self.max_sets = max_sets
        self.node_budget = node_budget

    def _solve(self, system, sequence):
        return exact_optimum(system, sequence, max_sets=self.max_sets, node_budget=self.node_budget)
