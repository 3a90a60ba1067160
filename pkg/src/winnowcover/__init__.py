"""Online weighted set multicover by randomized winnowing."""

from .engine import OnlineSession, RunResult, StepRecord, Variant, diagnostics, process_element, run, stat
from .estimators import ExactMulticover, GreedyMulticover, OnlineMulticover
from .instance import (InstanceError, SetSystem, WeightedSet, random_system, read_instance, stats,
                       validate, write_instance)
from .offline import Cover, exact_optimum, greedy_multicover, kappa

__all__ = [
    "Cover", "ExactMulticover", "GreedyMulticover", "InstanceError", "OnlineMulticover",
    "OnlineSession", "RunResult", "SetSystem", "StepRecord", "Variant", "WeightedSet",
    "diagnostics", "exact_optimum", "greedy_multicover", "kappa", "process_element",
    "random_system", "read_instance", "run", "stat", "stats", "validate", "write_instance",
]
__version__ = "0.1.0"
