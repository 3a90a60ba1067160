"""Closed-form competitive-ratio bounds and lower-bound reference curves.

All logarithms written ``log2`` are real-valued; ``ln`` is natural.
"""

from __future__ import annotations

import math
from typing import NamedTuple

TWO_E = 2.0 * math.e


class BoundInputs(NamedTuple):
    m: int
    d: int
    k: int = 1
    kappa: float = 1.0
    c_ratio: float = 1.0


def _check_m(m):
    if m < 2:
        raise ValueError(f"bounds need maximum frequency m >= 2, got {m}")


def theorem1_bound(m, d, k=1, kappa=1.0) -> float:
    """``1 + log2(m) * max(5, 2 + ln(d / (kappa * log2 m)))``.

    ``k`` does not enter directly; it acts through ``kappa``.
    """
    _check_m(m)
    if d < 1 or kappa <= 0:
        raise ValueError("need d >= 1 and kappa > 0")
    lg = math.log2(m)
    return 1.0 + lg * max(5.0, 2.0 + math.log(d / (kappa * lg)))


def corollary2_bound(m, d, k=1, c_ratio=1.0) -> float:
    """Theorem-1 bound with ``kappa = max(1, k / c_ratio)``."""
    if c_ratio < 1:
        raise ValueError(f"c_ratio must be >= 1, got {c_ratio}")
    return theorem1_bound(m, d, k, max(1.0, k / c_ratio))


def theorem7_bound(m, d) -> float:
    """Bound for unit costs and ``k = 1``."""
    _check_m(m)
    if d < 1:
        raise ValueError("need d >= 1")
    if m > 15:
        return math.log2(m) * math.log(d)
    return (0.5 + math.log2(m)) * (1.0 + math.log(d))


def theorem10_bound(m, d, k) -> float:
    """Bound for the unweighted-k variant; first branch when ``k <= 2e d``."""
    _check_m(m)
    if d < 1 or k < 1:
        raise ValueError("need d >= 1 and k >= 1")
    lg = math.log2(m)
    if k <= TWO_E * d:
        return (0.5 + lg) * (2.0 * math.log(d / k) + 3.4) + 1.0 + 2.0 * lg
    return 1.0 + 2.0 * lg


def lemma11_lower_expr(m, n, k=1, weighted=False, delta=0.1):
    """Deterministic lower-bound expression with hidden constant 1, base-2 logs.

    Returns
    -------
    value : float
        ``log a * log b / (log log a + log log b)`` with ``a = m/k, b = n/k``
        (unweighted) or ``a = m, b = n`` (weighted).
    in_range : bool
        Whether ``(m, n, k)`` lie in the parameter window of the matching
        lifting construction.
    """
    a, b = (m, n) if weighted else (m / k, n / k)
    if a < 2 or b < 2:
        raise ValueError(f"need arguments >= 2, got {a:g} and {b:g}")
    la, lb = math.log2(a), math.log2(b)
    denom = math.log2(la) + math.log2(lb)
    if denom <= 0:
        raise ValueError("iterated logarithms sum to a non-positive value")
    value = la * lb / denom
    expo = 0.5 - delta
    if weighted:
        rest = n - 1 - math.ceil(math.log2(k + 1))
        in_range = (
            rest >= 1
            and k + math.log2(rest) <= m
            # m <= k + exp(rest ** expo), compared in log space
            and (m <= k or math.log(m - k) <= rest ** expo)
            and k < 0.5 * min(m, 2.0 ** min(n - 1, 1023))
        )
    else:
        in_range = (
            n / (k + 1) > 0
            and k * math.log2(n / (k + 1)) <= m
            and math.log(m) <= math.log(k + 1) + (n / k) ** expo
            and k < min(m, n)
        )
    return value, bool(in_range)


def all_bounds(m, d, k=1, kappa=None, c_ratio=1.0) -> dict[str, float]:
    """Every applicable bound, labelled; ``kappa`` defaults to ``max(1, k / c_ratio)``."""
    if kappa is None:
        kappa = max(1.0, k / c_ratio)
    out = {
        "theorem1": theorem1_bound(m, d, k, kappa),
        "corollary2": corollary2_bound(m, d, k, c_ratio),
    }
    if k == 1:
        out["theorem7"] = theorem7_bound(m, d)
    out["theorem10"] = theorem10_bound(m, d, k)
    return out
