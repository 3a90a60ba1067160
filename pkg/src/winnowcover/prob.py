"""Exact Poisson-binomial probabilities and the numeric facts behind the analysis.

Covers the success-count distribution of independent 0-1 trials, the two
tail lemmas checked against it, the charge estimate ``C(psi, l, x)`` with
its tabulated maxima, and the worst-case expectation ``F`` of the
potential ``log2(alpha_p + z)``.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

LOG2_E = math.log2(math.e)
E_MINUS_3 = math.exp(-3.0)


class PreconditionError(ValueError):
    pass


def _probs(tv) -> np.ndarray:
    p = np.asarray(tv, dtype=float).ravel()
    if not np.all((p >= 0.0) & (p <= 1.0)):
        raise ValueError("trial probabilities must lie in [0, 1]")
    return p


def poisson_binomial(tv: Sequence[float]) -> np.ndarray:
    """PMF of the number of successes, ``mass[a] = Pr[s = a]`` for ``a = 0..N``."""
    p = _probs(tv)
    mass = np.zeros(len(p) + 1)
    mass[0] = 1.0
    for n, x in enumerate(p, start=1):
        mass[1:n + 1] = mass[1:n + 1] * (1.0 - x) + mass[0:n] * x
        mass[0] *= 1.0 - x
    return mass


def enumerate_pmf(tv: Sequence[float]) -> np.ndarray:
    """Same PMF by summing over all ``2**N`` outcome vectors."""
    p = _probs(tv)
    n = len(p)
    if n > 20:
        raise ValueError("enumeration limited to N <= 20")
    bits = ((np.arange(1 << n)[:, None] >> np.arange(n)) & 1).astype(bool)
    weights = np.where(bits, p, 1.0 - p).prod(axis=1)
    return np.bincount(bits.sum(axis=1), weights=weights, minlength=n + 1)


def check_lemma12(tv, a: int) -> bool:
    """Whether ``Pr[s = a] > Pr[s = a - 1]``; requires ``0 < 2a <= X + 1``."""
    p = _probs(tv)
    X = float(p.sum())
    if not (a >= 1 and 2 * a <= X + 1):
        raise PreconditionError(f"need 0 < 2a <= X + 1, got a={a}, X={X:g}")
    if not np.any((p > 0) & (p < 1)):
        raise PreconditionError("need at least one probability strictly inside (0, 1)")
    mass = poisson_binomial(p)
    return bool(mass[a] > mass[a - 1])


class Lemma13Check(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def check_lemma13(tv, a: int) -> Lemma13Check:
    """Compare ``Pr[s <= a]`` with ``exp(-X) X**a / a!``; requires ``0 <= a <= X/2``."""
    p = _probs(tv)
    X = float(p.sum())
    if not 0 <= a <= X / 2:
        raise PreconditionError(f"need 0 <= a <= X/2, got a={a}, X={X:g}")
    mass = poisson_binomial(p)
    lhs = math.fsum(mass[: a + 1])
    rhs = math.exp(-X + a * math.log(X) - math.lgamma(a + 1)) if X > 0 else float(a == 0)
    return Lemma13Check(lhs, rhs, lhs < rhs)


def c_function(psi: float, ell: int, x: float) -> float:
    """``exp(-x) * (x**(l-1)/(l-1)! * (x - l*psi) + psi * sum_{j<=l-2} x**j/j!)``.

    The terms ``exp(-x) x**j / j!`` are built by successive multiplication,
    so no factorial or large power is ever formed.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    term = math.exp(-x)
    partial = 0.0
    for j in range(ell - 1):
        partial += term
        term *= x / (j + 1)
    return term * (x - ell * psi) + psi * partial


def x0_root(ell: int) -> float:
    """Larger root of ``-x**2 + 3 l x - 2 (l**2 - 1)``; lies in ``(2l, 2l + 2/l)``."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    x = (3 * ell + math.sqrt(ell * ell + 8)) / 2
    assert 2 * ell < x < 2 * ell + 2 / ell
    return x


class TableRow(NamedTuple):
    ell: int
    x0: float
    c: float


def reproduce_table1(psi: float = 2.0, ells=range(40, 1, -1)) -> list[TableRow]:
    rows = []
    for ell in ells:
        x0 = x0_root(ell)
        rows.append(TableRow(ell, x0, c_function(psi, ell, x0)))
    return rows


def f_worst_case(z: float) -> float:
    """Doubling-recursion value of the worst-case potential expectation at start ``z``.

    ``1 + log2 z`` for ``z >= log2 e``; linear in ``z`` on
    ``[log2(e)/2, log2 e)``; below that, one doubling step and recurse.
    """
    if z <= 0:
        raise ValueError("z must be positive")
    scale = 1.0
    acc = 0.0
    while z < LOG2_E / 2:
        acc += scale * z * math.log2(2 * z)
        scale *= 1 - z
        z *= 2
    if z >= LOG2_E:
        tail = 1 + math.log2(z)
    else:
        tail = math.log2(LOG2_E) + 1 - LOG2_E + z
    return acc + scale * tail


def is_z_legal(z: float, p: Sequence[float]) -> bool:
    """Each ``p_i`` lies in ``[0, z + p_1 + ... + p_{i-1}]``; a term ``>= 1`` must be last."""
    base = z
    for pos, x in enumerate(p):
        if not 0 <= x <= base:
            return False
        if x >= 1 and pos != len(p) - 1:
            return False
        base += x
    return True


def f_sequence(z: float, p: Sequence[float]) -> float:
    """Expected ``log2`` of the accumulated value at selection for one probability sequence.

    Step ``i`` selects with probability ``min(p_i, 1)``, recording
    ``log2(z + p_1 + ... + p_i)``; a sequence that never selects records 0.
    """
    if not is_z_legal(z, p):
        raise PreconditionError(f"sequence is not {z}-legal")
    total = 0.0
    survive = 1.0
    acc = z
    for x in p:
        acc += x
        w = min(x, 1.0)
        total += survive * w * math.log2(acc)
        survive *= 1.0 - w
    return total
