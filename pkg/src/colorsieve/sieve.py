"""Inclusion-exclusion extraction of colorful monomials.

For an evaluator ``P`` over classes ``1..k`` and ``J`` a set of classes,

    Q_J(1, ..., 1) = sum over I subset of J of (-1)^|I| * P_{-I}(1, ..., 1)

is the total coefficient of monomials divisible by every class variable in
``J``.  :func:`sieve_full` streams this sum for ``J = [k]`` in polynomial
space; :func:`sieve_shared` evaluates each ``P_{-I}`` once, stores the table
and gets every ``Q_J`` with one subset-sum transform.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional

from scipy.optimize import brentq

from .kirchhoff_poly import SievedEvaluator

MAX_CLASSES = 62
# rough per-entry cost of the shared table (boxed Python int plus list slot)
TABLE_ENTRY_BYTES = 64
DEFAULT_MEMORY_BUDGET = 1 << 30


class SieveCapacityError(MemoryError):
    """The shared table does not fit the memory budget; fall back to
    :func:`sieve_full` over a perfect hash family."""


def _classes(mask: int) -> list[int]:
    out = []
    c = 1
    while mask:
        if mask & 1:
            out.append(c)
        mask >>= 1
        c += 1
    return out


def sieve_full(evaluator: SievedEvaluator) -> int:
    """``Q(1, ..., 1)`` for ``J = {1..k}``: exactly ``2**k`` evaluations, ascending bitmask order."""
    k = evaluator.k
    if k > MAX_CLASSES:
        raise ValueError(f"at most {MAX_CLASSES} classes supported, got {k}")
    total = 0
    for mask in range(1 << k):
        value = evaluator.evaluate_zeroed(_classes(mask))
        if mask.bit_count() & 1:
            total -= value
        else:
            total += value
    return total


def sieve_subset(evaluator: SievedEvaluator, required: Iterable[int]) -> int:
    """``Q_J(1, ..., 1)`` for an arbitrary class set ``J`` (per-J resummation)."""
    required = sorted(set(required))
    total = 0
    for bits in range(1 << len(required)):
        zeroed = [c for i, c in enumerate(required) if bits >> i & 1]
        value = evaluator.evaluate_zeroed(zeroed)
        total += -value if len(zeroed) & 1 else value
    return total


def shared_table(evaluator: SievedEvaluator, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> list[int]:
    """``table[mask] = P_{-I}(1, ..., 1)`` where ``I`` is the class set of ``mask``."""
    t = evaluator.k
    if t > MAX_CLASSES or (1 << t) * TABLE_ENTRY_BYTES > memory_budget:
        raise SieveCapacityError(
            f"2^{t} table entries exceed the memory budget of {memory_budget} bytes; "
            "use sieve_full with a perfect hash family instead"
        )
    return [evaluator.evaluate_zeroed(_classes(mask)) for mask in range(1 << t)]


def subset_sums(table: list[int]) -> list[int]:
    """``out[J] = sum over I subset of J of (-1)^|I| table[I]`` (signed zeta transform)."""
    size = len(table)
    out = [-v if mask.bit_count() & 1 else v for mask, v in enumerate(table)]
    bit = 1
    while bit < size:
        for mask in range(size):
            if mask & bit:
                out[mask] += out[mask ^ bit]
        bit <<= 1
    return out


def shared_witnesses(
    table: list[int], k_target: int, required: Iterable[int] = ()
) -> list[frozenset[int]]:
    """All class sets ``J`` with ``Q_J != 0`` that contain ``required`` plus
    exactly ``k_target`` further classes, in ascending bitmask order."""
    req_mask = 0
    for c in required:
        req_mask |= 1 << (c - 1)
    sums = subset_sums(table)
    want = req_mask.bit_count() + k_target
    return [
        frozenset(_classes(mask))
        for mask, q in enumerate(sums)
        if q != 0 and mask & req_mask == req_mask and mask.bit_count() == want
    ]


def sieve_shared(
    evaluator: SievedEvaluator,
    k_target: int,
    required: Iterable[int] = (),
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> bool:
    """True iff some ``J`` (``required`` plus ``k_target`` more classes) has ``Q_J != 0``.

    Costs exactly ``2**evaluator.k`` evaluations and a table of the same size.
    """
    required = list(required)
    if k_target + len(set(required)) > evaluator.k:
        return False
    table = shared_table(evaluator, memory_budget)
    return bool(shared_witnesses(table, k_target, required))


def alpha_star_equation(alpha: float) -> float:
    """Stationarity condition of ``(1 - 1/a)^(a-1) * 2^a``; zero at the optimum."""
    return alpha * math.log(2 * (alpha - 1) / alpha) + 1


def solve_alpha_star(tol: float = 1e-14) -> float:
    """Color stretch factor minimizing splitter size times sieve cost (about 1.302017)."""
    return brentq(alpha_star_equation, 1.2, 1.4, xtol=tol)


def shared_sieve_base(alpha: Optional[float] = None) -> float:
    """Exponential base ``alpha / (alpha - 1)`` of the shared-table sieve at the optimum."""
    if alpha is None:
        alpha = solve_alpha_star()
    return alpha / (alpha - 1)
