"""Extractor checks on bipartite graphs.

The worst test set Y for a fixed left set S is the set of right vertices that
S over-hits, so the maximal deviation over all Y is the total-variation
distance between the edge distribution of S and the uniform distribution on
the right part. That closed form is what ``deviation`` computes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from lowcon.bitgraph import BipartiteGraph, indegrees
from lowcon.rational import ceil_log2, format_fraction, to_fraction

__all__ = [
    "DeviationReport",
    "EnumerationBudgetError",
    "deviation",
    "is_extractor_exhaustive",
    "is_extractor_sampled",
    "suggested_degree",
    "DEFAULT_ENUMERATION_BUDGET",
]

DEFAULT_ENUMERATION_BUDGET = 1_000_000


class EnumerationBudgetError(RuntimeError):
    """Raised when an exhaustive check would enumerate too many sets."""


@dataclass(frozen=True)
class DeviationReport:
    left_set: tuple
    deviation: Fraction
    worst_Y: tuple

    def to_dict(self) -> dict:
        return {
            "set": list(self.left_set),
            "deviation": format_fraction(self.deviation),
            "worst_Y": list(self.worst_Y),
        }


def _deviation_of(g: BipartiteGraph, s) -> tuple[Fraction, np.ndarray]:
    deg = indegrees(g, s)
    total = g.params.D * len(s)
    M = g.params.M
    # |deg/total - 1/M| summed, scaled by total*M to stay in integers
    scaled = np.abs(deg * M - total)
    return Fraction(int(scaled.sum()), 2 * total * M), deg * M > total


def deviation(g: BipartiteGraph, s: Iterable[int]) -> DeviationReport:
    members = tuple(sorted(set(int(x) for x in s)))
    if not members:
        raise ValueError("deviation of the empty set is undefined")
    dev, over = _deviation_of(g, members)
    return DeviationReport(members, dev, tuple(int(y) for y in np.flatnonzero(over)))


def is_extractor_exhaustive(g: BipartiteGraph, set_size: int, eps,
                            budget: int = DEFAULT_ENUMERATION_BUDGET) -> bool:
    """True iff every left set of exactly ``set_size`` vertices deviates by < eps."""
    eps = to_fraction(eps)
    N = g.params.N
    if not 1 <= set_size <= N:
        raise ValueError(f"set_size must lie in [1, {N}]")
    count = math.comb(N, set_size)
    if count > budget:
        raise EnumerationBudgetError(
            f"C({N}, {set_size}) = {count} sets exceeds the budget of {budget}; "
            "use is_extractor_sampled")
    for s in itertools.combinations(range(N), set_size):
        if _deviation_of(g, s)[0] >= eps:
            return False
    return True


def is_extractor_sampled(g: BipartiteGraph, set_size: int, eps, trials: int,
                         rng_seed: int) -> tuple[bool, Fraction]:
    """Monte-Carlo version: a False verdict is conclusive, True is only evidence."""
    eps = to_fraction(eps)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    N = g.params.N
    if not 1 <= set_size <= N:
        raise ValueError(f"set_size must lie in [1, {N}]")
    rng = np.random.default_rng(rng_seed)
    worst = Fraction(0)
    for _ in range(trials):
        s = rng.choice(N, size=set_size, replace=False)
        worst = max(worst, _deviation_of(g, s)[0])
    return worst < eps, worst


def suggested_degree(n: int, k: int, eps, c0: int = 1) -> int:
    """ceil(log2(n - k) + 2 log2(1/eps)) + c0, evaluated exactly."""
    eps = to_fraction(eps)
    if n <= k:
        raise ValueError(f"need n > k, got n={n}, k={k}")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    return ceil_log2(Fraction(n - k) / (eps * eps)) + c0
