"""Clots, congested vertices and the low-congesting predicate.

For a left set S the alpha-clot is the set of right vertices receiving more
than alpha*D*K/M edges from S, where K is the fixed bound of the relevant
system (not |S|). A vertex of S is congested when every one of its D edges
lands in the clot. All comparisons are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from lowcon.bitgraph import BipartiteGraph, indegrees
from lowcon.extractor import deviation
from lowcon.rational import format_fraction, to_fraction

__all__ = [
    "ClotSpec",
    "CongestionReport",
    "PeelTrace",
    "alpha_clot",
    "clot_mask",
    "congested_set",
    "congested_within",
    "congestion_report",
    "is_low_congesting",
    "peel",
    "check_lemma3",
]


@dataclass(frozen=True)
class ClotSpec:
    alpha: Fraction
    K: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", to_fraction(self.alpha))
        if self.alpha <= 1:
            raise ValueError("alpha must exceed 1")
        if self.K < 1:
            raise ValueError("K must be at least 1")

    def threshold(self, g: BipartiteGraph) -> Fraction:
        return self.alpha * g.params.D * self.K / g.params.M


@dataclass(frozen=True)
class CongestionReport:
    clot: frozenset
    congested: frozenset
    threshold: Fraction

    def to_dict(self) -> dict:
        return {
            "clot": sorted(self.clot),
            "congested": sorted(self.congested),
            "threshold": format_fraction(self.threshold),
        }


@dataclass(frozen=True)
class PeelTrace:
    levels: tuple
    terminated: bool

    def to_dict(self) -> dict:
        return {"levels": [sorted(level) for level in self.levels], "terminated": self.terminated}


def clot_mask(g: BipartiteGraph, s, spec: ClotSpec) -> np.ndarray:
    """Boolean vector over the right part marking the clot of s."""
    deg = indegrees(g, s)
    a = spec.alpha
    # deg > alpha*D*K/M  <=>  deg*M*den > num*D*K
    return deg * g.params.M * a.denominator > a.numerator * g.params.D * spec.K


def alpha_clot(g: BipartiteGraph, s: Iterable[int], spec: ClotSpec) -> frozenset:
    s = list(s)
    return frozenset(int(y) for y in np.flatnonzero(clot_mask(g, s, spec)))


def congested_within(g: BipartiteGraph, subset: Iterable[int], s: Iterable[int],
                     spec: ClotSpec) -> frozenset:
    """Members of ``subset`` whose edges all land in the clot computed for ``s``."""
    mask = clot_mask(g, list(s), spec)
    return frozenset(int(x) for x in subset if mask[g.ids[int(x)]].all())


def congested_set(g: BipartiteGraph, s: Iterable[int], spec: ClotSpec) -> frozenset:
    s = list(s)
    return congested_within(g, s, s, spec)


def congestion_report(g: BipartiteGraph, s: Iterable[int], spec: ClotSpec) -> CongestionReport:
    s = list(s)
    mask = clot_mask(g, s, spec)
    clot = frozenset(int(y) for y in np.flatnonzero(mask))
    congested = frozenset(int(x) for x in s if mask[g.ids[int(x)]].all())
    return CongestionReport(clot, congested, spec.threshold(g))


def is_low_congesting(g: BipartiteGraph, system, alpha, beta):
    """Check |congested(S)| < beta*K for every S of ``system``.

    Returns ``(True, None)`` or ``(False, first_failing_set)``.
    """
    beta = to_fraction(beta)
    spec = ClotSpec(alpha, system.K)
    bound = beta * system.K
    for s in system.sets:
        if len(congested_set(g, s, spec)) >= bound:
            return False, s
    return True, None


def peel(g: BipartiteGraph, s: Iterable[int], spec: ClotSpec, max_iter: int) -> PeelTrace:
    """Iterate the congested-set map with a fixed threshold; at most ``max_iter`` levels."""
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    levels = [frozenset(int(x) for x in s)]
    while levels[-1] and len(levels) < max_iter:
        levels.append(congested_set(g, levels[-1], spec))
    return PeelTrace(tuple(levels), terminated=not levels[-1])


def check_lemma3(g: BipartiteGraph, s: Iterable[int], alpha, K: int | None = None) -> bool:
    """(alpha-1)*|congested| <= alpha*eps_S*K for a set of exactly K vertices."""
    K = g.params.K if K is None else K
    members = sorted(set(int(x) for x in s))
    if len(members) != K:
        raise ValueError(f"set has {len(members)} vertices, expected exactly K={K}")
    alpha = to_fraction(alpha)
    eps_s = deviation(g, members).deviation
    congested = congested_set(g, members, ClotSpec(alpha, K))
    return len(congested) * (alpha - 1) <= alpha * eps_s * K
