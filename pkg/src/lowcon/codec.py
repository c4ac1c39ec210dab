"""Fingerprint codec: describe a relative to b by a short string p plus advice.

Planning is message independent. Starting from the relevant system of the
condition corpus, each level finds a seed whose generated graph is
(2.01, 2.01*eps)-low-congesting for the current system, then replaces every
set by its congested vertices. The bound shrinks as K <- ceil(2.01*eps*K) and
the fingerprint width at a level is ceil(log2 K).

To encode a, walk down the levels until a is not congested; p is then a's
first neighbour outside the clot, and the advice records which preimage of p
a is. A set that has shrunk to a single vertex needs no fingerprint at all.
"""

from __future__ import annotations

import functools
import hashlib
import json
import math
from pathlib import Path
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from lowcon.bitgraph import BipartiteGraph, GraphParams
from lowcon.congestion import ClotSpec, clot_mask, congested_set, is_low_congesting
from lowcon.extractor import suggested_degree
from lowcon.nw_generator import Design, default_design, graph_from_seed, solve_R
from lowcon.rational import ceil_log2, format_fraction, to_fraction
from lowcon.toy_complexity import RelevantSystem, build_system

__all__ = [
    "ALPHA",
    "CodecConfig",
    "Level",
    "LevelPlan",
    "Encoding",
    "PlanError",
    "CodecError",
    "NotDescribable",
    "DecodeError",
    "k_sequence",
    "plan_levels",
    "encode",
    "decode",
    "advice_bits",
    "preimage_count",
    "cached_plan",
]

ALPHA = Fraction(201, 100)


class CodecError(Exception):
    pass


class PlanError(CodecError):
    """No good seed within budget, or the level bounds stopped shrinking."""


class NotDescribable(CodecError):
    """a is not in the relevant set of b."""


class DecodeError(CodecError):
    pass


def _min_levels(K0: int, eps: Fraction) -> int:
    """Smallest L with K0 * (2.01*eps)**L <= 1, i.e. ceil(log K0 / log(1/(2.01 eps)))."""
    c, L = ALPHA * eps, 0
    while K0 * c ** L > 1:
        L += 1
    return L


@dataclass(frozen=True)
class CodecConfig:
    n: int
    k: int
    s: int
    eps: Fraction
    conditions: tuple
    padded: bool = True
    c0: int = 1
    degree_cap: int | None = None
    design_t: int | None = None
    design_overlap: int | None = None
    search_mode: str = "sampled"
    search_budget: int = 200
    rng_seed: int = 0
    max_levels: int | None = None

    def __post_init__(self):
        eps = to_fraction(self.eps)
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "conditions", tuple(self.conditions))
        if not self.conditions:
            raise ValueError("the condition corpus is empty")
        if len(set(self.conditions)) != len(self.conditions):
            raise ValueError("conditions must be distinct")
        if not 1 <= self.k < self.n:
            raise ValueError("need 1 <= k < n")
        if not 0 < eps or ALPHA * eps >= 1:
            raise ValueError("need 0 < eps and 2.01*eps < 1")
        if self.search_mode not in ("sampled", "exhaustive"):
            raise ValueError(f"unknown search mode {self.search_mode!r}")
        bound = _min_levels(1 << self.k, eps)
        if self.max_levels is None:
            object.__setattr__(self, "max_levels", bound + 1)
        elif self.max_levels < bound:
            raise ValueError(f"max_levels must be at least {bound}")

    @property
    def K(self) -> int:
        return 1 << self.k

    def degree_for(self, k_level: int) -> int:
        d = suggested_degree(self.n, k_level, self.eps, self.c0)
        if self.degree_cap is not None:
            d = min(d, self.degree_cap)
        return max(1, d)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["eps"] = format_fraction(self.eps)
        out["conditions"] = list(self.conditions)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "CodecConfig":
        data = dict(data)
        data["eps"] = to_fraction(data["eps"])
        data["conditions"] = tuple(data["conditions"])
        return cls(**data)

    def key(self) -> str:
        """Content hash of the configuration, condition corpus included."""
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def k_sequence(K0: int, eps, count: int) -> list[int]:
    eps = to_fraction(eps)
    seq = [K0]
    while len(seq) < count:
        seq.append(math.ceil(ALPHA * eps * seq[-1]))
    return seq


@dataclass(frozen=True)
class Level:
    K: int
    params: GraphParams
    design: Design
    seed: str
    graph: BipartiteGraph = field(compare=False)
    seeds_examined: int = 0

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def D(self) -> int:
        return self.params.D


@dataclass(frozen=True)
class LevelPlan:
    """``systems[i]`` is the system at level i; ``levels[i]`` its graph.

    There is one more system than graph levels: the last system has only
    sets of size <= 1.
    """

    config: CodecConfig
    levels: tuple
    systems: tuple

    def set_index(self, b: str, pivot: int) -> int:
        hits = [i for i, p in enumerate(self.systems[0].provenance) if p is not None and p[0] == b]
        if not 0 <= pivot < len(hits):
            raise DecodeError(f"condition {b!r} has no relevant set number {pivot}")
        return hits[pivot]

    def pivot_width(self) -> int:
        counts: dict = {}
        for p in self.systems[0].provenance:
            if p is not None:
                counts[p[0]] = counts.get(p[0], 0) + 1
        return ceil_log2(max(counts.values(), default=1))

    def to_dict(self) -> dict:
        return {
            "config_key": self.config.key(),
            "levels": [{"K": lv.K, "params": lv.params.to_dict(), "l": lv.design.l,
                        "seed": lv.seed, "seeds_examined": lv.seeds_examined}
                       for lv in self.levels],
            "system_sizes": [[len(s) for s in sys.sets] for sys in self.systems],
        }


def plan_levels(config: CodecConfig, system: RelevantSystem | None = None) -> LevelPlan:
    if system is None:
        return _cached_plan(config)
    return _plan(config, system)


@functools.lru_cache(maxsize=16)
def _cached_plan(config: CodecConfig) -> LevelPlan:
    system = build_system(config.conditions, config.k, config.s, config.n, padded=config.padded)
    return _plan(config, system)


def _plan(config: CodecConfig, system: RelevantSystem) -> LevelPlan:
    beta = ALPHA * config.eps
    K = config.K
    try:
        systems = [system.rebound(K)]
    except ValueError as exc:
        raise PlanError(f"level 0: {exc}") from exc
    levels = []
    while any(len(s) > 1 for s in systems[-1].sets):
        i = len(levels)
        if i >= config.max_levels:
            raise PlanError(f"descent did not finish within {config.max_levels} levels")
        m = ceil_log2(K)
        if not 1 <= m < config.n:
            raise PlanError(f"level {i}: fingerprint width {m} outside [1, n)")
        params = GraphParams(config.n, m, config.degree_for(m), m, config.eps)
        design = default_design(params.table_bits, config.design_t, config.design_overlap)
        found = solve_R(params, design, systems[-1], ALPHA, beta, config.search_budget,
                        config.search_mode, config.rng_seed + i)
        if not found.found:
            raise PlanError(f"level {i}: no low-congesting seed among "
                            f"{found.seeds_examined} candidates (budget {config.search_budget})")
        g = graph_from_seed(params, design, found.seed)
        levels.append(Level(K, params, design, found.seed, g, found.seeds_examined))
        K_next = math.ceil(ALPHA * config.eps * K)
        spec = ClotSpec(ALPHA, K)
        congested = []
        for s in systems[-1].sets:
            mask = clot_mask(g, list(s), spec)
            congested.append(frozenset(x for x in s if mask[g.ids[x]].all()))
        try:
            nxt = RelevantSystem(tuple(congested), K_next, systems[-1].provenance)
        except ValueError as exc:
            raise PlanError(f"level {i + 1}: {exc}") from exc
        if K_next >= K and any(len(s) > 1 for s in nxt.sets):
            raise PlanError(f"level {i + 1}: bound stuck at K={K}")
        systems.append(nxt)
        K = K_next
    return LevelPlan(config, tuple(levels), tuple(systems))


@dataclass(frozen=True)
class Encoding:
    """Fingerprint p and the advice needed to invert it given b.

    ``pivot`` numbers the relevant sets of b (one per pivotal space bound),
    ``ordinal`` is a's rank among the preimages of p in the level's set,
    ``edge`` is the edge of a that produced p (None when degenerate).
    """

    p: str
    level: int
    pivot: int
    ordinal: int
    edge: int | None

    @property
    def degenerate(self) -> bool:
        return self.edge is None

    def advice(self) -> dict:
        return {"level": self.level, "pivot": self.pivot, "ordinal": self.ordinal, "edge": self.edge}

    def to_dict(self) -> dict:
        return {
            "p_hex": format(int(self.p, 2), "x") if self.p else "",
            "p_bits": len(self.p),
            "advice": self.advice(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Encoding":
        nbits = int(data["p_bits"])
        p = format(int(data["p_hex"], 16), f"0{nbits}b") if nbits else ""
        if len(p) != nbits:
            raise DecodeError("p_hex does not fit in p_bits")
        adv = data["advice"]
        return cls(p, int(adv["level"]), int(adv["pivot"]), int(adv["ordinal"]),
                   None if adv["edge"] is None else int(adv["edge"]))


def _locate(plan: LevelPlan, b: str, s: int) -> tuple[int, int]:
    """(system index, pivot ordinal) of the relevant set of b at space s."""
    best = None
    pivot = -1
    for i, p in enumerate(plan.systems[0].provenance):
        if p is None or p[0] != b:
            continue
        if p[1] <= s:
            pivot += 1
            best = (i, pivot)
    if best is None:
        raise NotDescribable(f"no relevant set for condition {b!r} at space {s}")
    return best


def encode(a: str, b: str, config: CodecConfig, plan: LevelPlan | None = None) -> Encoding:
    if len(a) != config.n or any(c not in "01" for c in a):
        raise ValueError(f"a must be an {config.n}-bit string")
    plan = plan_levels(config) if plan is None else plan
    x = int(a, 2)
    j, pivot = _locate(plan, b, config.s)
    if x not in plan.systems[0].sets[j]:
        raise NotDescribable(f"{a} is not describable below k={config.k} in space {config.s}")
    for i, sys in enumerate(plan.systems):
        members = sys.sets[j]
        assert x in members
        if len(members) <= 1:
            return Encoding("", i, pivot, 0, None)
        level = plan.levels[i]
        g = level.graph
        mask = clot_mask(g, sorted(members), ClotSpec(ALPHA, level.K))
        outside = [e for e in range(level.D) if not mask[g.ids[x, e]]]
        if outside:
            edge = outside[0]
            y = int(g.ids[x, edge])
            preimages = [v for v in sorted(members) if y in g.ids[v]]
            return Encoding(format(y, f"0{level.m}b"), i, pivot, preimages.index(x), edge)
    raise AssertionError("descent ended on a set with more than one member")


def decode(p: str, advice, b: str, config: CodecConfig, plan: LevelPlan | None = None) -> str:
    """Recover a from p, b and the advice; never looks at a."""
    if isinstance(advice, Encoding):
        advice = advice.advice()
    plan = plan_levels(config) if plan is None else plan
    level = int(advice["level"])
    if not 0 <= level < len(plan.systems):
        raise DecodeError(f"advice names level {level}, plan has {len(plan.systems)}")
    j = plan.set_index(b, int(advice["pivot"]))
    members = sorted(plan.systems[level].sets[j])
    ordinal = int(advice["ordinal"])
    if advice.get("edge") is None:
        if p or len(members) != 1 or ordinal != 0:
            raise DecodeError("degenerate advice needs an empty p and a singleton set")
        x = members[0]
    else:
        if level >= len(plan.levels):
            raise DecodeError(f"no graph at level {level}")
        lv = plan.levels[level]
        if len(p) != lv.m or any(c not in "01" for c in p):
            raise DecodeError(f"p must have {lv.m} bits at level {level}")
        y = int(p, 2)
        preimages = [v for v in members if y in lv.graph.ids[v]]
        if not preimages:
            raise DecodeError("p has no preimage in the relevant set")
        if not 0 <= ordinal < len(preimages):
            raise DecodeError(f"ordinal {ordinal} out of range ({len(preimages)} preimages)")
        x = preimages[ordinal]
    return format(x, f"0{config.n}b")


def preimage_count(p: str, advice, b: str, config: CodecConfig, plan: LevelPlan | None = None) -> int:
    """Number of decoder candidates for a non-degenerate encoding."""
    plan = plan_levels(config) if plan is None else plan
    level = int(advice["level"])
    lv = plan.levels[level]
    members = plan.systems[level].sets[plan.set_index(b, int(advice["pivot"]))]
    y = int(p, 2)
    return sum(1 for v in members if y in lv.graph.ids[v])


def advice_bits(encoding: Encoding, config: CodecConfig, plan: LevelPlan | None = None) -> dict:
    """Advice size with its breakdown; the widths depend on the plan, not on a."""
    plan = plan_levels(config) if plan is None else plan
    D_max = max((lv.D for lv in plan.levels), default=1)
    parts = {
        "level": ceil_log2(config.max_levels + 1),
        "pivot": plan.pivot_width(),
        "ordinal": 0 if encoding.degenerate else ceil_log2(math.ceil(ALPHA * D_max) + 1),
        "edge": 0 if encoding.degenerate else ceil_log2(D_max),
    }
    parts["total"] = sum(parts.values())
    return parts



def _replay(config: CodecConfig, seeds: list[str], designs=None) -> LevelPlan:
    """Rebuild a plan from recorded seeds, re-checking every level.

    Recorded designs skip the (slow) design construction; they are checked for
    shape and overlap, and each level's graph is re-verified regardless.
    """
    system = build_system(config.conditions, config.k, config.s, config.n, padded=config.padded)
    beta = ALPHA * config.eps
    K = config.K
    systems, levels = [system.rebound(K)], []
    for i, seed in enumerate(seeds):
        m = ceil_log2(K)
        params = GraphParams(config.n, m, config.degree_for(m), m, config.eps)
        if designs is None:
            design = default_design(params.table_bits, config.design_t, config.design_overlap)
        else:
            design = Design.from_dict(designs[i])
            if (design.r != params.table_bits or any(len(s_) != design.t for s_ in design.sets)
                    or design.max_pairwise_overlap() > design.max_overlap):
                raise PlanError("cached design does not fit")
        g = graph_from_seed(params, design, seed)
        if not is_low_congesting(g, systems[-1], ALPHA, beta)[0]:
            raise PlanError("cached seed is not low-congesting")
        levels.append(Level(K, params, design, seed, g))
        spec = ClotSpec(ALPHA, K)
        K = math.ceil(ALPHA * config.eps * K)
        systems.append(RelevantSystem(
            tuple(congested_set(g, s_, spec) for s_ in systems[-1].sets), K,
            systems[-1].provenance))
    if any(len(s_) > 1 for s_ in systems[-1].sets):
        raise PlanError("cached plan is incomplete")
    return LevelPlan(config, tuple(levels), tuple(systems))


def cached_plan(config: CodecConfig, cache_dir) -> LevelPlan:
    """Plan through a directory of ``<config key>.json`` seed records.

    A stale or corrupt record is ignored and overwritten.
    """
    path = Path(cache_dir) / f"{config.key()}.json"
    if path.exists():
        try:
            record = json.loads(path.read_text())
            return _replay(config, [lv["seed"] for lv in record["levels"]], record.get("designs"))
        except (ValueError, KeyError, TypeError, PlanError):
            pass
    plan = plan_levels(config)
    path.parent.mkdir(parents=True, exist_ok=True)
    record = {**plan.to_dict(), "designs": [lv.design.to_dict() for lv in plan.levels]}
    path.write_text(json.dumps(record, sort_keys=True) + "\n")
    return plan
