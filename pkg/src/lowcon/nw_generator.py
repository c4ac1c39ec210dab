"""Design-based parity generator and the search for a good seed.

Output bit i of the generator is the parity of the seed bits indexed by the
i-th design set. Pairwise intersections of design sets are bounded, which is
what makes short seeds usable in place of a full random table.
"""

from __future__ import annotations

import functools
import hashlib
import math
from dataclasses import dataclass

import numpy as np

from lowcon.bitgraph import BipartiteGraph, GraphParams
from lowcon.congestion import is_low_congesting

__all__ = [
    "Design",
    "SeedSearchResult",
    "greedy_design",
    "default_design",
    "nw_output",
    "graph_from_seed",
    "sampled_seeds",
    "solve_R",
]

# lexicographic DFS effort per set before switching to seeded first-fit
_DFS_NODES = 64
# consecutive rejected candidates before the ground set grows by one element
_PATIENCE = 64


@dataclass(frozen=True)
class Design:
    l: int
    t: int
    max_overlap: int
    sets: tuple

    @property
    def r(self) -> int:
        return len(self.sets)

    @functools.cached_property
    def incidence(self) -> np.ndarray:
        a = np.zeros((self.r, self.l), dtype=np.uint8)
        for i, s in enumerate(self.sets):
            a[i, list(s)] = 1
        a.setflags(write=False)
        return a

    def max_pairwise_overlap(self) -> int:
        a = self.incidence.astype(np.int64)
        if self.r < 2:
            return 0
        gram = a @ a.T
        np.fill_diagonal(gram, 0)
        return int(gram.max())

    def to_dict(self) -> dict:
        return {"l": self.l, "t": self.t, "max_overlap": self.max_overlap,
                "sets": [sorted(s) for s in self.sets]}

    @classmethod
    def from_dict(cls, data: dict) -> "Design":
        return cls(int(data["l"]), int(data["t"]), int(data["max_overlap"]),
                   tuple(tuple(int(i) for i in s) for s in data["sets"]))


def _lex_first(prev: np.ndarray, l: int, t: int, max_overlap: int):
    """Lexicographically first fitting t-subset of [0, l), or None if the
    bounded search gives up."""
    nodes = 0

    def dfs(start, chosen, counts):
        nonlocal nodes
        nodes += 1
        if len(chosen) == t:
            return list(chosen)
        if nodes > _DFS_NODES:
            return None
        for e in range(start, l - (t - len(chosen)) + 1):
            c2 = counts + prev[:, e]
            if c2.size and c2.max() > max_overlap:
                continue
            chosen.append(e)
            found = dfs(e + 1, chosen, c2)
            if found is not None:
                return found
            chosen.pop()
            if nodes > _DFS_NODES:
                return None
        return None

    return dfs(0, [], np.zeros(prev.shape[0], dtype=np.int16))


@functools.lru_cache(maxsize=64)
def greedy_design(r: int, t: int, max_overlap: int) -> Design:
    """Deterministic design of r t-subsets with pairwise overlap <= max_overlap.

    The ground set starts at the packing bound (no design fits in fewer
    elements). Each set is the lexicographically first fit found by a short
    DFS; failing that, seeded random t-subsets are tried, and the ground set
    grows by one after every ``_PATIENCE`` consecutive misses.
    """
    if r < 1:
        raise ValueError("r must be at least 1")
    if t < 1 or not 0 <= max_overlap <= t:
        raise ValueError("need t >= 1 and 0 <= max_overlap <= t")
    l = t
    while math.comb(l, max_overlap + 1) < r * math.comb(t, max_overlap + 1):
        l += 1
    rng = np.random.default_rng([r, t, max_overlap])
    cap = max(2 * l, 64)
    member = np.zeros((r, cap), dtype=np.int16)
    sets = []
    for i in range(r):
        found = _lex_first(member[:i, :l], l, t, max_overlap)
        misses = 0
        while found is None:
            cand = np.sort(rng.choice(l, size=t, replace=False))
            if i == 0 or member[:i, cand].sum(axis=1).max() <= max_overlap:
                found = [int(c) for c in cand]
                break
            misses += 1
            if misses >= _PATIENCE:
                l, misses = l + 1, 0
                if l > cap:
                    member = np.hstack([member, np.zeros((r, cap), dtype=np.int16)])
                    cap *= 2
        sets.append(tuple(found))
        member[i, found] = 1
    design = Design(l, t, max_overlap, tuple(sets))
    assert design.max_pairwise_overlap() <= max_overlap
    return design


def default_design(r: int, t: int | None = None, max_overlap: int | None = None) -> Design:
    """Greedy design with t = ceil(log2 r) and overlap max(1, ceil(log2 t))."""
    if t is None:
        t = max(1, math.ceil(math.log2(r)))
    if max_overlap is None:
        max_overlap = max(1, math.ceil(math.log2(t))) if t > 1 else 1
    return greedy_design(r, t, min(max_overlap, t))


def _seed_bits(design: Design, seed) -> np.ndarray:
    if isinstance(seed, (int, np.integer)):
        if not 0 <= seed < (1 << design.l):
            raise ValueError(f"seed does not fit in {design.l} bits")
        seed = format(int(seed), f"0{design.l}b")
    if isinstance(seed, str):
        if len(seed) != design.l or any(c not in "01" for c in seed):
            raise ValueError(f"seed must be a {design.l}-bit string")
        return np.frombuffer(seed.encode("ascii"), dtype=np.uint8) - ord("0")
    bits = np.asarray(seed, dtype=np.uint8).ravel()
    if bits.size != design.l:
        raise ValueError(f"seed must have {design.l} bits, got {bits.size}")
    return bits


def nw_output(design: Design, seed) -> np.ndarray:
    """r output bits; bit i is the parity of the seed bits in design set i."""
    bits = _seed_bits(design, seed).astype(np.int64)
    return ((design.incidence @ bits) & 1).astype(np.uint8)


def graph_from_seed(params: GraphParams, design: Design, seed) -> BipartiteGraph:
    if design.r != params.table_bits:
        raise ValueError(f"design has r={design.r} outputs, graph needs {params.table_bits}")
    return BipartiteGraph.from_bits(params, nw_output(design, seed))


def sampled_seeds(l: int, rng_seed: int):
    """Counter-mode seed stream used by sampled search.

    Seed i is the top l bits of SHA-256(b"lowcon" | rng_seed | i | block)
    blocks concatenated big-endian (rng_seed and i as 8-byte unsigned, block
    as 4 bytes). Identical on every platform.
    """
    key = (rng_seed & ((1 << 64) - 1)).to_bytes(8, "big")
    nblocks = -(-l // 256)
    i = 0
    while True:
        digest = b"".join(
            hashlib.sha256(b"lowcon" + key + i.to_bytes(8, "big") + j.to_bytes(4, "big")).digest()
            for j in range(nblocks))
        yield int.from_bytes(digest, "big") >> (256 * nblocks - l)
        i += 1


@dataclass(frozen=True)
class SeedSearchResult:
    seed: str | None
    seeds_examined: int
    mode: str

    @property
    def found(self) -> bool:
        return self.seed is not None

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "seed": None if self.seed is None else self.seed,
            "seed_bits": None if self.seed is None else len(self.seed),
            "seeds_examined": self.seeds_examined,
            "mode": self.mode,
        }


def solve_R(params: GraphParams, design: Design, system, alpha, beta, budget: int,
            mode: str = "sampled", rng_seed: int = 0) -> SeedSearchResult:
    """First seed in the declared order whose graph is (alpha, beta)-low-congesting."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if mode == "exhaustive":
        candidates = iter(range(min(budget, 1 << design.l)))
    elif mode == "sampled":
        candidates = sampled_seeds(design.l, rng_seed)
    else:
        raise ValueError(f"unknown search mode {mode!r}")
    examined = 0
    for u in candidates:
        if examined >= budget:
            break
        examined += 1
        g = graph_from_seed(params, design, u)
        if is_low_congesting(g, system, alpha, beta)[0]:
            seed = format(u, f"0{design.l}b")
            assert is_low_congesting(graph_from_seed(params, design, seed), system, alpha, beta)[0]
            return SeedSearchResult(seed, examined, mode)
    return SeedSearchResult(None, examined, mode)
