"""Left-regular bipartite multigraphs stored as packed neighbour tables.

A graph with parameters (n, m, d) has N = 2**n left vertices, M = 2**m right
vertices and every left vertex has D = 2**d outgoing edges. The canonical
encoding is a bit string of length N*D*m: vertex-major, then edge index, each
right-vertex id written big-endian in m bits.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from lowcon.rational import format_fraction, to_fraction

__all__ = [
    "GraphError",
    "GraphParams",
    "BipartiteGraph",
    "neighbor",
    "indegrees",
    "indegree_from",
    "edge_count",
    "random_graph",
    "serialize",
    "parse",
    "MAGIC",
]

MAGIC = b"LCG1"
_HEADER_RE = re.compile(rb"^ (\d+) (\d+) (\d+) (\d+) (\d+)/(\d+)$")
# largest table we are willing to allocate (bits)
_MAX_TABLE_BITS = 1 << 28


class GraphError(ValueError):
    """Bad graph parameters, out-of-range vertex, or malformed graph file."""


@dataclass(frozen=True)
class GraphParams:
    n: int
    m: int
    d: int
    k: int
    eps: Fraction

    def __post_init__(self):
        object.__setattr__(self, "eps", to_fraction(self.eps))
        for name in ("n", "m", "d", "k"):
            if not isinstance(getattr(self, name), int):
                raise GraphError(f"{name} must be an integer")
        if not 1 <= self.m <= self.n:
            raise GraphError(f"need 1 <= m <= n, got m={self.m}, n={self.n}")
        if self.d < 1:
            raise GraphError(f"need d >= 1, got d={self.d}")
        if not 1 <= self.k <= self.n:
            raise GraphError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.eps <= 0:
            raise GraphError("eps must be positive")
        if self.table_bits > _MAX_TABLE_BITS:
            raise GraphError(f"table of {self.table_bits} bits is too large")

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def M(self) -> int:
        return 1 << self.m

    @property
    def D(self) -> int:
        return 1 << self.d

    @property
    def K(self) -> int:
        return 1 << self.k

    @property
    def table_bits(self) -> int:
        return (1 << self.n) * (1 << self.d) * self.m

    @classmethod
    def from_string(cls, text: str) -> "GraphParams":
        """Parse ``"n,m,d,k,eps"`` as used on the command line."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 5:
            raise GraphError(f"expected n,m,d,k,eps; got {text!r}")
        try:
            n, m, d, k = (int(p) for p in parts[:4])
            eps = to_fraction(parts[4])
        except (ValueError, ZeroDivisionError) as exc:
            raise GraphError(f"bad parameter string {text!r}") from exc
        return cls(n, m, d, k, eps)

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "d": self.d, "k": self.k, "eps": format_fraction(self.eps)}


class BipartiteGraph:
    """Immutable neighbour table; ``ids[x, j]`` is the j-th neighbour of x."""

    __slots__ = ("params", "ids")

    def __init__(self, params: GraphParams, ids):
        arr = np.array(ids, dtype=np.int64).reshape(params.N, params.D)
        if arr.size and (arr.min() < 0 or arr.max() >= params.M):
            raise GraphError("neighbour id out of range")
        arr.setflags(write=False)
        self.params = params
        self.ids = arr

    @classmethod
    def from_rule(cls, params: GraphParams, rule) -> "BipartiteGraph":
        """Build from ``rule(x, j) -> y``."""
        ids = [[rule(x, j) for j in range(params.D)] for x in range(params.N)]
        return cls(params, ids)

    @classmethod
    def from_bits(cls, params: GraphParams, bits) -> "BipartiteGraph":
        bits = np.asarray(bits, dtype=np.uint8).ravel()
        if bits.size != params.table_bits:
            raise GraphError(f"expected {params.table_bits} table bits, got {bits.size}")
        weights = 1 << np.arange(params.m - 1, -1, -1, dtype=np.int64)
        ids = bits.reshape(-1, params.m).astype(np.int64) @ weights
        return cls(params, ids)

    def to_bits(self) -> np.ndarray:
        """The N*D*m-bit canonical table as a uint8 array of 0/1."""
        m = self.params.m
        shifts = np.arange(m - 1, -1, -1, dtype=np.int64)
        return ((self.ids.reshape(-1, 1) >> shifts) & 1).astype(np.uint8).ravel()

    def __eq__(self, other):
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return self.params == other.params and np.array_equal(self.ids, other.ids)

    def __hash__(self):
        return hash((self.params, self.ids.tobytes()))

    def __repr__(self):
        p = self.params
        return f"BipartiteGraph(n={p.n}, m={p.m}, d={p.d}, k={p.k}, eps={p.eps})"


def _check_left(g: BipartiteGraph, x) -> int:
    if not 0 <= x < g.params.N:
        raise GraphError(f"left vertex {x} out of range [0, {g.params.N})")
    return int(x)


def _left_array(g: BipartiteGraph, s: Iterable[int]) -> np.ndarray:
    arr = np.fromiter((int(x) for x in s), dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() >= g.params.N):
        raise GraphError("left vertex out of range")
    return arr


def neighbor(g: BipartiteGraph, x: int, j: int) -> int:
    _check_left(g, x)
    if not 0 <= j < g.params.D:
        raise GraphError(f"edge index {j} out of range [0, {g.params.D})")
    return int(g.ids[x, j])


def indegrees(g: BipartiteGraph, s: Iterable[int]) -> np.ndarray:
    """Vector of length M: edges from s landing on each right vertex."""
    arr = _left_array(g, s)
    return np.bincount(g.ids[arr].ravel(), minlength=g.params.M)


def indegree_from(g: BipartiteGraph, s: Iterable[int], y: int) -> int:
    if not 0 <= y < g.params.M:
        raise GraphError(f"right vertex {y} out of range [0, {g.params.M})")
    return int(indegrees(g, s)[y])


def edge_count(g: BipartiteGraph, s: Iterable[int], ys: Iterable[int]) -> int:
    ys = list(ys)
    for y in ys:
        if not 0 <= y < g.params.M:
            raise GraphError(f"right vertex {y} out of range [0, {g.params.M})")
    deg = indegrees(g, s)
    return int(sum(int(deg[y]) for y in set(ys)))


def random_graph(params: GraphParams, rng_seed: int) -> BipartiteGraph:
    """Every table entry i.i.d. uniform on [0, M), drawn from PCG64(rng_seed)."""
    rng = np.random.default_rng(rng_seed)
    return BipartiteGraph(params, rng.integers(0, params.M, size=(params.N, params.D)))


def serialize(g: BipartiteGraph) -> bytes:
    p = g.params
    header = MAGIC + f" {p.n} {p.m} {p.d} {p.k} {format_fraction(p.eps)}\n".encode("ascii")
    return header + np.packbits(g.to_bits()).tobytes()


def parse(data: bytes) -> BipartiteGraph:
    if not data.startswith(MAGIC):
        raise GraphError("missing LCG1 magic")
    newline = data.find(b"\n")
    if newline < 0:
        raise GraphError("unterminated header")
    match = _HEADER_RE.match(data[len(MAGIC):newline])
    if match is None:
        raise GraphError("malformed header")
    n, m, d, k, num, den = (int(v) for v in match.groups())
    if den == 0:
        raise GraphError("eps has zero denominator")
    params = GraphParams(n, m, d, k, Fraction(num, den))
    payload = data[newline + 1:]
    expected = (params.table_bits + 7) // 8
    if len(payload) != expected:
        raise GraphError(f"payload is {len(payload)} bytes, header implies {expected}")
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8))
    if bits[params.table_bits:].any():
        raise GraphError("nonzero padding bits")
    return BipartiteGraph.from_bits(params, bits[: params.table_bits])
