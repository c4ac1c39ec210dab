"""Constant-depth circuits that test the low-congesting property.

Gates are stored in topological order. ``APPROX_THRESHOLD(low, high)`` is a
promise gate: it must output 0 when the fraction of ones among its inputs is
below ``low`` and 1 when it is above ``high``. It is realised here by the
exact midpoint rule ``fraction >= (low + high) / 2``.

The distinguisher for a relevant system works per set S:

1. compare every pair of m-bit segments of S's blocks for equality;
2. for each segment, threshold the number of other segments equal to it
   (this is the right vertex's indegree from S, minus one);
3. AND the segment gates of each block, flagging congested vertices;
4. threshold the number of flagged blocks and negate;

and the output is the AND over all sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from lowcon.bitgraph import GraphParams
from lowcon.rational import format_fraction, to_fraction

__all__ = [
    "Gate",
    "Circuit",
    "CircuitStats",
    "CircuitBuilder",
    "build_comparator",
    "build_distinguisher",
    "evaluate",
    "stats",
    "INPUT",
    "NOT",
    "AND",
    "OR",
    "APPROX_THRESHOLD",
]

INPUT, NOT, AND, OR, APPROX_THRESHOLD = "INPUT", "NOT", "AND", "OR", "APPROX_THRESHOLD"
_KINDS = (INPUT, NOT, AND, OR, APPROX_THRESHOLD)

SCHEMA = "lowcon.circuit/1"


@dataclass(frozen=True)
class Gate:
    kind: str
    inputs: tuple = ()
    bit: int | None = None
    low: Fraction | None = None
    high: Fraction | None = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "inputs": list(self.inputs)}
        if self.kind == INPUT:
            out["bit"] = self.bit
        if self.kind == APPROX_THRESHOLD:
            out["low"] = format_fraction(self.low)
            out["high"] = format_fraction(self.high)
        return out


@dataclass(frozen=True)
class Circuit:
    gates: tuple
    output: int

    def __post_init__(self):
        for i, g in enumerate(self.gates):
            if g.kind not in _KINDS:
                raise ValueError(f"gate {i}: unknown kind {g.kind!r}")
            if any(not 0 <= j < i for j in g.inputs):
                raise ValueError(f"gate {i}: fan-in must reference earlier gates")
            if g.kind == INPUT and (g.bit is None or g.bit < 0 or g.inputs):
                raise ValueError(f"gate {i}: INPUT needs a bit index and no fan-in")
            if g.kind == NOT and len(g.inputs) != 1:
                raise ValueError(f"gate {i}: NOT takes exactly one input")
            if g.kind == APPROX_THRESHOLD:
                if not (0 <= g.low < g.high <= 1) or not g.inputs:
                    raise ValueError(f"gate {i}: need 0 <= low < high <= 1 and fan-in")
        if not 0 <= self.output < len(self.gates):
            raise ValueError("output must name a gate")

    def to_dict(self) -> dict:
        return {"schema": SCHEMA, "output": self.output,
                "gates": [g.to_dict() for g in self.gates]}

    @classmethod
    def from_dict(cls, data: dict) -> "Circuit":
        gates = []
        for g in data["gates"]:
            gates.append(Gate(
                g["kind"], tuple(g.get("inputs", ())), g.get("bit"),
                to_fraction(g["low"]) if "low" in g else None,
                to_fraction(g["high"]) if "high" in g else None))
        return cls(tuple(gates), int(data["output"]))


@dataclass(frozen=True)
class CircuitStats:
    size: int
    depth: int

    def to_dict(self) -> dict:
        return {"size": self.size, "depth": self.depth}


class CircuitBuilder:
    """Appends gates, sharing identical INPUT/NOT/constant nodes."""

    def __init__(self):
        self.gates: list[Gate] = []
        self._memo: dict = {}

    def _add(self, gate: Gate) -> int:
        key = (gate.kind, gate.inputs, gate.bit, gate.low, gate.high)
        if gate.kind in (INPUT, NOT) or not gate.inputs:
            if key in self._memo:
                return self._memo[key]
            self._memo[key] = len(self.gates)
        self.gates.append(gate)
        return len(self.gates) - 1

    def input(self, bit: int) -> int:
        return self._add(Gate(INPUT, bit=bit))

    def const(self, value: bool) -> int:
        return self._add(Gate(AND if value else OR))

    def not_(self, a: int) -> int:
        return self._add(Gate(NOT, (a,)))

    def and_(self, inputs) -> int:
        return self._add(Gate(AND, tuple(inputs)))

    def or_(self, inputs) -> int:
        return self._add(Gate(OR, tuple(inputs)))

    def equal(self, a_bits, b_bits) -> int:
        """1 iff the two bit groups agree; XNOR as OR(AND(a,b), AND(~a,~b))."""
        terms = []
        for a, b in zip(a_bits, b_bits):
            ia, ib = self.input(a), self.input(b)
            both = self.and_((ia, ib))
            neither = self.and_((self.not_(ia), self.not_(ib)))
            terms.append(self.or_((both, neither)))
        return self.and_(terms)

    def threshold_count(self, inputs, low, high) -> int:
        """Promise gate on counts: 0 if #ones < low, 1 if #ones > high.

        Realised as ``#ones >= (low + high) / 2``. When the count thresholds
        fall outside [0, fan-in] the window is shrunk symmetrically about the
        same midpoint so the stored fractions stay in [0, 1].
        """
        inputs = tuple(inputs)
        low, high = to_fraction(low), to_fraction(high)
        fan_in = len(inputs)
        mid = (low + high) / 2
        if fan_in == 0:
            return self.const(0 >= mid)
        mid_f = mid / fan_in
        if mid_f <= 0:
            return self.const(True)
        if mid_f > 1:
            return self.const(False)
        if mid_f == 1:
            return self.and_(inputs)
        half = min(mid_f, 1 - mid_f, (high - low) / (2 * fan_in))
        return self._add(Gate(APPROX_THRESHOLD, inputs, low=mid_f - half, high=mid_f + half))

    def build(self, output: int) -> Circuit:
        return Circuit(tuple(self.gates), output)


def build_comparator(m: int, offset_a: int, offset_b: int) -> Circuit:
    """Equality test of input bits [offset_a, offset_a+m) and [offset_b, offset_b+m)."""
    if m < 1:
        raise ValueError("m must be at least 1")
    b = CircuitBuilder()
    out = b.equal(range(offset_a, offset_a + m), range(offset_b, offset_b + m))
    return b.build(out)


def build_distinguisher(params: GraphParams, system) -> Circuit:
    """Circuit over the N*D*m graph table bits; 1 means few congested vertices."""
    D, M, m = params.D, params.M, params.m
    K, eps = system.K, params.eps
    b = CircuitBuilder()
    per_set = []
    seg_low = Fraction(2 * D * K, M)
    seg_high = Fraction(201, 100) * D * K / M
    for s in system.sets:
        members = sorted(s)
        if not members:
            continue
        if any(not 0 <= x < params.N for x in members):
            raise ValueError("relevant set member outside the left part")
        segments = [(x * D + j) * m for x in members for j in range(D)]
        eq = {}
        for u in range(len(segments)):
            for v in range(u + 1, len(segments)):
                eq[u, v] = b.equal(range(segments[u], segments[u] + m),
                                   range(segments[v], segments[v] + m))
        seg_gate = []
        for u in range(len(segments)):
            hits = [eq[min(u, v), max(u, v)] for v in range(len(segments)) if v != u]
            # hits = indegree - 1, so shift both thresholds by one
            seg_gate.append(b.threshold_count(hits, seg_low - 1, seg_high - 1))
        blocks = [b.and_(seg_gate[i * D:(i + 1) * D]) for i in range(len(members))]
        many = b.threshold_count(blocks, 2 * eps * K, Fraction(201, 100) * eps * K)
        per_set.append(b.not_(many))
    return b.build(b.and_(per_set))


def evaluate(c: Circuit, bits) -> int:
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    values = np.zeros(len(c.gates), dtype=np.uint8)
    for i, g in enumerate(c.gates):
        if g.kind == INPUT:
            if g.bit >= bits.size:
                raise ValueError(f"input bit {g.bit} missing (got {bits.size} bits)")
            values[i] = bits[g.bit]
        elif g.kind == NOT:
            values[i] = 1 - values[g.inputs[0]]
        elif g.kind == AND:
            values[i] = all(values[j] for j in g.inputs)
        elif g.kind == OR:
            values[i] = any(values[j] for j in g.inputs)
        else:
            ones = sum(int(values[j]) for j in g.inputs)
            values[i] = 2 * ones >= (g.low + g.high) * len(g.inputs)
    return int(values[c.output])


def stats(c: Circuit) -> CircuitStats:
    depth = [0] * len(c.gates)
    for i, g in enumerate(c.gates):
        if g.inputs:
            depth[i] = 1 + max(depth[j] for j in g.inputs)
    reachable = {c.output}
    for i in range(len(c.gates) - 1, -1, -1):
        if i in reachable:
            reachable.update(c.gates[i].inputs)
    return CircuitStats(size=len(reachable), depth=depth[c.output])
