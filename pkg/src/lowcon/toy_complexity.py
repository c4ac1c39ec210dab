"""A four-opcode description machine with metered workspace.

Programs are bit strings: a 2-bit opcode followed by a payload ``w``. The
condition ``b`` is read cyclically. Opcodes and their space cost:

    00 LIT   output w                                   cost |w|
    01 XORB  output w xor b                             cost |w| + 1
    10 PREF  output the first int(w) bits of b          cost int(w) + 2
    11 REV   output w reversed                          cost 2|w|

A string x is "describable below k in space s given b" when some program of
fewer than k bits outputs x with cost at most s. The describable strings of
length n, read as big-endian integers, form the relevant sets.

With ``padded=True`` the strings of length < n are used instead and embedded
injectively into n bits as ``x + "1" + "0" * (n - 1 - len(x))``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

__all__ = [
    "ToyProgram",
    "PivotalLimits",
    "RelevantSystem",
    "MalformedProgram",
    "run_toy",
    "ks_bounded",
    "relevant_set",
    "pivotal_limits",
    "build_system",
    "pad",
    "unpad",
    "all_programs",
]

LIT, XORB, PREF, REV = "00", "01", "10", "11"


class MalformedProgram(ValueError):
    pass


def _check_bits(s: str, what: str) -> str:
    if not isinstance(s, str) or any(c not in "01" for c in s):
        raise ValueError(f"{what} must be a string over {{0,1}}, got {s!r}")
    return s


@dataclass(frozen=True)
class ToyProgram:
    bits: str

    def __post_init__(self):
        _check_bits(self.bits, "program")
        if len(self.bits) < 2:
            raise MalformedProgram("programs need at least the 2-bit opcode")

    @property
    def opcode(self) -> str:
        return self.bits[:2]

    @property
    def payload(self) -> str:
        return self.bits[2:]


def _cyclic(b: str, length: int) -> str:
    if length == 0:
        return ""
    if not b:
        raise ValueError("condition must be nonempty to be read")
    reps = -(-length // len(b))
    return (b * reps)[:length]


def _execute(opcode: str, w: str, b: str) -> tuple[str, int]:
    if opcode == LIT:
        return w, len(w)
    if opcode == XORB:
        mask = _cyclic(b, len(w))
        return "".join("1" if u != v else "0" for u, v in zip(w, mask)), len(w) + 1
    if opcode == PREF:
        ell = int(w, 2) if w else 0
        return _cyclic(b, ell), ell + 2
    return w[::-1], 2 * len(w)


def run_toy(p, b: str, space_limit: int) -> str | None:
    """Run program ``p`` on condition ``b``; None signals a space overflow."""
    if not isinstance(p, ToyProgram):
        p = ToyProgram(p)
    _check_bits(b, "condition")
    out, cost = _execute(p.opcode, p.payload, b)
    return None if cost > space_limit else out


def all_programs(max_len: int):
    """All programs of length 2..max_len in length-then-lexicographic order."""
    for length in range(2, max_len + 1):
        for bits in itertools.product("01", repeat=length):
            yield "".join(bits)


def ks_bounded(x: str, b: str, k: int, s: int) -> bool:
    """Is there a program shorter than k bits printing x within space s?"""
    _check_bits(x, "x")
    for p in all_programs(k - 1):
        if run_toy(p, b, s) == x:
            return True
    return False


@functools.lru_cache(maxsize=256)
def _cheapest(b: str, k: int) -> dict:
    """Output -> least space over programs shorter than k bits."""
    best: dict[str, int] = {}
    for p in all_programs(k - 1):
        out, cost = _execute(p[:2], p[2:], b)
        if cost < best.get(out, cost + 1):
            best[out] = cost
    return best


def pad(x: str, n: int) -> int:
    if len(x) >= n:
        raise ValueError(f"only strings shorter than {n} bits can be padded")
    return int(x + "1" + "0" * (n - 1 - len(x)), 2)


def unpad(v: int, n: int) -> str:
    bits = format(v, f"0{n}b").rstrip("0")
    if not bits:
        raise ValueError("value 0 is not a padded string")
    return bits[:-1]


def _member_costs(b: str, k: int, n: int, padded: bool) -> dict:
    _check_bits(b, "condition")
    costs = {}
    for out, cost in _cheapest(b, k).items():
        if padded:
            if len(out) < n:
                costs[pad(out, n)] = cost
        elif len(out) == n:
            costs[int(out, 2)] = cost
    return costs


def relevant_set(b: str, k: int, s: int, n: int, padded: bool = False) -> frozenset:
    return frozenset(x for x, cost in _member_costs(b, k, n, padded).items() if cost <= s)


@dataclass(frozen=True)
class PivotalLimits:
    condition: str
    limits: tuple


def pivotal_limits(b: str, k: int, s_bar: int, n: int, padded: bool = False) -> PivotalLimits:
    """Space bounds s <= s_bar at which the describable set grows.

    The set below the smallest bound considered is taken to be empty.
    """
    costs = _member_costs(b, k, n, padded)
    return PivotalLimits(b, tuple(sorted({c for c in costs.values() if c <= s_bar})))


@dataclass(frozen=True)
class RelevantSystem:
    """An ordered family of left sets, each smaller than K.

    ``provenance[i]`` is ``(condition, space)`` for the i-th set, or None for
    sets that did not come from the toy machine.
    """

    sets: tuple
    K: int
    provenance: tuple = field(default=())

    def __post_init__(self):
        sets = tuple(frozenset(int(x) for x in s) for s in self.sets)
        object.__setattr__(self, "sets", sets)
        if not self.provenance:
            object.__setattr__(self, "provenance", (None,) * len(sets))
        if len(self.provenance) != len(sets):
            raise ValueError("provenance must list one entry per set")
        if self.K < 1:
            raise ValueError("K must be at least 1")
        for s in sets:
            if len(s) >= self.K:
                raise ValueError(f"relevant set of size {len(s)} is not below K={self.K}")

    def __len__(self):
        return len(self.sets)

    def rebound(self, K: int) -> "RelevantSystem":
        """Same sets, checked against a different bound K."""
        return RelevantSystem(self.sets, K, self.provenance)

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "sets": [sorted(s) for s in self.sets],
            "provenance": [None if p is None else {"condition": p[0], "space": p[1]}
                           for p in self.provenance],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RelevantSystem":
        prov = tuple(None if p is None else (p["condition"], int(p["space"]))
                     for p in data.get("provenance") or [None] * len(data["sets"]))
        return cls(tuple(data["sets"]), int(data["K"]), prov)


def build_system(conditions, k: int, s_bar: int, n: int, padded: bool = False) -> RelevantSystem:
    """One set per (condition, pivotal space bound), in condition order."""
    conditions = list(conditions)
    if not conditions:
        raise ValueError("at least one condition is required")
    sets, prov = [], []
    for b in conditions:
        for s in pivotal_limits(b, k, s_bar, n, padded).limits:
            sets.append(relevant_set(b, k, s, n, padded))
            prov.append((b, s))
    return RelevantSystem(tuple(sets), 1 << k, tuple(prov))
