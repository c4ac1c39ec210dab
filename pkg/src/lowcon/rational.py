"""Exact rational helpers shared by every module.

Floats are read through their decimal repr, so ``0.26`` becomes ``13/50``
rather than the nearest binary fraction.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["to_fraction", "format_fraction", "ceil_log2"]


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_fraction(value) -> str:
    q = to_fraction(value)
    return f"{q.numerator}/{q.denominator}"


def ceil_log2(value) -> int:
    """Smallest integer c with 2**c >= value, for a positive rational."""
    q = to_fraction(value)
    if q <= 0:
        raise ValueError("ceil_log2 needs a positive argument")
    c = (q.numerator // q.denominator).bit_length()
    # bit_length gives an upper bound close to the answer; walk it down/up
    while c > -4096 and Fraction(2) ** (c - 1) >= q:
        c -= 1
    while Fraction(2) ** c < q:
        c += 1
    return c
