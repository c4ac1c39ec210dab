import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lowcon.rational import ceil_log2, format_fraction, to_fraction


def test_to_fraction_forms():
    assert to_fraction(0.26) == Fraction(13, 50)
    assert to_fraction("1/4") == Fraction(1, 4)
    assert to_fraction(3) == 3
    assert format_fraction(2) == "2/1"
    with pytest.raises(TypeError):
        to_fraction(None)


@given(st.fractions(min_value=Fraction(1, 10**6), max_value=10**9))
def test_ceil_log2_is_smallest_power(q):
    c = ceil_log2(q)
    assert Fraction(2) ** c >= q
    assert Fraction(2) ** (c - 1) < q


def test_ceil_log2_integers():
    for v in range(1, 300):
        assert ceil_log2(v) == math.ceil(math.log2(v))
    with pytest.raises(ValueError):
        ceil_log2(0)
