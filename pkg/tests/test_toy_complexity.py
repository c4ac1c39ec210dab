import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lowcon.toy_complexity import (MalformedProgram, RelevantSystem, ToyProgram, build_system,
                                   ks_bounded, pad, pivotal_limits, relevant_set, run_toy, unpad)

from oracles import naive_describable, naive_pivots, naive_programs, naive_run

bitstrings = st.text("01", min_size=1, max_size=6)


def test_run_toy_examples():
    assert run_toy("000101", "1", 4) == "0101"
    assert run_toy("000101", "1", 3) is None
    assert run_toy("10100", "0101", 6) == "0101"
    assert run_toy("10100", "0101", 5) is None
    assert run_toy("0111", "10", 3) == "01"
    assert run_toy("11110", "0", 6) == "011"
    assert run_toy("00", "0", 0) == ""
    with pytest.raises(MalformedProgram):
        ToyProgram("1")
    with pytest.raises(ValueError):
        run_toy("0012", "0", 4)


def test_ks_bounded_examples():
    assert ks_bounded("0101", "0101", 6, 6)
    assert not ks_bounded("0101", "0101", 6, 5)
    assert not ks_bounded("0101", "0101", 2, 100)


def test_relevant_set_examples():
    assert relevant_set("0101", 6, 6, 4) == {0b0101}
    assert relevant_set("0101", 6, 5, 4) == set()
    assert relevant_set("0101", 8, 6, 4) == set(range(16))


def test_pivotal_limits_examples():
    assert pivotal_limits("0101", 6, 16, 4).limits == (6,)
    assert pivotal_limits("0101", 8, 16, 4).limits[0] == 4
    assert pivotal_limits("0101", 2, 16, 4).limits == ()


def test_build_system_examples():
    sys_ = build_system(["0101"], 6, 16, 4)
    assert sys_.sets == (frozenset({0b0101}),) and sys_.K == 64
    assert sys_.provenance == (("0101", 6),)
    with pytest.raises(ValueError):
        build_system([], 6, 16, 4)


def test_system_rejects_big_sets():
    with pytest.raises(ValueError):
        RelevantSystem((frozenset(range(4)),), 4)
    rs = RelevantSystem((frozenset({1, 2}),), 4)
    assert RelevantSystem.from_dict(rs.to_dict()) == rs
    with pytest.raises(ValueError):
        rs.rebound(2)


def test_pad_roundtrip():
    assert pad("", 3) == 0b100
    assert pad("0", 3) == 0b010
    assert pad("1", 3) == 0b110
    for length in range(5):
        for v in range(2**length):
            x = format(v, f"0{length}b") if length else ""
            assert unpad(pad(x, 5), 5) == x
    with pytest.raises(ValueError):
        pad("000", 3)


def test_oracle_agrees_on_every_program():
    for p in naive_programs(9):
        for b in ("0", "1", "0101", "110"):
            out, cost = naive_run(p, b)
            assert run_toy(p, b, cost) == out
            if cost:
                assert run_toy(p, b, cost - 1) is None


@settings(max_examples=40, deadline=None)
@given(bitstrings, st.integers(2, 8), st.integers(0, 12), st.integers(1, 4))
def test_relevant_set_matches_enumeration(b, k, s, n):
    expected = {int(x, 2) for x in naive_describable(b, k, s, n)}
    assert relevant_set(b, k, s, n) == expected
    for x in range(2**n):
        assert ks_bounded(format(x, f"0{n}b"), b, k, s) == (x in expected)


@settings(max_examples=40, deadline=None)
@given(bitstrings, st.integers(2, 8), st.integers(0, 12), st.integers(1, 4))
def test_padded_relevant_set_matches_enumeration(b, k, s, n):
    expected = set()
    for p in naive_programs(k):
        out, cost = naive_run(p, b)
        if cost <= s and len(out) < n:
            expected.add(int(out + "1" + "0" * (n - 1 - len(out)), 2))
    assert relevant_set(b, k, s, n, padded=True) == expected


@settings(max_examples=30, deadline=None)
@given(bitstrings, st.integers(2, 8), st.integers(0, 16), st.integers(1, 4))
def test_pivots_match_sweep(b, k, s_bar, n):
    piv = pivotal_limits(b, k, s_bar, n).limits
    assert list(piv) == naive_pivots(b, k, s_bar, n)
    assert len(piv) < 2**k


@settings(max_examples=40, deadline=None)
@given(bitstrings, st.integers(2, 7), st.integers(0, 14), st.integers(1, 4), st.booleans())
def test_monotone_in_s_and_k(b, k, s, n, padded):
    here = relevant_set(b, k, s, n, padded)
    assert here <= relevant_set(b, k, s + 1, n, padded)
    assert here <= relevant_set(b, k + 1, s, n, padded)
    assert len(here) < 2**k


@settings(max_examples=25, deadline=None)
@given(st.lists(bitstrings, min_size=1, max_size=3, unique=True), st.integers(2, 7),
       st.integers(0, 10), st.integers(2, 4), st.booleans())
def test_build_system_structure(conds, k, s_bar, n, padded):
    sys_ = build_system(conds, k, s_bar, n, padded)
    assert sys_.K == 2**k
    assert len(sys_.sets) <= len(conds) * sys_.K
    for s, (b, piv) in zip(sys_.sets, sys_.provenance):
        assert s == relevant_set(b, k, piv, n, padded)
        below = relevant_set(b, k, piv - 1, n, padded) if piv > 0 else frozenset()
        assert s != below
