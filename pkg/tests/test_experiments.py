import csv
import io
from fractions import Fraction
from types import SimpleNamespace

import numpy as np
import pytest

from lowcon.bitgraph import GraphParams
from lowcon.experiments import (SWEEP_COLUMNS, compare_random_vs_nw, nw_seeds, sweep,
                                sweep_csv)
from lowcon.nw_generator import default_design
from lowcon.toy_complexity import RelevantSystem

P = GraphParams(3, 2, 1, 2, "1/4")
SYSTEM = RelevantSystem((frozenset({2, 4, 6}), frozenset({1, 3})), 4)


def test_compare_empty_system_rates_one():
    empty = SimpleNamespace(sets=(), K=4)
    rep = compare_random_vs_nw(P, default_design(P.table_bits), empty, "201/100", "201/400", 30, 0)
    assert rep["random_rate"] == rep["nw_rate"] == "1/1"
    assert rep["ratio"] == "1/1"


def test_compare_deterministic_and_validated():
    d = default_design(P.table_bits)
    a = compare_random_vs_nw(P, d, SYSTEM, "201/100", "201/400", 40, 9)
    assert a == compare_random_vs_nw(P, d, SYSTEM, "201/100", "201/400", 40, 9)
    with pytest.raises(ValueError):
        compare_random_vs_nw(P, d, SYSTEM, "201/100", "201/400", 29, 9)


def test_nw_seeds_distinct():
    seeds = nw_seeds(6, 0, 64)
    assert sorted(seeds) == list(range(64))
    with pytest.raises(ValueError):
        nw_seeds(6, 0, 65)


def test_sweep_grid_order_and_size():
    rows = sweep(P, [Fraction(1, 4), Fraction(1, 8)], 20, SYSTEM, "201/100", 5, 1)
    assert len(rows) == 40
    assert [r["eps"] for r in rows] == ["1/4"] * 20 + ["1/8"] * 20
    assert [r["index"] for r in rows[:20]] == list(range(20))
    text = sweep_csv(rows)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert len(parsed) == 40 and list(parsed[0]) == SWEEP_COLUMNS
    assert text == sweep_csv(sweep(P, ["1/4", "1/8"], 20, SYSTEM, "201/100", 5, 1))


def test_sweep_nw_source():
    d = default_design(P.table_bits)
    rows = sweep(P, ["1/4"], 10, SYSTEM, 2, 3, 0, source="nw", design=d)
    assert {r["source"] for r in rows} == {"nw"}
    with pytest.raises(ValueError):
        sweep(P, ["1/4"], 10, SYSTEM, 2, 3, 0, source="nw")


def test_compare_discriminating_regime():
    # parameters where neither rate is trivially 1, so the generator is tested
    params = GraphParams(4, 2, 1, 3, "1/4")
    rng = np.random.default_rng(0)
    sets = tuple(frozenset(int(v) for v in rng.choice(16, 7, replace=False)) for _ in range(4))
    rep = compare_random_vs_nw(params, default_design(params.table_bits), RelevantSystem(sets, 8),
                               Fraction(3, 2), Fraction(1, 8), 200, 0)
    rr, nr = Fraction(rep["random_rate"]), Fraction(rep["nw_rate"])
    assert 0 < rr < 1 and 0 < nr < 1
    assert nr >= rr / 2
