import json
from fractions import Fraction
from types import SimpleNamespace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lowcon import bitgraph
from lowcon.bitgraph import BipartiteGraph, GraphParams
from lowcon.congestion import is_low_congesting
from lowcon.distinguisher import (APPROX_THRESHOLD, INPUT, Circuit, CircuitBuilder, Gate,
                                  build_comparator, build_distinguisher, evaluate, stats)
from lowcon.extractor import deviation
from lowcon.toy_complexity import RelevantSystem

from conftest import make_const, make_cyc


def family(*sets, K=4):
    return SimpleNamespace(sets=tuple(frozenset(s) for s in sets), K=K)


def midpoint_oracle(g, system):
    """Exact function the circuit computes under the midpoint rule."""
    p = g.params
    ids = g.ids.tolist()
    for s in system.sets:
        if not s:
            continue
        indeg = {}
        for x in s:
            for y in ids[x]:
                indeg[y] = indeg.get(y, 0) + 1
        cut = Fraction(2005, 1000) * p.D * system.K / p.M
        flagged = sum(1 for x in s if all(indeg[y] >= cut for y in ids[x]))
        if flagged >= Fraction(2005, 1000) * p.eps * system.K:
            return 0
    return 1


def threshold_gate(ones, total=10):
    gates = [Gate(INPUT, bit=i) for i in range(total)]
    gates.append(Gate(APPROX_THRESHOLD, tuple(range(total)), low=Fraction(1, 5), high=Fraction(2, 5)))
    c = Circuit(tuple(gates), total)
    return evaluate(c, [1] * ones + [0] * (total - ones))


def test_threshold_promise_examples():
    assert threshold_gate(1) == 0
    assert threshold_gate(5) == 1
    assert threshold_gate(3) == 1  # midpoint tie goes to 1
    assert threshold_gate(2) == 0


def test_comparator():
    c = build_comparator(4, 0, 4)
    assert evaluate(c, [0, 1, 0, 1, 0, 1, 0, 1]) == 1
    assert evaluate(c, [0, 1, 0, 1, 0, 1, 1, 1]) == 0
    c1 = build_comparator(1, 0, 1)
    assert evaluate(c1, [1, 1]) == 1 and evaluate(c1, [0, 0]) == 1 and evaluate(c1, [0, 1]) == 0
    for m in (1, 4, 9):
        assert stats(build_comparator(m, 0, m)).depth <= 4


def test_constant_circuit_stats():
    b = CircuitBuilder()
    c = b.build(b.const(True))
    assert evaluate(c, []) == 1
    assert stats(c).to_dict() == {"size": 1, "depth": 0}


def test_invalid_circuits():
    with pytest.raises(ValueError):
        Circuit((Gate("AND", (0,)),), 0)
    with pytest.raises(ValueError):
        Circuit((Gate(INPUT, bit=0), Gate(APPROX_THRESHOLD, (0,), low=Fraction(1, 2),
                                          high=Fraction(1, 4))), 1)
    with pytest.raises(ValueError):
        evaluate(build_comparator(2, 0, 2), [0, 1, 0])


def test_distinguisher_examples():
    params = GraphParams(3, 2, 1, 2, "1/10")
    system = family({0, 1, 2, 3})
    c = build_distinguisher(params, system)
    assert evaluate(c, make_const("1/10").to_bits()) == 0
    assert evaluate(c, make_cyc("1/10").to_bits()) == 1
    empty = build_distinguisher(params, family())
    for seed in range(5):
        assert evaluate(empty, bitgraph.random_graph(params, seed).to_bits()) == 1


def test_circuit_json_roundtrip():
    params = GraphParams(3, 2, 1, 2, "1/4")
    c = build_distinguisher(params, family({0, 2, 5}, {1, 3}))
    data = json.loads(json.dumps(c.to_dict()))
    assert Circuit.from_dict(data) == c


def test_depth_independent_of_n():
    system = RelevantSystem((frozenset({2, 4, 6}),) * 2, 4)
    c3 = build_distinguisher(GraphParams(3, 2, 1, 2, "1/4"), system)
    c4 = build_distinguisher(GraphParams(4, 2, 1, 2, "1/4"), system)
    assert stats(c3).depth == stats(c4).depth


@st.composite
def instances(draw):
    n = draw(st.integers(2, 4))
    m = draw(st.integers(1, min(n, 3)))
    d = draw(st.integers(1, 2))
    eps = draw(st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(1, 8), Fraction(1, 10)]))
    K = draw(st.sampled_from([2, 4, 8]))
    params = GraphParams(n, m, d, 1, eps)
    sets = draw(st.lists(st.sets(st.integers(0, 2**n - 1), max_size=min(K - 1, 5)), max_size=3))
    seed = draw(st.integers(0, 2**32))
    kind = draw(st.sampled_from(["random", "const", "skew"]))
    if kind == "random":
        g = bitgraph.random_graph(params, seed)
    elif kind == "const":
        g = BipartiteGraph.from_rule(params, lambda x, j: 0)
    else:
        g = BipartiteGraph.from_rule(params, lambda x, j: (x * j + seed) % 2)
    return g, RelevantSystem(tuple(frozenset(s) for s in sets), K)


@settings(max_examples=80, deadline=None)
@given(instances())
def test_circuit_matches_midpoint_oracle(inst):
    g, system = inst
    c = build_distinguisher(g.params, system)
    out = evaluate(c, g.to_bits())
    assert out == midpoint_oracle(g, system)
    eps = g.params.eps
    if out:
        assert is_low_congesting(g, system, Fraction(201, 100), Fraction(201, 100) * eps)[0]
    if all(deviation(g, s).deviation < eps for s in system.sets if s):
        assert out == 1
