"""Batch experiments: random-vs-generator pass rates and parameter sweeps."""

from __future__ import annotations

import csv
import io
from fractions import Fraction

import numpy as np

from lowcon.bitgraph import GraphParams, random_graph
from lowcon.congestion import ClotSpec, congested_set, is_low_congesting
from lowcon.extractor import deviation, is_extractor_sampled
from lowcon.nw_generator import Design, graph_from_seed, sampled_seeds
from lowcon.rational import format_fraction, to_fraction

__all__ = ["compare_random_vs_nw", "graph_seeds", "nw_seeds", "sweep", "sweep_csv", "SWEEP_COLUMNS"]


def graph_seeds(rng_seed: int, count: int) -> list[int]:
    """Per-graph seeds for random_graph, derived from one master seed."""
    rng = np.random.default_rng(rng_seed)
    return [int(v) for v in rng.integers(0, 2**63 - 1, size=count, dtype=np.int64)]


def nw_seeds(l: int, rng_seed: int, count: int) -> list[int]:
    """``count`` distinct generator seeds, in sampled-search order."""
    if count > (1 << l):
        raise ValueError(f"cannot draw {count} distinct {l}-bit seeds")
    seen, out = set(), []
    for u in sampled_seeds(l, rng_seed):
        if u not in seen:
            seen.add(u)
            out.append(u)
            if len(out) == count:
                return out
    raise AssertionError("unreachable")


def compare_random_vs_nw(params: GraphParams, design: Design, system, alpha, beta,
                         samples: int, rng_seed: int) -> dict:
    """Pass rate of the low-congesting test on random vs generated graphs."""
    if samples < 30:
        raise ValueError("samples must be at least 30")
    alpha, beta = to_fraction(alpha), to_fraction(beta)
    random_pass = sum(
        is_low_congesting(random_graph(params, s), system, alpha, beta)[0]
        for s in graph_seeds(rng_seed, samples))
    nw_pass = sum(
        is_low_congesting(graph_from_seed(params, design, u), system, alpha, beta)[0]
        for u in nw_seeds(design.l, rng_seed, samples))
    random_rate = Fraction(random_pass, samples)
    nw_rate = Fraction(nw_pass, samples)
    return {
        "params": params.to_dict(),
        "alpha": format_fraction(alpha),
        "beta": format_fraction(beta),
        "samples": samples,
        "rng_seed": rng_seed,
        "seed_bits": design.l,
        "table_bits": design.r,
        "random_passes": random_pass,
        "nw_passes": nw_pass,
        "random_rate": format_fraction(random_rate),
        "nw_rate": format_fraction(nw_rate),
        "ratio": None if random_rate == 0 else format_fraction(nw_rate / random_rate),
    }


SWEEP_COLUMNS = [
    "eps", "source", "index", "graph_seed", "worst_sampled_deviation", "extractor_sampled",
    "max_system_deviation", "max_congested", "low_congesting",
]


def sweep(base: GraphParams, eps_values, graphs: int, system, alpha, trials: int,
          rng_seed: int, source: str = "random", design: Design | None = None) -> list[dict]:
    """One row per (eps, graph) in grid order.

    ``source="nw"`` draws graphs from the generator instead, so the mean of
    ``low_congesting`` is the good-seed fraction.
    """
    if source not in ("random", "nw"):
        raise ValueError("source must be 'random' or 'nw'")
    if source == "nw" and design is None:
        raise ValueError("source 'nw' needs a design")
    alpha = to_fraction(alpha)
    set_size = min(base.K, base.N)
    rows = []
    for eps in eps_values:
        eps = to_fraction(eps)
        params = GraphParams(base.n, base.m, base.d, base.k, eps)
        beta = alpha * eps
        if source == "random":
            seeds = graph_seeds(rng_seed, graphs)
            makers = [lambda s=s: random_graph(params, s) for s in seeds]
        else:
            seeds = nw_seeds(design.l, rng_seed, graphs)
            makers = [lambda u=u: graph_from_seed(params, design, u) for u in seeds]
        for index, (seed, make) in enumerate(zip(seeds, makers)):
            g = make()
            verdict, worst = is_extractor_sampled(g, set_size, eps, trials, seed & 0xFFFFFFFF)
            spec = ClotSpec(alpha, system.K)
            nonempty = [s for s in system.sets if s]
            max_dev = max((deviation(g, s).deviation for s in nonempty), default=Fraction(0))
            max_cong = max((len(congested_set(g, s, spec)) for s in system.sets), default=0)
            rows.append({
                "eps": format_fraction(eps),
                "source": source,
                "index": index,
                "graph_seed": seed,
                "worst_sampled_deviation": format_fraction(worst),
                "extractor_sampled": int(verdict),
                "max_system_deviation": format_fraction(max_dev),
                "max_congested": max_cong,
                "low_congesting": int(is_low_congesting(g, system, alpha, beta)[0]),
            })
    return rows


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
