"""Command-line driver.

Every subcommand writes one JSON report (CSV for ``sweep``) to ``--out`` or
stdout. Reports carry no timestamps, so identical arguments give
byte-identical output. Errors go to stderr as a JSON record, with exit code 2
for invalid input, 3 for not-found / plan failure, 4 for anything else.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from lowcon import bitgraph, codec, congestion, distinguisher, experiments, extractor
from lowcon import nw_generator, toy_complexity
from lowcon.bitgraph import GraphParams
from lowcon.rational import format_fraction, to_fraction

EXIT_OK, EXIT_INVALID, EXIT_NOT_FOUND, EXIT_INTERNAL = 0, 2, 3, 4


class NotFound(Exception):
    """Raised after the report is written when a search came back empty."""


def _bits_arg(text: str) -> str:
    """``HEX:BITS`` -> bit string, e.g. ``5:4`` -> ``0101``."""
    try:
        hex_part, nbits = text.split(":")
        nbits = int(nbits)
        value = int(hex_part, 16) if hex_part else 0
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected HEX:BITS, got {text!r}") from exc
    if nbits < 1 or value >= (1 << nbits):
        raise argparse.ArgumentTypeError(f"{text!r}: value does not fit in {nbits} bits")
    return format(value, f"0{nbits}b")


def _set_arg(text: str) -> list[int]:
    try:
        return sorted({int(v) for v in text.split(",") if v.strip()})
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated vertices, got {text!r}") from exc


def _fraction_arg(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected a rational like 1/4, got {text!r}") from exc


def _params_arg(text: str) -> GraphParams:
    try:
        return GraphParams.from_string(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _load_graph(path) -> bitgraph.BipartiteGraph:
    return bitgraph.parse(Path(path).read_bytes())


def _load_system(path) -> toy_complexity.RelevantSystem:
    return toy_complexity.RelevantSystem.from_dict(json.loads(Path(path).read_text()))


def _load_config(path) -> codec.CodecConfig:
    return codec.CodecConfig.from_dict(json.loads(Path(path).read_text()))


def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _report(kind: str, body: dict) -> dict:
    return {"schema": f"lowcon.{kind}/1", **body}


def cmd_gen_graph(args):
    if args.rule == "const":
        g = bitgraph.BipartiteGraph.from_rule(args.params, lambda x, j: 0)
    else:
        g = bitgraph.random_graph(args.params, args.rng_seed)
    data = bitgraph.serialize(g)
    Path(args.out).write_bytes(data)
    sys.stdout.write(json.dumps(_report("graph", {
        "params": args.params.to_dict(), "rule": args.rule, "file": str(args.out),
        "bytes": len(data),
        "sha256": hashlib.sha256(data).hexdigest()}), sort_keys=True, indent=2) + "\n")


def cmd_check_extractor(args):
    g = _load_graph(args.graph)
    eps = g.params.eps if args.eps is None else args.eps
    set_size = g.params.K if args.set_size is None else args.set_size
    body = {"mode": args.mode, "set_size": set_size, "eps": format_fraction(eps)}
    if args.mode == "exhaustive":
        body["verdict"] = extractor.is_extractor_exhaustive(g, set_size, eps)
        body["worst_deviation"] = None
    else:
        verdict, worst = extractor.is_extractor_sampled(g, set_size, eps, args.trials, args.rng_seed)
        body.update(verdict=verdict, worst_deviation=format_fraction(worst),
                    trials=args.trials, rng_seed=args.rng_seed)
    if args.set is not None:
        body["deviation_report"] = extractor.deviation(g, args.set).to_dict()
    _emit(args, _report("extractor", body))


def cmd_congestion_report(args):
    g = _load_graph(args.graph)
    K = g.params.K if args.K is None else args.K
    rep = congestion.congestion_report(g, args.set, congestion.ClotSpec(args.alpha, K))
    _emit(args, _report("congestion", {"set": args.set, "alpha": format_fraction(args.alpha),
                                       "K": K, **rep.to_dict()}))


def cmd_peel(args):
    g = _load_graph(args.graph)
    K = g.params.K if args.K is None else args.K
    trace = congestion.peel(g, args.set, congestion.ClotSpec(args.alpha, K), args.max_iter)
    _emit(args, _report("peel", {"set": args.set, "alpha": format_fraction(args.alpha),
                                 "K": K, **trace.to_dict()}))


def cmd_build_system(args):
    system = toy_complexity.build_system(args.conditions, args.k, args.s_bar, args.n,
                                         padded=args.padded)
    if args.drop_singletons:
        system = toy_complexity.RelevantSystem(
            tuple(s for s in system.sets if len(s) > 1), system.K,
            tuple(p for s, p in zip(system.sets, system.provenance) if len(s) > 1))
    if args.K is not None:
        system = system.rebound(args.K)
    _emit(args, _report("system", system.to_dict()))


def _design_for(args, params: GraphParams) -> nw_generator.Design:
    return nw_generator.default_design(params.table_bits, args.design_t, args.design_overlap)


def _design_summary(design) -> dict:
    return {"l": design.l, "t": design.t, "max_overlap": design.max_overlap, "r": design.r}


def cmd_find_seed(args):
    params = args.params
    system = _load_system(args.system)
    alpha = args.alpha
    beta = alpha * params.eps if args.beta is None else args.beta
    design = _design_for(args, params)
    result = nw_generator.solve_R(params, design, system, alpha, beta, args.budget,
                                  args.mode, args.rng_seed)
    _emit(args, _report("seed", {**result.to_dict(), "design": _design_summary(design),
                                 "alpha": format_fraction(alpha), "beta": format_fraction(beta)}))
    if not result.found:
        raise NotFound(f"no good seed among {result.seeds_examined} candidates")


def cmd_build_distinguisher(args):
    c = distinguisher.build_distinguisher(args.params, _load_system(args.system))
    _emit(args, {**c.to_dict(), "stats": distinguisher.stats(c).to_dict()})


def cmd_eval_circuit(args):
    c = distinguisher.Circuit.from_dict(json.loads(Path(args.circuit).read_text()))
    g = _load_graph(args.graph)
    _emit(args, _report("eval", {"output": distinguisher.evaluate(c, g.to_bits())}))


def _plan(args, config):
    if args.plan_cache:
        return codec.cached_plan(config, args.plan_cache)
    return codec.plan_levels(config)


def cmd_encode(args):
    config = _load_config(args.config)
    plan = _plan(args, config)
    enc = codec.encode(args.a, args.b, config, plan)
    _emit(args, _report("encoding", {
        "b": args.b, **enc.to_dict(), "advice_bits": codec.advice_bits(enc, config, plan),
        "config_key": config.key()}))


def cmd_decode(args):
    config = _load_config(args.config)
    record = json.loads(Path(args.encoding).read_text())
    if record.get("config_key") not in (None, config.key()):
        raise codec.DecodeError("encoding was produced under a different configuration")
    enc = codec.Encoding.from_dict(record)
    a = codec.decode(enc.p, enc.advice(), record["b"], config, _plan(args, config))
    _emit(args, _report("decoding", {"a": a, "config_key": config.key()}))


def cmd_sweep(args):
    system = _load_system(args.system)
    design = _design_for(args, args.params) if args.source == "nw" else None
    rows = experiments.sweep(args.params, args.eps_list, args.graphs, system, args.alpha,
                             args.trials, args.rng_seed, source=args.source, design=design)
    _emit(args, experiments.sweep_csv(rows))


def cmd_compare(args):
    params = args.params
    alpha = args.alpha
    beta = alpha * params.eps if args.beta is None else args.beta
    report = experiments.compare_random_vs_nw(params, _design_for(args, params),
                                              _load_system(args.system), alpha, beta,
                                              args.samples, args.rng_seed)
    _emit(args, _report("compare", report))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lowcon", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, out_required=False):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--out", required=out_required, help="report path (default: stdout)")
        return p

    def design_knobs(p):
        p.add_argument("--design-t", type=int)
        p.add_argument("--design-overlap", type=int)

    alpha_default = Fraction(201, 100)

    p = add("gen-graph", cmd_gen_graph, "write a graph file; the summary goes to stdout",
            out_required=True)
    p.add_argument("--params", type=_params_arg, required=True)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--rule", choices=["random", "const"], default="random",
                   help="const sends every edge to right vertex 0")

    p = add("check-extractor", cmd_check_extractor, "exhaustive or sampled extractor check")
    p.add_argument("--graph", required=True)
    p.add_argument("--set-size", type=int)
    p.add_argument("--eps", type=_fraction_arg)
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--set", type=_set_arg, help="also report the deviation of this set")

    for name, func, text in (("congestion-report", cmd_congestion_report, "clot and congested vertices"),
                             ("peel", cmd_peel, "iterate the congested-set map")):
        p = add(name, func, text)
        p.add_argument("--graph", required=True)
        p.add_argument("--set", type=_set_arg, required=True)
        p.add_argument("--alpha", type=_fraction_arg, default=alpha_default)
        p.add_argument("--K", type=int)
        if name == "peel":
            p.add_argument("--max-iter", type=int, default=16)

    p = add("build-system", cmd_build_system, "relevant system from the toy machine")
    p.add_argument("--conditions", type=lambda t: [_bits_arg(c) for c in t.split(",")], required=True,
                   help="comma-separated HEX:BITS conditions")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s-bar", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--padded", action="store_true", help="use strings shorter than n, padded")
    p.add_argument("--drop-singletons", action="store_true")
    p.add_argument("--K", type=int, help="override the size bound (default 2^k)")

    p = add("find-seed", cmd_find_seed, "search a seed whose graph is low-congesting")
    p.add_argument("--params", type=_params_arg, required=True)
    p.add_argument("--system", required=True)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="sampled")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--alpha", type=_fraction_arg, default=alpha_default)
    p.add_argument("--beta", type=_fraction_arg)
    design_knobs(p)

    p = add("build-distinguisher", cmd_build_distinguisher, "circuit testing low congestion")
    p.add_argument("--params", type=_params_arg, required=True)
    p.add_argument("--system", required=True)

    p = add("eval-circuit", cmd_eval_circuit, "evaluate a circuit on a graph table")
    p.add_argument("--circuit", required=True)
    p.add_argument("--graph", required=True)

    for name, func in (("encode", cmd_encode), ("decode", cmd_decode)):
        p = add(name, func, f"{name} with the fingerprint codec")
        p.add_argument("--config", required=True, help="codec configuration JSON")
        p.add_argument("--plan-cache", help="directory of cached plans")
        if name == "encode":
            p.add_argument("--a", type=_bits_arg, required=True, help="HEX:BITS")
            p.add_argument("--b", type=_bits_arg, required=True, help="HEX:BITS")
        else:
            p.add_argument("--encoding", required=True, help="report written by encode")

    p = add("sweep", cmd_sweep, "grid of eps values x graphs, CSV rows")
    p.add_argument("--params", type=_params_arg, required=True)
    p.add_argument("--eps-list", type=lambda t: [_fraction_arg(v) for v in t.split(",")], required=True)
    p.add_argument("--graphs", type=int, default=20)
    p.add_argument("--system", required=True)
    p.add_argument("--alpha", type=_fraction_arg, default=alpha_default)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--source", choices=["random", "nw"], default="random")
    design_knobs(p)

    p = add("compare", cmd_compare, "pass rates on random vs generated graphs")
    p.add_argument("--params", type=_params_arg, required=True)
    p.add_argument("--system", required=True)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--alpha", type=_fraction_arg, default=alpha_default)
    p.add_argument("--beta", type=_fraction_arg)
    design_knobs(p)
    return parser


def _fail(exc: Exception, code: int) -> int:
    record = {"schema": "lowcon.error/1", "error": type(exc).__name__,
              "message": str(exc), "exit_code": code}
    sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
    return code


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (NotFound, codec.PlanError, codec.DecodeError) as exc:
        return _fail(exc, EXIT_NOT_FOUND)
    except (ValueError, codec.NotDescribable, extractor.EnumerationBudgetError,
            OSError, KeyError, TypeError, ZeroDivisionError) as exc:
        return _fail(exc, EXIT_INVALID)
    except Exception as exc:  # noqa: BLE001
        return _fail(exc, EXIT_INTERNAL)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
