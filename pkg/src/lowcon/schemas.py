"""Versioned JSON Schemas for every report the command line writes."""

RATIONAL = {"type": "string", "pattern": r"^-?\d+/\d+$"}
INT_LIST = {"type": "array", "items": {"type": "integer", "minimum": 0}}
PARAMS = {
    "type": "object",
    "required": ["n", "m", "d", "k", "eps"],
    "properties": {"n": {"type": "integer"}, "m": {"type": "integer"},
                   "d": {"type": "integer"}, "k": {"type": "integer"}, "eps": RATIONAL},
}


def _report(name, required, properties):
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "required": ["schema", *required],
        "properties": {"schema": {"const": f"lowcon.{name}/1"}, **properties},
    }


SCHEMAS = {
    "graph": _report("graph", ["params", "file", "bytes", "sha256"], {
        "params": PARAMS, "file": {"type": "string"},
        "bytes": {"type": "integer"}, "sha256": {"type": "string"},
    }),
    "extractor": _report("extractor", ["mode", "set_size", "eps", "verdict", "worst_deviation"], {
        "mode": {"enum": ["exhaustive", "sampled"]},
        "set_size": {"type": "integer"}, "eps": RATIONAL,
        "verdict": {"type": "boolean"}, "worst_deviation": {"anyOf": [RATIONAL, {"type": "null"}]},
        "trials": {"type": "integer"}, "rng_seed": {"type": "integer"},
        "deviation_report": {
            "type": "object", "required": ["set", "deviation", "worst_Y"],
            "properties": {"set": INT_LIST, "deviation": RATIONAL, "worst_Y": INT_LIST},
        },
    }),
    "congestion": _report("congestion", ["set", "alpha", "K", "clot", "congested", "threshold"], {
        "set": INT_LIST, "alpha": RATIONAL, "K": {"type": "integer"},
        "clot": INT_LIST, "congested": INT_LIST, "threshold": RATIONAL,
    }),
    "peel": _report("peel", ["set", "alpha", "K", "levels", "terminated"], {
        "set": INT_LIST, "alpha": RATIONAL, "K": {"type": "integer"},
        "levels": {"type": "array", "items": INT_LIST}, "terminated": {"type": "boolean"},
    }),
    "system": _report("system", ["K", "sets", "provenance"], {
        "K": {"type": "integer"},
        "sets": {"type": "array", "items": INT_LIST},
        "provenance": {"type": "array", "items": {"anyOf": [
            {"type": "null"},
            {"type": "object", "required": ["condition", "space"],
             "properties": {"condition": {"type": "string", "pattern": "^[01]*$"},
                            "space": {"type": "integer"}}}]}},
    }),
    "seed": _report("seed", ["found", "seed", "seeds_examined", "mode", "design"], {
        "found": {"type": "boolean"},
        "seed": {"anyOf": [{"type": "string", "pattern": "^[01]+$"}, {"type": "null"}]},
        "seeds_examined": {"type": "integer", "minimum": 0},
        "mode": {"enum": ["exhaustive", "sampled"]},
        "design": {"type": "object", "required": ["l", "t", "max_overlap", "r"]},
    }),
    "circuit": _report("circuit", ["output", "gates"], {
        "output": {"type": "integer"},
        "gates": {"type": "array", "items": {
            "type": "object", "required": ["kind", "inputs"],
            "properties": {"kind": {"enum": ["INPUT", "NOT", "AND", "OR", "APPROX_THRESHOLD"]},
                           "inputs": INT_LIST, "bit": {"type": "integer"},
                           "low": RATIONAL, "high": RATIONAL}}},
        "stats": {"type": "object", "required": ["size", "depth"]},
    }),
    "eval": _report("eval", ["output"], {"output": {"enum": [0, 1]}}),
    "encoding": _report("encoding", ["b", "p_hex", "p_bits", "advice", "advice_bits", "config_key"], {
        "b": {"type": "string", "pattern": "^[01]+$"},
        "p_hex": {"type": "string", "pattern": "^[0-9a-f]*$"},
        "p_bits": {"type": "integer", "minimum": 0},
        "advice": {"type": "object", "required": ["level", "pivot", "ordinal", "edge"]},
        "advice_bits": {"type": "object", "required": ["level", "pivot", "ordinal", "edge", "total"]},
        "config_key": {"type": "string"},
    }),
    "decoding": _report("decoding", ["a", "config_key"], {
        "a": {"type": "string", "pattern": "^[01]+$"}, "config_key": {"type": "string"},
    }),
    "compare": _report("compare", ["random_rate", "nw_rate", "ratio", "samples"], {
        "random_rate": RATIONAL, "nw_rate": RATIONAL,
        "ratio": {"anyOf": [RATIONAL, {"type": "null"}]}, "samples": {"type": "integer"},
    }),
    "error": _report("error", ["error", "message", "exit_code"], {
        "error": {"type": "string"}, "message": {"type": "string"},
        "exit_code": {"enum": [2, 3, 4]},
    }),
}
