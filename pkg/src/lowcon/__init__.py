"""Low-congesting graphs, Nisan-style seed search and a toy fingerprint codec."""

from lowcon.bitgraph import BipartiteGraph, GraphParams, GraphError

__version__ = "0.1.0"

__all__ = ["BipartiteGraph", "GraphParams", "GraphError", "__version__"]
