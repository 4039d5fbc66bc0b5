"""Multilevel backbone extraction for weighted networks."""

from spine.graph import Graph, load_edge_list, global_properties

__version__ = "0.1.0"

__all__ = ["Graph", "load_edge_list", "global_properties", "__version__"]
