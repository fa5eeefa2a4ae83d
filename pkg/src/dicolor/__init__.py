"""Acyclic colorings of digraphs without directed triangles."""
from .coloring import (
    NotC3FreeError,
    RunReport,
    acyclic_dominating_set,
    color_budget,
    color_c3_free,
    find_chain,
    is_bag,
    is_poor_bag,
    out_quasi_dominating_set,
    stable_dominating_set,
)
from .digraph import Digraph, find_directed_triangle, is_acyclic
from .instances import InstanceSpec, generate
from .oracles import Coloring, dichromatic_number, independence_number, max_acyclic_set, verify_coloring

__version__ = "0.1.0"
