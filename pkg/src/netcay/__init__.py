"""Relative Frattini subgroups, normal edge-transitive Cayley graphs and dihedral 4-valent classification."""

from .groups import FiniteGroup, Subgroup, parse_group_spec
from .frattini import ConnectionSet, make_connection_set, relative_frattini
from .cayley import CayleyGraph, cayley_graph, decompose
from .dihedral import classify_4valent, enumerate_4valent

__version__ = "0.1.0"

__all__ = [
    "FiniteGroup",
    "Subgroup",
    "parse_group_spec",
    "ConnectionSet",
    "make_connection_set",
    "relative_frattini",
    "CayleyGraph",
    "cayley_graph",
    "decompose",
    "classify_4valent",
    "enumerate_4valent",
]
