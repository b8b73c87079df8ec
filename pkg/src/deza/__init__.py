"""Enumeration and classification of strictly Deza graphs."""

from .feasibility import DezaParams, feasible_params, multiplicities
from .graph import Graph, classify_regular_deza, children, common_neighbours, diameter

__version__ = "0.1.0"

__all__ = [
    "DezaParams", "Graph", "children", "classify_regular_deza", "common_neighbours",
    "diameter", "feasible_params", "multiplicities",
]
