"""Exhaustive search for Deza and strongly regular graphs."""

from .engine import (
    Budget,
    EnumeratedGraph,
    EnumerationRun,
    PartialMatrix,
    SearchOptions,
    SRGParams,
    TupleResult,
    complete_exhaustive,
    enumerate_all,
    enumerate_params,
    enumerate_srg,
    extend_row_blockwise,
    partial_equivalent,
    prefixes_at,
    seed_prefix,
)

__all__ = [
    "Budget", "EnumeratedGraph", "EnumerationRun", "PartialMatrix", "SearchOptions",
    "SRGParams", "TupleResult", "complete_exhaustive", "enumerate_all", "enumerate_params",
    "enumerate_srg", "extend_row_blockwise", "partial_equivalent", "prefixes_at", "seed_prefix",
]
