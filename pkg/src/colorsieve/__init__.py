"""Algebraic color coding: branching and matching problems decided by
sieving exact determinants and Pfaffians over splitter colorings."""

from .graph_core import (
    Arc,
    ArcColoredDigraph,
    ArcMatching,
    GraphError,
    OutBranching,
    ParseError,
    exchange_out_branching,
    has_out_branching,
    maximum_matching,
    parse_digraph,
)
from .planar_pfaffian import PlanarEmbeddedGraph, kasteleyn_orient, parse_planar
from .solvers import (
    SolveConfig,
    SolveReport,
    recover_kiob_witness,
    solve_colorful_ob,
    solve_colorful_ob_exact,
    solve_colorful_pm,
    solve_kiob,
)
from .splitters import greedy_splitter, indexed_splitter, perfect_hash_family

__all__ = [
    "Arc",
    "ArcColoredDigraph",
    "ArcMatching",
    "GraphError",
    "OutBranching",
    "ParseError",
    "PlanarEmbeddedGraph",
    "SolveConfig",
    "SolveReport",
    "exchange_out_branching",
    "greedy_splitter",
    "has_out_branching",
    "indexed_splitter",
    "kasteleyn_orient",
    "maximum_matching",
    "parse_digraph",
    "parse_planar",
    "perfect_hash_family",
    "recover_kiob_witness",
    "solve_colorful_ob",
    "solve_colorful_ob_exact",
    "solve_colorful_pm",
    "solve_kiob",
]
