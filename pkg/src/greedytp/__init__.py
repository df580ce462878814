"""Tree projections of hypergraph pairs via greedy capture games.

The package decides whether a pair (H1, H2) admits a tree projection, builds
one when it does, derives the classic width notions (generalized hypertree
width, hypertree width, treewidth and the greedy variant) from the same
engine, and answers conjunctive queries through acyclic rewritings.
"""

__version__ = "0.1.0"

from .hypergraph import (  # noqa: F401
    Hypergraph,
    JoinTree,
    parse_hypergraph,
    format_hypergraph,
    components,
    frontier,
    border,
    gaifman,
    gyo_reduce,
    is_acyclic,
    join_tree,
    leq,
)
