"""Toolkit for action-based AMR concept identification and parsing.

The pipeline turns annotated sentences into AMR graphs in three stages:
token spans are classified into derivation actions, the actions are
executed to produce small concept subgraphs ("fragments"), and the
fragments are stitched into a single rooted graph by a greedy maximum
spanning connected subgraph step. Supporting modules handle Penman
text, corpus files, node-to-token alignment, and smatch evaluation.
"""

__version__ = "0.1.0"

from amrkit.graph import (
    AmrEdge,
    AmrFragment,
    AmrGraph,
    AmrNode,
    GraphError,
    NodeKind,
    PenmanError,
    isomorphic,
    make_graph,
    parse_penman,
    print_penman,
    triples,
)
from amrkit.actions import (
    ActionError,
    ActionLabel,
    DEFAULT_RELIABILITY,
    ReliabilityTable,
    applicable_actions,
    estimate_reliability,
    execute,
    most_reliable,
)
from amrkit.jaro import jaro_winkler

__all__ = [
    "AmrEdge",
    "AmrFragment",
    "AmrGraph",
    "AmrNode",
    "GraphError",
    "NodeKind",
    "PenmanError",
    "isomorphic",
    "make_graph",
    "parse_penman",
    "print_penman",
    "triples",
    "ActionError",
    "ActionLabel",
    "DEFAULT_RELIABILITY",
    "ReliabilityTable",
    "applicable_actions",
    "estimate_reliability",
    "execute",
    "most_reliable",
    "jaro_winkler",
]
