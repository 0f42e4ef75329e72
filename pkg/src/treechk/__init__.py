"""Anonymous local checkers on colored trees, tree surgery and diameter landscapes."""
from __future__ import annotations

from .core import (
    ColoredGraph,
    ColoredTree,
    EdgeView,
    NodeView,
    RootedTree,
    are_isomorphic,
    canonical_code,
    diameter,
    edge_view,
    enumerate_trees,
    node_view,
    validate,
    view_code,
)

__all__ = [
    "ColoredGraph",
    "ColoredTree",
    "EdgeView",
    "NodeView",
    "RootedTree",
    "are_isomorphic",
    "canonical_code",
    "diameter",
    "edge_view",
    "enumerate_trees",
    "node_view",
    "validate",
    "view_code",
]
