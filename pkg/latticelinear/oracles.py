"""Brute-force legitimacy checks, independent of the guard macros."""

from __future__ import annotations

from itertools import combinations
from typing import AbstractSet, Sequence

import networkx as nx

from .graph import Graph
from .types import NodeId


def is_dominating_set(g: Graph, chosen: AbstractSet[NodeId]) -> bool:
    if not chosen:
        return False
    return nx.is_dominating_set(g.networkx_view(), chosen)


def is_minimal_dominating_set(g: Graph, chosen: AbstractSet[NodeId]) -> bool:
    """Dominating, and no member can be dropped."""

    if not is_dominating_set(g, chosen):
        return False
    return all(not is_dominating_set(g, chosen - {v}) for v in chosen)


def is_proper_colouring(g: Graph, colours: Sequence[int]) -> bool:
    return all(colours[u] != colours[v] for u, v in g.edges)


def is_irreducible_colouring(g: Graph, colours: Sequence[int]) -> bool:
    """No node could take a smaller colour unused by its neighbours."""

    for i in g.nodes:
        used = {colours[j] for j in g.adjacency(i)}
        if any(c not in used for c in range(1, colours[i])):
            return False
    return True


def is_vertex_cover(g: Graph, chosen: AbstractSet[NodeId]) -> bool:
    return all(u in chosen or v in chosen for u, v in g.edges)


def is_minimal_vertex_cover(g: Graph, chosen: AbstractSet[NodeId]) -> bool:
    if not is_vertex_cover(g, chosen):
        return False
    return all(not is_vertex_cover(g, chosen - {v}) for v in chosen)


def minimum_vertex_cover_size(g: Graph) -> int:
    """Exhaustive search over subsets in increasing size."""

    for size in range(g.node_count + 1):
        for subset in combinations(g.nodes, size):
            if is_vertex_cover(g, frozenset(subset)):
                return size
    return g.node_count
