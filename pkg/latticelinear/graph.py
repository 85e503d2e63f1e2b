"""Immutable undirected graphs, random generation and the edge-list format.

Node ids are the consecutive integers ``0..n-1``; they double as list indices
and as the total order used by every tie-breaking rule.
"""

from __future__ import annotations

import hashlib
import logging
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, Optional, Tuple, Union

import networkx as nx

from .errors import InputError, ParseError
from .types import NodeId

logger = logging.getLogger(__name__)

Edge = Tuple[NodeId, NodeId]

# Radii queried by guards on every step.
_MEMOIZED_RADII = frozenset({2, 3, 4})


class Graph:
    """Undirected simple graph over nodes ``0..node_count-1``."""

    def __init__(self, node_count: int, edges: Iterable[Edge] = ()):
        if node_count < 1:
            raise InputError("A graph needs at least one node.")
        graph = nx.Graph()
        graph.add_nodes_from(range(node_count))
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise InputError(f"Edge ({u}, {v}) names a node outside 0..{node_count - 1}.")
            if u == v:
                raise InputError(f"Self-loop on node {u}.")
            graph.add_edge(u, v)
        self._graph = nx.freeze(graph)
        self._adjacency = tuple(tuple(sorted(graph.adj[i])) for i in range(node_count))
        self._edges = frozenset((min(u, v), max(u, v)) for u, v in graph.edges())
        self._hops: Dict[Tuple[NodeId, int], FrozenSet[NodeId]] = {}

    @property
    def node_count(self) -> int:
        return len(self._adjacency)

    @property
    def nodes(self) -> range:
        return range(self.node_count)

    @property
    def edges(self) -> FrozenSet[Edge]:
        """Edges as ``(low, high)`` pairs."""

        return self._edges

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def max_degree(self) -> int:
        return max(len(adj) for adj in self._adjacency)

    def _check(self, i: NodeId) -> None:
        if not (isinstance(i, int) and 0 <= i < self.node_count):
            raise InputError(f"Invalid node id {i!r} for a graph of {self.node_count} nodes.")

    def adjacency(self, i: NodeId) -> Tuple[NodeId, ...]:
        """Neighbours of ``i`` in increasing id order."""

        self._check(i)
        return self._adjacency[i]

    def degree(self, i: NodeId) -> int:
        self._check(i)
        return len(self._adjacency[i])

    def has_edge(self, u: NodeId, v: NodeId) -> bool:
        return (min(u, v), max(u, v)) in self._edges

    def adj_x(self, i: NodeId, x: int) -> FrozenSet[NodeId]:
        """Nodes at hop distance 1..x from ``i`` (``i`` itself excluded)."""

        self._check(i)
        if x < 0:
            raise InputError("Hop radius must be non-negative.")
        if x == 0:
            return frozenset()
        if x == 1:
            return frozenset(self._adjacency[i])
        key = (i, x)
        cached = self._hops.get(key)
        if cached is not None:
            return cached
        lengths = nx.single_source_shortest_path_length(self._graph, i, cutoff=x)
        result = frozenset(j for j in lengths if j != i)
        if x in _MEMOIZED_RADII:
            self._hops[key] = result
        return result

    def to_networkx(self) -> nx.Graph:
        """Return a mutable copy as a ``networkx.Graph``."""

        return self._graph.copy()

    def networkx_view(self) -> nx.Graph:
        """The underlying frozen ``networkx.Graph``; mutating it raises."""

        return self._graph

    def is_connected(self) -> bool:
        return nx.is_connected(self._graph)

    def digest(self) -> str:
        """Stable short hash of the node count and edge set."""

        return hashlib.sha256(write_edge_list(self).encode("utf-8")).hexdigest()[:16]

    def __iter__(self) -> Iterator[NodeId]:
        return iter(self.nodes)

    def __len__(self) -> int:
        return self.node_count

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.node_count == other.node_count and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self.node_count, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.node_count}, m={self.edge_count})"


def adj_x(g: Graph, i: NodeId, x: int) -> FrozenSet[NodeId]:
    """Module-level form of :meth:`Graph.adj_x`."""

    return g.adj_x(i, x)


def random_graph(n: int, m: int, seed: int) -> Graph:
    """Simple graph with exactly ``n`` nodes and ``m`` edges, reproducible per seed."""

    if n < 1:
        raise InputError("n must be positive.")
    if m < 0:
        raise InputError("m must be non-negative.")
    limit = n * (n - 1) // 2
    if m > limit:
        raise InputError(f"m={m} exceeds n(n-1)/2={limit} for n={n}.")
    generated = nx.gnm_random_graph(n, m, seed=seed)
    return Graph(n, generated.edges())


def read_edge_list(text: Union[str, bytes]) -> Tuple[Graph, int]:
    """Parse the edge-list format; return the graph and the duplicate-edge count."""

    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(f"Edge list is not UTF-8: {e}") from e

    declared: Optional[int] = None
    seen: set[Edge] = set()
    duplicates = 0
    highest = -1
    content_seen = False

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("n="):
            if content_seen or declared is not None:
                raise ParseError("the n=<int> header must come first", number)
            try:
                declared = int(line[2:])
            except ValueError:
                raise ParseError(f"bad node count {line[2:]!r}", number) from None
            if declared < 1:
                raise ParseError("node count must be positive", number)
            content_seen = True
            continue
        content_seen = True
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected '<u> <v>', got {raw.strip()!r}", number)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"node ids must be integers, got {raw.strip()!r}", number) from None
        if u < 0 or v < 0:
            raise ParseError("node ids must be non-negative", number)
        if u == v:
            raise ParseError(f"self-loop on node {u}", number)
        if declared is not None and max(u, v) >= declared:
            raise ParseError(f"node {max(u, v)} outside the declared n={declared}", number)
        edge = (min(u, v), max(u, v))
        if edge in seen:
            duplicates += 1
            continue
        seen.add(edge)
        highest = max(highest, v, u)

    node_count = declared if declared is not None else highest + 1
    if node_count < 1:
        raise ParseError("edge list declares no nodes")
    return Graph(node_count, sorted(seen)), duplicates


def parse_edge_list(text: Union[str, bytes]) -> Graph:
    """Parse an edge list, logging how many duplicate edges were collapsed."""

    graph, duplicates = read_edge_list(text)
    if duplicates:
        logger.warning("Collapsed %d duplicate edge(s) in edge list", duplicates)
    return graph


def write_edge_list(g: Graph) -> str:
    """Serialise ``g``; the ``n=`` header is always written."""

    lines = [f"n={g.node_count}"]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"


def load_graph(path: Path) -> Graph:
    return parse_edge_list(Path(path).read_bytes())


def complete_graph(n: int) -> Graph:
    return Graph(n, nx.complete_graph(n).edges())


def path_graph(n: int) -> Graph:
    return Graph(n, nx.path_graph(n).edges())
