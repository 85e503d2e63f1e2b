"""Lattice-linear graph colouring.

Only the highest-id unsatisfied node of the whole graph moves; it takes the
smallest positive colour that none of its neighbours uses.
"""

from __future__ import annotations

from typing import Any, Dict, Mapping, Optional, Sequence

import numpy as np

from .errors import InputError
from .graph import Graph
from .oracles import is_irreducible_colouring, is_proper_colouring
from .program import MoveBudget, NodeProgram
from .types import GlobalState, LocalState, NodeId, Writes


def conflicted(g: Graph, i: NodeId, view: Sequence[LocalState]) -> bool:
    return any(view[j] == view[i] for j in g.adjacency(i))


def reducible(g: Graph, i: NodeId, view: Sequence[LocalState]) -> bool:
    used = {view[j] for j in g.adjacency(i)}
    return any(c not in used for c in range(1, view[i]))


def unsatisfied(g: Graph, i: NodeId, view: Sequence[LocalState]) -> bool:
    return conflicted(g, i, view) or reducible(g, i, view)


def smallest_free_colour(g: Graph, i: NodeId, view: Sequence[LocalState]) -> int:
    used = {view[j] for j in g.adjacency(i)}
    colour = 1
    while colour in used:
        colour += 1
    return colour


class GraphColouring(NodeProgram):
    name = "gc"
    view_radius = None

    def __init__(self, max_init_colour: Optional[int] = None):
        if max_init_colour is not None and max_init_colour < 1:
            raise InputError("max_init_colour must be positive.")
        self.max_init_colour = max_init_colour

    def enabled(self, g: Graph, i: NodeId, view: Sequence[LocalState]) -> Optional[Writes]:
        if not unsatisfied(g, i, view):
            return None
        for j in range(i + 1, g.node_count):
            if unsatisfied(g, j, view):
                return None
        return {i: smallest_free_colour(g, i, view)}

    def enabled_moves(self, g: Graph, state: GlobalState) -> Dict[NodeId, Writes]:
        for i in reversed(g.nodes):
            if unsatisfied(g, i, state):
                return {i: {i: smallest_free_colour(g, i, state)}}
        return {}

    def optimal(self, g: Graph, state: GlobalState) -> bool:
        return is_proper_colouring(g, state) and is_irreducible_colouring(g, state)

    def state_value(self, g: Graph, state: GlobalState, i: NodeId) -> int:
        if unsatisfied(g, i, state):
            return g.degree(i) + 2
        return state[i]

    def local_order_key(self, i: NodeId, value: LocalState, top: LocalState) -> int:
        # Smaller colours sit higher; the class supremum's colour is the top.
        return 0 if value == top else -value

    def history_ok(self, values: Sequence[LocalState]) -> bool:
        later = values[1:]
        return all(a > b for a, b in zip(later, later[1:]))

    def default_cap(self, g: Graph) -> int:
        return g.max_degree + 2

    def domain(self, g: Graph, i: NodeId, cap: Optional[int] = None) -> Sequence[LocalState]:
        if cap is None:
            cap = self.max_init_colour or self.default_cap(g)
        if cap < g.max_degree + 1:
            raise InputError(
                f"Colour cap {cap} is below max degree + 1 = {g.max_degree + 1}; "
                "recolouring would leave the domain."
            )
        return tuple(range(1, cap + 1))

    def random_state(self, g: Graph, rng: np.random.Generator) -> GlobalState:
        top = self.max_init_colour or self.default_cap(g)
        return tuple(int(c) for c in rng.integers(1, top + 1, size=g.node_count))

    def budget(self, g: Graph) -> MoveBudget:
        return MoveBudget(g.node_count, tuple(g.degree(i) + 2 for i in g.nodes))

    def initial_state(self, g: Graph) -> GlobalState:
        return (1,) * g.node_count

    def check_local(self, g: Graph, i: NodeId, value: LocalState) -> bool:
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            return False
        return self.max_init_colour is None or value <= self.max_init_colour

    def validate(self, g: Graph, state: GlobalState) -> None:
        bad = [c for c in state if isinstance(c, int) and not isinstance(c, bool) and c < 1]
        if bad:
            raise InputError(f"gc: colours must be at least 1, got {bad[0]}.")
        super().validate(g, state)

    def parse_local(self, g: Graph, i: NodeId, token: str) -> LocalState:
        try:
            return int(token)
        except ValueError:
            raise InputError(f"gc: colour must be an integer, got {token!r}.") from None

    def summarize(self, g: Graph, state: GlobalState) -> Mapping[str, Any]:
        return {
            "colours": list(state),
            "colour_count": len(set(state)),
            "optimal": self.optimal(g, state),
        }


def gc_program(max_init_colour: Optional[int] = None) -> GraphColouring:
    return GraphColouring(max_init_colour)
