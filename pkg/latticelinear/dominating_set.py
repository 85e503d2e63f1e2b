"""Minimal dominating set programs.

``mds`` is the fully lattice-linear algorithm: an unsatisfied node toggles its
membership when no higher-id node within two hops is unsatisfied. ``mds-ell``
is the eventually lattice-linear variant: undominated nodes join freely, and
only the highest removable node in its distance-2 neighbourhood may leave.
"""

from __future__ import annotations

from typing import Any, Dict, Mapping, Optional, Sequence

from .graph import Graph
from .oracles import is_dominating_set, is_minimal_dominating_set
from .program import MoveBudget, NodeProgram
from .states import IN, OUT, Membership, members
from .types import GlobalState, LocalState, NodeId, Writes


def addable(g: Graph, i: NodeId, view: Sequence[LocalState]) -> bool:
    """``i`` and all its neighbours are out."""

    return view[i] is OUT and all(view[j] is OUT for j in g.adjacency(i))


def removable(g: Graph, i: NodeId, view: Sequence[LocalState]) -> bool:
    """``i`` is in, and it and its neighbours stay dominated without it."""

    if view[i] is not IN:
        return False
    for j in (*g.adjacency(i), i):
        if j != i and view[j] is IN:
            continue
        if not any(k != i and view[k] is IN for k in g.adjacency(j)):
            return False
    return True


def unsatisfied(g: Graph, i: NodeId, view: Sequence[LocalState]) -> bool:
    return removable(g, i, view) or addable(g, i, view)


def _highest_within(g: Graph, i: NodeId, flags: Mapping[NodeId, bool]) -> bool:
    return all(not flags[j] or j < i for j in g.adj_x(i, 2))


class MinimalDominatingSet(NodeProgram):
    name = "mds"
    view_radius = 4

    def enabled(self, g: Graph, i: NodeId, view: Sequence[LocalState]) -> Optional[Writes]:
        if not unsatisfied(g, i, view):
            return None
        for j in g.adj_x(i, 2):
            if j > i and unsatisfied(g, j, view):
                return None
        return {i: view[i].flipped()}

    def enabled_moves(self, g: Graph, state: GlobalState) -> Dict[NodeId, Writes]:
        flags = {i: unsatisfied(g, i, state) for i in g.nodes}
        return {
            i: {i: state[i].flipped()}
            for i in g.nodes
            if flags[i] and _highest_within(g, i, flags)
        }

    def optimal(self, g: Graph, state: GlobalState) -> bool:
        return is_minimal_dominating_set(g, members(state))

    def state_value(self, g: Graph, state: GlobalState, i: NodeId) -> int:
        return 1 if unsatisfied(g, i, state) else 0

    def domain(self, g: Graph, i: NodeId, cap: Optional[int] = None) -> Sequence[LocalState]:
        return (IN, OUT)

    def budget(self, g: Graph) -> MoveBudget:
        return MoveBudget.uniform(g.node_count, 2)

    def initial_state(self, g: Graph) -> GlobalState:
        return (OUT,) * g.node_count

    def check_local(self, g: Graph, i: NodeId, value: LocalState) -> bool:
        return isinstance(value, Membership)

    def parse_local(self, g: Graph, i: NodeId, token: str) -> LocalState:
        return Membership.parse(token)

    def summarize(self, g: Graph, state: GlobalState) -> Mapping[str, Any]:
        chosen = sorted(members(state))
        return {
            "dominating_set": chosen,
            "size": len(chosen),
            "optimal": self.optimal(g, state),
        }


class EventuallyLatticeLinearDominatingSet(MinimalDominatingSet):
    """Two-phase MDS: additions first, then lattice-linear removals."""

    name = "mds-ell"

    def enabled(self, g: Graph, i: NodeId, view: Sequence[LocalState]) -> Optional[Writes]:
        if addable(g, i, view):
            return {i: IN}
        if removable(g, i, view):
            for j in g.adj_x(i, 2):
                if j > i and removable(g, j, view):
                    return None
            return {i: OUT}
        return None

    def enabled_moves(self, g: Graph, state: GlobalState) -> Dict[NodeId, Writes]:
        flags = {i: removable(g, i, state) for i in g.nodes}
        moves: Dict[NodeId, Writes] = {}
        for i in g.nodes:
            if addable(g, i, state):
                moves[i] = {i: IN}
            elif flags[i] and _highest_within(g, i, flags):
                moves[i] = {i: OUT}
        return moves

    def feasible(self, g: Graph, state: GlobalState) -> bool:
        return is_dominating_set(g, members(state))

    def budget(self, g: Graph) -> MoveBudget:
        return MoveBudget.uniform(g.node_count, 2, phases=2)


def mds_program() -> MinimalDominatingSet:
    return MinimalDominatingSet()


def mds_eventually_ll_program() -> EventuallyLatticeLinearDominatingSet:
    return EventuallyLatticeLinearDominatingSet()
