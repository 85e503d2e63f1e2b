"""Vertex cover programs.

* ``vc``: the 2-approximation that picks an edge ``{i, j}`` and adds both ends
  in one atomic action (node ``i`` writes node ``j``).
* ``vc-dist``: the same idea with ``i`` pointing at ``j`` and ``j`` joining on
  its own move, so every action writes only the acting node.
* ``naive-vc``: add/remove toggling with distance-2 tie-breaking. It is not
  lattice-linear; nodes may leave the cover after joining it.
"""

from __future__ import annotations

from itertools import product
from typing import Any, Mapping, Optional, Sequence

from .graph import Graph
from .oracles import is_minimal_vertex_cover, is_vertex_cover
from .program import MoveBudget, NodeProgram
from .states import IN, OUT, CoverState, Membership, PointerState, members
from .types import GlobalState, LocalState, NodeId, Writes


def neighbours_in(g: Graph, i: NodeId, view: Sequence[LocalState]) -> bool:
    return all(view[j].st is IN for j in g.adjacency(i))


def _highest_undone(g: Graph, i: NodeId, view: Sequence[LocalState]) -> bool:
    return all(j < i or view[j].done for j in g.adj_x(i, 3))


def _undone_neighbour(g: Graph, i: NodeId, view: Sequence[LocalState]) -> Optional[NodeId]:
    undone = [j for j in g.adjacency(i) if not view[j].done]
    return max(undone) if undone else None


class _CoverProgram(NodeProgram):
    fixed_init_only = True

    def optimal(self, g: Graph, state: GlobalState) -> bool:
        return all(v.done for v in state) and is_vertex_cover(g, members(state))

    def state_value(self, g: Graph, state: GlobalState, i: NodeId) -> int:
        if state[i].st is IN:
            return 0
        return sum(1 for j in g.adjacency(i) if state[j].st is OUT)

    def local_order_key(self, i: NodeId, value: LocalState, top: LocalState) -> int:
        # Transitions depend on done only.
        return 1 if value.done == top.done else 0

    def budget(self, g: Graph) -> MoveBudget:
        return MoveBudget.uniform(g.node_count, 2)

    def summarize(self, g: Graph, state: GlobalState) -> Mapping[str, Any]:
        cover = sorted(members(state))
        return {
            "vertex_cover": cover,
            "size": len(cover),
            "optimal": self.optimal(g, state),
        }


class TwoApproxVertexCover(_CoverProgram):
    name = "vc"
    view_radius = 3
    writes_neighbour = True

    def enabled(self, g: Graph, i: NodeId, view: Sequence[LocalState]) -> Optional[Writes]:
        me = view[i]
        if me.done or not _highest_undone(g, i, view):
            return None
        if neighbours_in(g, i, view):
            return {i: me.finished()}
        j = _undone_neighbour(g, i, view)
        if j is None:
            # Uncovered edge but no undone partner; never reached from the fixed init.
            return {i: me.finished()}
        return {i: CoverState(IN, True), j: CoverState(IN, True)}

    def domain(self, g: Graph, i: NodeId, cap: Optional[int] = None) -> Sequence[LocalState]:
        return tuple(CoverState(st, done) for st, done in product((OUT, IN), (False, True)))

    def initial_state(self, g: Graph) -> GlobalState:
        return (CoverState(),) * g.node_count

    def check_local(self, g: Graph, i: NodeId, value: LocalState) -> bool:
        return isinstance(value, CoverState)


def pointed(g: Graph, i: NodeId, view: Sequence[LocalState]) -> bool:
    """Some neighbour points at ``i``."""

    return any(view[j].point == i for j in g.adjacency(i))


def else_pointed(g: Graph, i: NodeId, view: Sequence[LocalState]) -> bool:
    """A node within four hops is pointed at and has not acted yet."""

    for j in g.adj_x(i, 4):
        if view[j].done:
            continue
        if any(view[k].point == j for k in g.adjacency(j)):
            return True
    return False


class DistributedVertexCover(_CoverProgram):
    name = "vc-dist"
    view_radius = 5

    def enabled(self, g: Graph, i: NodeId, view: Sequence[LocalState]) -> Optional[Writes]:
        me = view[i]
        if me.done:
            return None
        if pointed(g, i, view):
            st = me.st if neighbours_in(g, i, view) else IN
            return {i: PointerState(st, True, me.point)}
        if else_pointed(g, i, view) or not _highest_undone(g, i, view):
            return None
        if neighbours_in(g, i, view):
            return {i: PointerState(me.st, True, me.point)}
        j = _undone_neighbour(g, i, view)
        if j is None:
            return {i: PointerState(me.st, True, me.point)}
        return {i: PointerState(IN, True, j)}

    def domain(self, g: Graph, i: NodeId, cap: Optional[int] = None) -> Sequence[LocalState]:
        targets = (None, *g.adjacency(i))
        return tuple(
            PointerState(st, done, point)
            for st, done, point in product((OUT, IN), (False, True), targets)
        )

    def initial_state(self, g: Graph) -> GlobalState:
        return (PointerState(),) * g.node_count

    def check_local(self, g: Graph, i: NodeId, value: LocalState) -> bool:
        if not isinstance(value, PointerState):
            return False
        return value.point is None or value.point in g.adjacency(i)


def _naive_addable(g: Graph, i: NodeId, view: Sequence[LocalState]) -> bool:
    return view[i] is OUT and any(view[j] is OUT for j in g.adjacency(i))


def _naive_removable(g: Graph, i: NodeId, view: Sequence[LocalState]) -> bool:
    return view[i] is IN and all(view[j] is IN for j in g.adjacency(i))


def _naive_flagged(g: Graph, i: NodeId, view: Sequence[LocalState]) -> bool:
    return _naive_addable(g, i, view) or _naive_removable(g, i, view)


class NaiveVertexCover(NodeProgram):
    name = "naive-vc"
    view_radius = 3

    def enabled(self, g: Graph, i: NodeId, view: Sequence[LocalState]) -> Optional[Writes]:
        if not _naive_flagged(g, i, view):
            return None
        for j in g.adj_x(i, 2):
            if j > i and _naive_flagged(g, j, view):
                return None
        return {i: view[i].flipped()}

    def optimal(self, g: Graph, state: GlobalState) -> bool:
        return is_minimal_vertex_cover(g, members(state))

    def state_value(self, g: Graph, state: GlobalState, i: NodeId) -> int:
        return 1 if _naive_flagged(g, i, state) else 0

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
        cover = sorted(members(state))
        return {"vertex_cover": cover, "size": len(cover), "optimal": self.optimal(g, state)}


def vc_program() -> TwoApproxVertexCover:
    return TwoApproxVertexCover()


def vc_distributed_program() -> DistributedVertexCover:
    return DistributedVertexCover()


def naive_vc_program() -> NaiveVertexCover:
    return NaiveVertexCover()
