"""Exhaustive small-instance oracle for lattice-linear programs.

:func:`explore` builds the state space with its single-node transitions,
:func:`verify_partition` splits it into classes by converged endpoint and
checks each class, and :func:`impedensable`, :func:`meet`, :func:`join` and
:func:`rank` answer order questions inside a class.
"""

from __future__ import annotations

import json
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import (Any, Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional,
                    Sequence, Set, Tuple)

import networkx as nx

from .engine import Daemon, ExecutionTrace, Outcome, ReadModel, budget_for, run
from .errors import CapacityError, InputError
from .graph import Graph
from .program import NodeProgram
from .states import encode_state, format_state
from .types import GlobalState, NodeId

logger = logging.getLogger(__name__)

DEFAULT_CAPACITY = 1 << 20
# Classes larger than this skip the quadratic meet/join closure check.
CLOSURE_LIMIT = 256


@dataclass
class StateSpace:
    """States of one (program, graph, domain cap) triple and their transitions."""

    graph: Graph
    program: str
    states: List[GlobalState]
    transitions: Dict[GlobalState, FrozenSet[GlobalState]]
    dead_ends: FrozenSet[GlobalState] = frozenset()
    reachable_from: Optional[GlobalState] = None
    domain_cap: Optional[int] = None
    feasible_only: bool = False

    def __len__(self) -> int:
        return len(self.states)

    def __contains__(self, state: object) -> bool:
        return state in self.transitions

    def __iter__(self) -> Iterator[GlobalState]:
        return iter(self.states)

    def successors(self, state: GlobalState) -> FrozenSet[GlobalState]:
        return self.transitions[state]


def _successors(prog: NodeProgram, g: Graph, state: GlobalState) -> Tuple[Set[GlobalState], bool]:
    successors: Set[GlobalState] = set()
    dead_end = False
    for i, action in prog.enabled_moves(g, state).items():
        nxt = prog.apply(i, state, action)
        if prog.exhausted(nxt) is not None:
            dead_end = True
            continue
        successors.add(nxt)
    return successors, dead_end


def explore(prog: NodeProgram, g: Graph, domain_cap: Optional[int] = None, *,
            reachable_from: Optional[GlobalState] = None, feasible_only: bool = False,
            capacity: int = DEFAULT_CAPACITY) -> StateSpace:
    """Enumerate states and central-daemon transitions.

    With ``reachable_from`` only states reachable from that state are kept;
    with ``feasible_only`` only states satisfying ``prog.feasible``.
    """

    keep: Callable[[GlobalState], bool] = (
        (lambda s: prog.feasible(g, s)) if feasible_only else (lambda s: True)
    )
    transitions: Dict[GlobalState, FrozenSet[GlobalState]] = {}
    states: List[GlobalState] = []
    dead_ends: Set[GlobalState] = set()

    if reachable_from is None:
        domains = [prog.domain(g, i, domain_cap) for i in g.nodes]
        size = math.prod(len(d) for d in domains)
        if size > capacity:
            raise CapacityError(f"{prog.name}: {size} states exceed the capacity of {capacity}.")
        states = [s for s in product(*domains) if keep(s)]
        members = set(states)
        for s in states:
            successors, dead_end = _successors(prog, g, s)
            transitions[s] = frozenset(t for t in successors if t in members)
            if dead_end:
                dead_ends.add(s)
    else:
        start = tuple(reachable_from)
        prog.validate(g, start)
        queue = deque([start])
        seen = {start}
        # --- Breadth-first search ----------------------------------------
        while queue:
            s = queue.popleft()
            states.append(s)
            successors, dead_end = _successors(prog, g, s)
            successors = {t for t in successors if keep(t)}
            transitions[s] = frozenset(successors)
            if dead_end:
                dead_ends.add(s)
            for t in successors:
                if t not in seen:
                    if len(seen) >= capacity:
                        raise CapacityError(
                            f"{prog.name}: more than {capacity} reachable states."
                        )
                    seen.add(t)
                    queue.append(t)

    logger.info("Explored %d states for %s on %r", len(states), prog.name, g)
    return StateSpace(g, prog.name, states, transitions, frozenset(dead_ends),
                      reachable_from=None if reachable_from is None else tuple(reachable_from),
                      domain_cap=domain_cap, feasible_only=feasible_only)


def rank(s: GlobalState, prog: NodeProgram, g: Graph) -> int:
    """Sum of the per-node State-Value."""

    return sum(prog.state_value(g, s, i) for i in g.nodes)


@dataclass
class LatticeClass:
    """States sharing one converged endpoint, the class supremum."""

    supremum: GlobalState
    states: FrozenSet[GlobalState]
    infimum: Optional[GlobalState] = None
    meet_join_closed: Optional[bool] = None  # None when the class is too large to check
    optimal: bool = True

    def __len__(self) -> int:
        return len(self.states)

    def __contains__(self, state: object) -> bool:
        return state in self.states


@dataclass(frozen=True)
class RevisitWitness:
    """A node that returned to an earlier value along a run."""

    start: GlobalState
    node: NodeId
    values: tuple
    trace: Tuple[GlobalState, ...]


@dataclass
class LatticeReport:
    program: str
    graph: Graph
    classes: List[LatticeClass]
    disjoint: bool
    exhaustive: bool
    suprema_optimal: bool
    revisit_violations: List[RevisitWitness] = field(default_factory=list)
    ambiguous: List[GlobalState] = field(default_factory=list)
    divergent: List[GlobalState] = field(default_factory=list)
    unsolvable: List[GlobalState] = field(default_factory=list)
    rank_violations: List[Tuple[GlobalState, GlobalState]] = field(default_factory=list)
    domain_cap: Optional[int] = None
    explored: int = 0
    predicate_lattice: bool = False
    _index: Dict[GlobalState, LatticeClass] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for cls in self.classes:
            for s in cls.states:
                self._index.setdefault(s, cls)

    @property
    def width(self) -> int:
        """Number of disjoint lattices."""

        return len(self.classes)

    @property
    def suprema(self) -> List[GlobalState]:
        return [cls.supremum for cls in self.classes]

    @property
    def ok(self) -> bool:
        """No violation. Rank violations are reported but do not count."""

        return (
            self.disjoint
            and self.exhaustive
            and self.suprema_optimal
            and not self.revisit_violations
            and not self.divergent
        )

    def class_of(self, state: GlobalState) -> Optional[LatticeClass]:
        """The first class holding ``state``; ambiguous states sit in several."""

        return self._index.get(tuple(state))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "algorithm": self.program,
            "graph_hash": self.graph.digest(),
            "explored": self.explored,
            "domain_cap": self.domain_cap,
            "width": self.width,
            "disjoint": self.disjoint,
            "exhaustive": self.exhaustive,
            "suprema_optimal": self.suprema_optimal,
            "ok": self.ok,
            "classes": [
                {
                    "supremum": encode_state(cls.supremum),
                    "infimum": None if cls.infimum is None else encode_state(cls.infimum),
                    "size": len(cls),
                    "optimal": cls.optimal,
                    "meet_join_closed": cls.meet_join_closed,
                    "states": [encode_state(s) for s in cls.states],
                }
                for cls in self.classes
            ],
            "revisit_violations": [
                {"start": encode_state(w.start), "node": w.node,
                 "values": encode_state(w.values)}
                for w in self.revisit_violations
            ],
            "ambiguous": [encode_state(s) for s in self.ambiguous],
            "divergent": [encode_state(s) for s in self.divergent],
            "unsolvable": [encode_state(s) for s in self.unsolvable],
            "rank_violations": len(self.rank_violations),
        }


def report_to_json(report: LatticeReport, indent: Optional[int] = 2) -> str:
    return json.dumps(report.to_dict(), indent=indent)


def revisit_witnesses(trace: ExecutionTrace, prog: NodeProgram) -> List[RevisitWitness]:
    witnesses = []
    for i in range(len(trace.initial)):
        values = trace.node_values(i)
        if not prog.history_ok(values):
            witnesses.append(RevisitWitness(trace.initial, i, tuple(values), tuple(trace.states())))
    return witnesses


def rank_violations(trace: ExecutionTrace, prog: NodeProgram,
                    g: Graph) -> List[Tuple[GlobalState, GlobalState]]:
    """Steps along ``trace`` whose rank does not strictly decrease."""

    states = list(trace.states())
    ranks = [rank(s, prog, g) for s in states]
    return [
        (states[k], states[k + 1])
        for k in range(len(states) - 1)
        if ranks[k + 1] >= ranks[k]
    ]


def _order_keys(prog: NodeProgram, state: GlobalState, top: Sequence) -> Tuple[int, ...]:
    return tuple(prog.local_order_key(i, v, t) for i, (v, t) in enumerate(zip(state, top)))


def _top_of(prog: NodeProgram, state: GlobalState, report: Optional[LatticeReport],
            other: Optional[GlobalState] = None) -> Sequence:
    if prog.predicate_lattice:
        return (None,) * len(state)
    if report is None:
        raise InputError(f"{prog.name}: ordering states needs a lattice report.")
    cls = report.class_of(state)
    if cls is None:
        raise InputError(f"{format_state(state)} is not in any class of the report.")
    if other is not None and report.class_of(other) is not cls:
        raise InputError(
            f"{format_state(state)} and {format_state(other)} lie in different classes."
        )
    return cls.supremum


def _pointwise(s1: GlobalState, s2: GlobalState, prog: NodeProgram,
               report: Optional[LatticeReport], higher: bool) -> GlobalState:
    s1, s2 = tuple(s1), tuple(s2)
    if len(s1) != len(s2):
        raise InputError("States of different lengths cannot be combined.")
    top = _top_of(prog, s1, report, s2)
    result = []
    for i, (a, b, t) in enumerate(zip(s1, s2, top)):
        ka, kb = prog.local_order_key(i, a, t), prog.local_order_key(i, b, t)
        if higher:
            result.append(b if kb > ka else a)
        else:
            result.append(b if kb < ka else a)
    return tuple(result)


def meet(s1: GlobalState, s2: GlobalState, prog: NodeProgram,
         report: Optional[LatticeReport] = None) -> GlobalState:
    """Pointwise lower value under each node's order."""

    return _pointwise(s1, s2, prog, report, higher=False)


def join(s1: GlobalState, s2: GlobalState, prog: NodeProgram,
         report: Optional[LatticeReport] = None) -> GlobalState:
    """Pointwise higher value under each node's order."""

    return _pointwise(s1, s2, prog, report, higher=True)


def _infimum(prog: NodeProgram, states: Iterable[GlobalState], top: Sequence) -> Optional[GlobalState]:
    keyed = [(s, _order_keys(prog, s, top)) for s in states]
    minimal = [
        s for s, ks in keyed
        if not any(kt != ks and all(a <= b for a, b in zip(kt, ks)) for _, kt in keyed)
    ]
    return minimal[0] if len(minimal) == 1 else None


def _closed(prog: NodeProgram, cls: LatticeClass, top: Sequence) -> bool:
    for a, b in combinations(cls.states, 2):
        ka, kb = _order_keys(prog, a, top), _order_keys(prog, b, top)
        low = tuple(x if kx <= ky else y for x, y, kx, ky in zip(a, b, ka, kb))
        high = tuple(y if ky > kx else x for x, y, kx, ky in zip(a, b, ka, kb))
        if low not in cls.states or high not in cls.states:
            return False
    return True


def _endpoints(prog: NodeProgram, space: StateSpace) -> Dict[GlobalState, FrozenSet[GlobalState]]:
    """Silent states each state reaches by some sequence of single-node moves."""

    dg = nx.DiGraph()
    dg.add_nodes_from(space.states)
    dg.add_edges_from((s, t) for s in space.states for t in space.transitions[s])
    condensed = nx.condensation(dg)
    found: Dict[int, FrozenSet[GlobalState]] = {}
    for c in reversed(list(nx.topological_sort(condensed))):
        ends = {
            s for s in condensed.nodes[c]["members"]
            if not space.transitions[s] and not prog.enabled_moves(space.graph, s)
        }
        for d in condensed.successors(c):
            ends |= found[d]
        found[c] = frozenset(ends)
    mapping = condensed.graph["mapping"]
    return {s: found[mapping[s]] for s in space.states}


def verify_partition(space: StateSpace, prog: NodeProgram,
                     daemons: Sequence[Daemon] = (Daemon.CENTRAL, Daemon.SYNCHRONOUS),
                     max_moves: Optional[int] = None,
                     closure_limit: int = CLOSURE_LIMIT) -> LatticeReport:
    """Partition ``space`` by converged endpoint and check every class.

    Endpoints come from every interleaving of single-node moves plus one run per
    daemon. A state with several endpoints is ambiguous and joins the class of
    each of them, so the classes then overlap.
    """

    g = space.graph
    buckets: Dict[GlobalState, List[GlobalState]] = {}
    ambiguous: List[GlobalState] = []
    divergent: List[GlobalState] = []
    unsolvable: List[GlobalState] = []
    witnesses: List[RevisitWitness] = []
    flagged: Set[Tuple[GlobalState, NodeId]] = set()
    endpoints = _endpoints(prog, space)

    for s in space.states:
        traces = [run(prog, g, s, daemon=d, seed=0, max_moves=max_moves) for d in daemons]
        for trace in traces:
            for w in revisit_witnesses(trace, prog):
                if (w.start, w.node) not in flagged:
                    flagged.add((w.start, w.node))
                    witnesses.append(w)
        outcomes = {t.outcome for t in traces}
        if Outcome.DIVERGED in outcomes:
            divergent.append(s)
            continue
        finals = set(endpoints[s]) | {t.final_state for t in traces if t.converged}
        if not finals:
            unsolvable.append(s)
            continue
        if len(finals) > 1 or Outcome.NO_SOLUTION in outcomes:
            ambiguous.append(s)
        for final in finals:
            buckets.setdefault(final, []).append(s)

    classes = []
    for supremum, members in buckets.items():
        top = (None,) * len(supremum) if prog.predicate_lattice else supremum
        cls = LatticeClass(supremum, frozenset(members), optimal=prog.optimal(g, supremum))
        cls.infimum = _infimum(prog, members, top)
        if len(members) <= closure_limit:
            cls.meet_join_closed = _closed(prog, cls, top)
        classes.append(cls)

    ranks = {s: rank(s, prog, g) for s in space.states}
    descending = [
        (s, t) for s in space.states for t in space.transitions[s]
        if t in ranks and ranks[t] >= ranks[s]
    ]

    classified = set(unsolvable).union(*(c.states for c in classes))
    report = LatticeReport(
        program=prog.name,
        graph=g,
        classes=classes,
        disjoint=not ambiguous,
        exhaustive=len(classified) == len(space),
        suprema_optimal=all(c.optimal for c in classes),
        revisit_violations=witnesses,
        ambiguous=ambiguous,
        divergent=divergent,
        unsolvable=unsolvable,
        rank_violations=descending,
        domain_cap=space.domain_cap,
        explored=len(space),
        predicate_lattice=prog.predicate_lattice,
    )
    logger.info(
        "%s: %d classes over %d states; %d ambiguous, %d divergent, %d revisits",
        prog.name, report.width, len(space), len(ambiguous), len(divergent), len(witnesses),
    )
    return report


def impedensable(i: NodeId, s: GlobalState, space: StateSpace, prog: NodeProgram,
                 report: Optional[LatticeReport] = None) -> bool:
    """Whether ``i`` must change for the lattice predicate to hold above ``s``.

    Brute force: ``s`` violates the predicate and so does every strictly
    higher state of its class that keeps ``s[i]``.
    """

    s = tuple(s)
    if s not in space:
        raise InputError(f"{format_state(s)} was not explored.")
    g = space.graph
    if prog.lattice_predicate(g, s):
        return False
    if prog.predicate_lattice:
        candidates: Iterable[GlobalState] = space.states
        top: Sequence = (None,) * len(s)
    else:
        report = report or verify_partition(space, prog)
        cls = report.class_of(s)
        if cls is None:
            raise InputError(f"{format_state(s)} belongs to no class.")
        candidates, top = cls.states, cls.supremum
    ks = _order_keys(prog, s, top)
    for t in candidates:
        if t == s or t[i] != s[i]:
            continue
        kt = _order_keys(prog, t, top)
        if all(a >= b for a, b in zip(kt, ks)) and prog.lattice_predicate(g, t):
            return False
    return True


def hasse_edges(states: Iterable[GlobalState],
                transitions: Dict[GlobalState, FrozenSet[GlobalState]]) -> List[Tuple[GlobalState, GlobalState]]:
    """Transition edges among ``states`` with transitive edges removed."""

    nodes = set(states)
    dg = nx.DiGraph()
    dg.add_nodes_from(nodes)
    dg.add_edges_from((s, t) for s in nodes for t in transitions.get(s, ()) if t in nodes)
    if nx.is_directed_acyclic_graph(dg):
        dg = nx.transitive_reduction(dg)
    return list(dg.edges())


def to_dot(report: LatticeReport, space: StateSpace) -> str:
    """Graphviz rendering, one cluster per class, edges pointing upwards."""

    names: Dict[GlobalState, str] = {}
    lines = ["digraph lattice {", "  rankdir=BT;", "  node [shape=box, fontname=monospace];"]
    for k, cls in enumerate(report.classes):
        lines.append(f"  subgraph cluster_{k} {{")
        lines.append(f'    label="class {k}: {format_state(cls.supremum)}";')
        for s in cls.states:
            names[s] = f"s{len(names)}"
            lines.append(f'    {names[s]} [label="{format_state(s)}"];')
        for a, b in hasse_edges(cls.states, space.transitions):
            lines.append(f"    {names[a]} -> {names[b]};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def read_robustness(prog: NodeProgram, g: Graph, init: GlobalState,
                    lags: Iterable[int] = range(6), seeds: Iterable[int] = range(10),
                    daemon: Daemon = Daemon.CENTRAL) -> List[Tuple[int, int]]:
    """(lag, seed) pairs whose AMR run disagrees with the fresh-read run.

    Each AMR run is compared with the fresh-read run under the same daemon and
    seed, so at lag 0 the two runs coincide.
    """

    bound = budget_for(prog, g).budget
    seeds = list(seeds)
    references = {
        seed: run(prog, g, init, daemon=daemon, read_model=ReadModel.fresh(), seed=seed)
        for seed in seeds
    }
    disagreements = []
    for lag in lags:
        for seed in seeds:
            reference = references[seed]
            trace = run(prog, g, init, daemon=daemon, read_model=ReadModel.amr(lag), seed=seed)
            same = (trace.outcome is reference.outcome
                    and trace.final_state == reference.final_state)
            if not same or (trace.converged and trace.total_moves > bound):
                disagreements.append((lag, seed))
    if disagreements:
        logger.warning("%s: %d AMR runs disagree with fresh reads", prog.name, len(disagreements))
    return disagreements
