"""Execution engine: daemons, read-freshness models and execution traces.

The engine is sequential and deterministic for a given seed. Asynchrony is
simulated: under the AMR read model every reader keeps a monotone cursor into
each subject's publication history, and a read may lag at most ``lag``
publications behind the subject's latest value.
"""

from __future__ import annotations

import json
import logging
from collections import abc, deque
from dataclasses import dataclass, field
from enum import Enum, auto
from typing import AbstractSet, Any, Deque, Dict, FrozenSet, Iterator, List, Optional

import numpy as np

from .errors import InputError
from .graph import Graph
from .program import MoveBudget, NodeProgram
from .states import encode_state
from .types import GlobalState, LocalState, NodeId, Writes

logger = logging.getLogger(__name__)

DEFAULT_LAG = 3
# max_moves defaults to this multiple of the program's budget.
DIVERGENCE_FACTOR = 4


class Daemon(Enum):
    """Which enabled nodes move in a step."""

    CENTRAL = "central"
    DISTRIBUTED = "distributed"
    SYNCHRONOUS = "synchronous"


class ReadKind(Enum):
    FRESH = "fresh"
    AMR = "amr"


class Outcome(Enum):
    CONVERGED = auto()
    DIVERGED = auto()  # max_moves reached
    NO_SOLUTION = auto()  # a node exhausted its choices


@dataclass(frozen=True)
class ReadModel:
    """Freshness of guard reads.

    ``refresh_on_act`` makes a node's reads at least as fresh as the moment of
    its own last action.
    """

    kind: ReadKind = ReadKind.FRESH
    lag: int = DEFAULT_LAG
    refresh_on_act: bool = False

    def __post_init__(self):
        if self.lag < 0:
            raise InputError("AMR lag must be non-negative.")

    @classmethod
    def fresh(cls) -> ReadModel:
        return cls()

    @classmethod
    def amr(cls, lag: int = DEFAULT_LAG, refresh_on_act: bool = False) -> ReadModel:
        return cls(ReadKind.AMR, lag, refresh_on_act)

    def __str__(self) -> str:
        return self.kind.value


@dataclass(frozen=True)
class Step:
    state: GlobalState
    moved: FrozenSet[NodeId]


@dataclass
class ExecutionTrace:
    """A run: the initial state, then one entry per step."""

    algorithm: str
    initial: GlobalState
    steps: List[Step] = field(default_factory=list)
    per_node_moves: List[int] = field(default_factory=list)
    outcome: Outcome = Outcome.CONVERGED
    seed: int = 0
    daemon: Daemon = Daemon.CENTRAL
    read_model: ReadModel = field(default_factory=ReadModel)
    exhausted_node: Optional[NodeId] = None

    @property
    def total_moves(self) -> int:
        return sum(self.per_node_moves)

    @property
    def converged(self) -> bool:
        return self.outcome is Outcome.CONVERGED

    @property
    def final_state(self) -> GlobalState:
        return self.steps[-1].state if self.steps else self.initial

    def states(self) -> Iterator[GlobalState]:
        yield self.initial
        for step in self.steps:
            yield step.state

    def node_values(self, i: NodeId) -> List[LocalState]:
        """Successive distinct values held by node ``i``."""

        values: List[LocalState] = []
        for state in self.states():
            if not values or values[-1] != state[i]:
                values.append(state[i])
        return values

    def to_dict(self, g: Graph) -> Dict[str, Any]:
        return {
            "algorithm": self.algorithm,
            "graph_hash": g.digest(),
            "seed": self.seed,
            "daemon": self.daemon.value,
            "read_model": str(self.read_model),
            "lag": self.read_model.lag if self.read_model.kind is ReadKind.AMR else 0,
            "moves": self.total_moves,
            "converged": self.converged,
            "outcome": self.outcome.name.lower(),
            "final_state": encode_state(self.final_state),
        }


def trace_to_json(trace: ExecutionTrace, g: Graph, indent: Optional[int] = 2) -> str:
    return json.dumps(trace.to_dict(g), indent=indent)


class _PublicationBoard:
    """Bounded per-node histories plus per-(reader, subject) read cursors."""

    def __init__(self, init: GlobalState, lag: int):
        self.lag = lag
        self.histories: List[Deque[LocalState]] = [deque([v], maxlen=lag + 1) for v in init]
        self.latest = [0] * len(init)
        self.floor = [0] * len(init)
        self.cursors: Dict[NodeId, Dict[NodeId, int]] = {}

    def read(self, reader: NodeId, subject: NodeId, rng: np.random.Generator) -> LocalState:
        latest = self.latest[subject]
        mine = self.cursors.setdefault(reader, {})
        low = max(mine.get(subject, 0), self.floor[subject], latest - self.lag)
        index = latest if low >= latest else int(rng.integers(low, latest + 1))
        mine[subject] = index
        return self.histories[subject][index - latest - 1]

    def publish(self, before: GlobalState, after: GlobalState) -> None:
        for j, (old, new) in enumerate(zip(before, after)):
            if old != new:
                self.histories[j].append(new)
                self.latest[j] += 1

    def refresh(self, reader: NodeId) -> None:
        self.cursors[reader] = dict(enumerate(self.latest))

    def refresh_all(self) -> None:
        self.floor = list(self.latest)


class StaleView(abc.Sequence):
    """What one reader sees during one guard evaluation.

    The reader's own variables are always current; every other node is read
    once through the board and then cached for the evaluation. With
    ``read_set`` given, reading any other node is an error.
    """

    def __init__(self, board: _PublicationBoard, reader: NodeId, state: GlobalState,
                 rng: np.random.Generator, read_set: Optional[AbstractSet[NodeId]] = None):
        self._board = board
        self._reader = reader
        self._state = state
        self._rng = rng
        self._read_set = read_set
        self._seen: Dict[NodeId, LocalState] = {}

    def __getitem__(self, j):
        if j == self._reader:
            return self._state[j]
        if self._read_set is not None and j not in self._read_set:
            raise InputError(f"Node {self._reader} read node {j} outside its declared read radius.")
        if j not in self._seen:
            self._seen[j] = self._board.read(self._reader, j, self._rng)
        return self._seen[j]

    def __len__(self) -> int:
        return len(self._state)


def _choose(daemon: Daemon, nodes: List[NodeId], rng: np.random.Generator) -> List[NodeId]:
    if daemon is Daemon.CENTRAL:
        return [nodes[int(rng.integers(len(nodes)))]]
    if daemon is Daemon.SYNCHRONOUS:
        return nodes
    while True:
        mask = rng.random(len(nodes)) < 0.5
        if mask.any():
            return [i for i, keep in zip(nodes, mask) if keep]


def run(prog: NodeProgram, g: Graph, init: GlobalState, daemon: Daemon = Daemon.CENTRAL,
        read_model: Optional[ReadModel] = None, seed: int = 0,
        max_moves: Optional[int] = None) -> ExecutionTrace:
    """Execute ``prog`` from ``init`` until silence, divergence or exhaustion.

    A step never takes the move count past ``max_moves``: when fewer moves are
    left than nodes chosen, only the lowest-id chosen nodes move.
    """

    read_model = read_model or ReadModel()
    init = tuple(init)
    prog.validate(g, init)
    if max_moves is None:
        max_moves = max(DIVERGENCE_FACTOR * budget_for(prog, g).budget, 1)
    if max_moves <= 0:
        raise InputError("max_moves must be positive.")

    rng = np.random.default_rng(seed)
    board = None
    if read_model.kind is ReadKind.AMR:
        board = _PublicationBoard(init, read_model.lag)
        read_sets = [
            None if prog.view_radius is None else frozenset(prog.read_set(g, i))
            for i in g.nodes
        ]
    trace = ExecutionTrace(prog.name, init, per_node_moves=[0] * g.node_count, seed=seed,
                           daemon=daemon, read_model=read_model)
    state = init

    # --- Main loop ---------------------------------------------------
    while True:
        fresh = prog.enabled_moves(g, state)
        if not fresh:
            trace.outcome = Outcome.CONVERGED
            break
        if trace.total_moves >= max_moves:
            trace.outcome = Outcome.DIVERGED
            logger.info("%s stopped after %d moves without converging", prog.name, max_moves)
            break

        candidates: Dict[NodeId, Writes] = fresh
        if board is not None:
            stale = {}
            for i in g.nodes:
                view = StaleView(board, i, state, rng, read_sets[i])
                action = prog.enabled(g, i, view)
                if action is not None:
                    stale[i] = action
            if stale:
                candidates = stale
            else:
                # Pending publications eventually reach every reader.
                board.refresh_all()

        chosen = _choose(daemon, sorted(candidates), rng)[:max_moves - trace.total_moves]
        successor = state
        for i in chosen:
            successor = prog.apply(i, successor, candidates[i])
            trace.per_node_moves[i] += 1
        trace.steps.append(Step(successor, frozenset(chosen)))

        if board is not None:
            board.publish(state, successor)
            if read_model.refresh_on_act:
                for i in chosen:
                    board.refresh(i)
        state = successor

        exhausted = prog.exhausted(state)
        if exhausted is not None:
            trace.outcome = Outcome.NO_SOLUTION
            trace.exhausted_node = exhausted
            break

    logger.debug("%s %s/%s seed=%d: %d moves, %s", prog.name, daemon.value, read_model,
                 seed, trace.total_moves, trace.outcome.name)
    return trace


def budget_for(prog: NodeProgram, g: Graph) -> MoveBudget:
    return prog.budget(g)


def replay_check(trace: ExecutionTrace, budget: MoveBudget) -> bool:
    """Whether a converged trace stayed within the move budget."""

    if not trace.converged:
        raise InputError("replay_check needs a converged trace.")
    return trace.total_moves <= budget.budget
