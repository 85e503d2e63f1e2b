"""The guarded-command program interface and move budgets.

A :class:`NodeProgram` describes one algorithm: which nodes are enabled in a
(possibly stale) view, what each enabled node writes, which global states are
legitimate, and the potential functions used to order states.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, ClassVar, Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import InputError
from .graph import Graph
from .states import split_tokens
from .types import GlobalState, LocalState, NodeId, Writes


@dataclass(frozen=True)
class MoveBudget:
    """Upper bound on moves before a lattice-linear program must converge.

    ``domain_sizes`` holds the effective local-state domain size per node;
    ``phases`` multiplies the bound for programs that traverse the lattice
    once per phase.
    """

    n: int
    domain_sizes: Tuple[int, ...]
    variable_sizes: Tuple[int, ...] = ()
    phases: int = 1

    @classmethod
    def uniform(cls, n: int, m: int, phases: int = 1) -> MoveBudget:
        return cls(n, (m,) * n, phases=phases)

    @classmethod
    def multivariable(cls, n: int, variable_sizes: Sequence[int]) -> MoveBudget:
        """Nodes whose local order is carried by several variables."""

        if not variable_sizes:
            raise InputError("At least one variable domain size is required.")
        m = int(np.prod(variable_sizes, dtype=np.int64))
        return cls(n, (m,) * n, variable_sizes=tuple(variable_sizes))

    @property
    def budget(self) -> int:
        return self.phases * sum(m - 1 for m in self.domain_sizes)


class NodeProgram(ABC):
    """Base class for guarded-command node programs."""

    name: ClassVar[str]
    # Largest hop distance any guard reads; None means all of V(G).
    view_radius: ClassVar[Optional[int]]
    # True only for the atomic two-node write of the 2-approximation vertex cover.
    writes_neighbour: ClassVar[bool] = False
    # Programs that are only defined from their canonical initial state.
    fixed_init_only: ClassVar[bool] = False
    # The whole state space forms one lattice under the numeric order.
    predicate_lattice: ClassVar[bool] = False

    # --- Guards and actions ------------------------------------------

    @abstractmethod
    def enabled(self, g: Graph, i: NodeId, view: Sequence[LocalState]) -> Optional[Writes]:
        """Return the action of ``i`` if its guard holds in ``view``, else ``None``."""

    def enabled_moves(self, g: Graph, state: GlobalState) -> Dict[NodeId, Writes]:
        """All nodes enabled under fresh reads, with their actions."""

        moves = {}
        for i in g.nodes:
            action = self.enabled(g, i, state)
            if action is not None:
                moves[i] = action
        return moves

    def apply(self, i: NodeId, state: GlobalState, action: Writes) -> GlobalState:
        """Merge the writes of ``i``'s action into ``state``."""

        if not self.writes_neighbour and set(action) != {i}:
            raise InputError(f"{self.name}: node {i} may only write its own variables.")
        updated = list(state)
        for j, value in action.items():
            updated[j] = value
        return tuple(updated)

    # --- Legitimacy --------------------------------------------------

    @abstractmethod
    def optimal(self, g: Graph, state: GlobalState) -> bool:
        """The problem's legitimacy predicate."""

    def feasible(self, g: Graph, state: GlobalState) -> bool:
        """States inside the lattice-linear region (all states unless overridden)."""

        return True

    def lattice_predicate(self, g: Graph, state: GlobalState) -> bool:
        """Predicate used for brute-force impedensability."""

        return self.optimal(g, state)

    def exhausted(self, state: GlobalState) -> Optional[NodeId]:
        """A node that ran out of choices, ending the run without a solution."""

        return None

    # --- Order -------------------------------------------------------

    @abstractmethod
    def state_value(self, g: Graph, state: GlobalState, i: NodeId) -> int:
        """Per-node potential; its sum over all nodes is the rank."""

    def local_order_key(self, i: NodeId, value: LocalState, top: LocalState) -> int:
        """Position of ``value`` in node ``i``'s chain when the class supremum holds ``top``."""

        return 1 if value == top else 0

    def history_ok(self, values: Sequence[LocalState]) -> bool:
        """Whether the successive values of one node respect the no-revisit rule."""

        return len(set(values)) == len(values)

    # --- Domains and states ------------------------------------------

    @abstractmethod
    def domain(self, g: Graph, i: NodeId, cap: Optional[int] = None) -> Sequence[LocalState]:
        """Local states node ``i`` may hold during exploration."""

    @abstractmethod
    def budget(self, g: Graph) -> MoveBudget:
        ...

    @abstractmethod
    def initial_state(self, g: Graph) -> GlobalState:
        """The canonical initial state."""

    @abstractmethod
    def check_local(self, g: Graph, i: NodeId, value: LocalState) -> bool:
        """Whether ``value`` is a local state of this program's variant."""

    def validate(self, g: Graph, state: GlobalState) -> None:
        if len(state) != g.node_count:
            raise InputError(
                f"{self.name}: state has {len(state)} entries, graph has {g.node_count} nodes."
            )
        for i, value in enumerate(state):
            if not self.check_local(g, i, value):
                raise InputError(f"{self.name}: {value!r} is not a valid local state for node {i}.")

    def random_state(self, g: Graph, rng: np.random.Generator) -> GlobalState:
        if self.fixed_init_only:
            raise InputError(f"{self.name} runs only from its fixed initial state.")
        state = []
        for i in g.nodes:
            choices = self.domain(g, i)
            state.append(choices[int(rng.integers(len(choices)))])
        return tuple(state)

    def parse_local(self, g: Graph, i: NodeId, token: str) -> LocalState:
        raise InputError(f"{self.name} has no text form for local states.")

    def parse_state(self, g: Graph, text: str) -> GlobalState:
        """Parse a comma-separated state literal."""

        tokens = split_tokens(text)
        state = tuple(self.parse_local(g, i, token) for i, token in enumerate(tokens))
        self.validate(g, state)
        return state

    def read_set(self, g: Graph, i: NodeId) -> Iterable[NodeId]:
        if self.view_radius is None:
            return g.nodes
        return g.adj_x(i, self.view_radius)

    def summarize(self, g: Graph, state: GlobalState) -> Mapping[str, Any]:
        return {"optimal": self.optimal(g, state)}

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r})"
