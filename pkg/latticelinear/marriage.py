"""Man-optimal stable marriage as a lattice-linear program.

Each man holds the rank (1-based, in his own preference list) of the woman he
currently proposes to. A man is impedensable when another man proposes to the
same woman and she prefers that man; he then moves to his next choice. A man
who runs past his last choice ends the run with no solution.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping, Optional, Sequence, Tuple, Union

from .errors import InputError, ParseError
from .graph import Graph, complete_graph
from .program import MoveBudget, NodeProgram
from .types import GlobalState, LocalState, NodeId, Writes

Preferences = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class SmpInstance:
    """Preference lists with zero-based indices; earlier entries are preferred."""

    men_pref: Preferences
    women_pref: Preferences

    def __post_init__(self):
        men = tuple(tuple(int(w) for w in row) for row in self.men_pref)
        women = tuple(tuple(int(m) for m in row) for row in self.women_pref)
        object.__setattr__(self, "men_pref", men)
        object.__setattr__(self, "women_pref", women)
        if not men or not women:
            raise InputError("An SMP instance needs at least one man and one woman.")
        for m, row in enumerate(men):
            if sorted(row) != list(range(len(women))):
                raise InputError(f"Preference list of man {m} is not a permutation of the women.")
        for w, row in enumerate(women):
            if sorted(row) != list(range(len(men))):
                raise InputError(f"Preference list of woman {w} is not a permutation of the men.")
        ranks = tuple({m: r for r, m in enumerate(row, start=1)} for row in women)
        object.__setattr__(self, "_women_rank", ranks)

    @property
    def n_men(self) -> int:
        return len(self.men_pref)

    @property
    def n_women(self) -> int:
        return len(self.women_pref)

    def woman(self, m: int, proposal: int) -> int:
        """Woman that man ``m`` proposes to at 1-based rank ``proposal``."""

        return self.men_pref[m][proposal - 1]

    def rank(self, w: int, m: int) -> int:
        """Position of ``m`` in ``w``'s list (1 is best)."""

        return self._women_rank[w][m]

    def graph(self) -> Graph:
        """Every man reads every other man."""

        return complete_graph(self.n_men)

    def to_json(self) -> str:
        return json.dumps({"men_pref": self.men_pref, "women_pref": self.women_pref})

    @classmethod
    def from_json(cls, text: Union[str, bytes]) -> SmpInstance:
        try:
            data = json.loads(text)
            return cls(tuple(data["men_pref"]), tuple(data["women_pref"]))
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            raise ParseError(f"Invalid SMP instance: {e}") from e


class StableMarriage(NodeProgram):
    name = "smp"
    view_radius = None
    predicate_lattice = True

    def __init__(self, instance: SmpInstance):
        self.instance = instance

    def _proposing_to(self, view: Sequence[LocalState], m: NodeId) -> Optional[int]:
        proposal = view[m]
        if proposal > self.instance.n_women:
            return None
        return self.instance.woman(m, proposal)

    def impedensable(self, g: Graph, m: NodeId, view: Sequence[LocalState]) -> bool:
        w = self._proposing_to(view, m)
        if w is None:
            return False
        inst = self.instance
        return any(
            other != m
            and self._proposing_to(view, other) == w
            and inst.rank(w, other) < inst.rank(w, m)
            for other in g.nodes
        )

    def enabled(self, g: Graph, i: NodeId, view: Sequence[LocalState]) -> Optional[Writes]:
        if self.impedensable(g, i, view):
            return {i: view[i] + 1}
        return None

    def exhausted(self, state: GlobalState) -> Optional[NodeId]:
        for m, proposal in enumerate(state):
            if proposal > self.instance.n_women:
                return m
        return None

    def optimal(self, g: Graph, state: GlobalState) -> bool:
        if self.exhausted(state) is not None:
            return False
        women = [self._proposing_to(state, m) for m in g.nodes]
        return len(set(women)) == len(women)

    def lattice_predicate(self, g: Graph, state: GlobalState) -> bool:
        """Proposals distinct, and no woman holds a man below one who already passed her."""

        if not self.optimal(g, state):
            return False
        inst = self.instance
        holder = {self._proposing_to(state, m): m for m in g.nodes}
        for m in g.nodes:
            for earlier in range(1, state[m]):
                w = inst.woman(m, earlier)
                if w in holder and inst.rank(w, m) < inst.rank(w, holder[w]):
                    return False
        return True

    def state_value(self, g: Graph, state: GlobalState, i: NodeId) -> int:
        # Choices left after the current one.
        return max(self.instance.n_women - state[i], 0)

    def local_order_key(self, i: NodeId, value: LocalState, top: LocalState) -> int:
        return value

    def domain(self, g: Graph, i: NodeId, cap: Optional[int] = None) -> Sequence[LocalState]:
        return tuple(range(1, self.instance.n_women + 1))

    def budget(self, g: Graph) -> MoveBudget:
        return MoveBudget.uniform(self.instance.n_men, self.instance.n_women)

    def initial_state(self, g: Graph) -> GlobalState:
        return (1,) * self.instance.n_men

    def check_local(self, g: Graph, i: NodeId, value: LocalState) -> bool:
        return (
            isinstance(value, int)
            and not isinstance(value, bool)
            and 1 <= value <= self.instance.n_women
        )

    def validate(self, g: Graph, state: GlobalState) -> None:
        if g.node_count != self.instance.n_men:
            raise InputError(
                f"smp: graph has {g.node_count} nodes for {self.instance.n_men} men."
            )
        super().validate(g, state)

    def parse_local(self, g: Graph, i: NodeId, token: str) -> LocalState:
        try:
            return int(token)
        except ValueError:
            raise InputError(f"smp: proposal rank must be an integer, got {token!r}.") from None

    def summarize(self, g: Graph, state: GlobalState) -> Mapping[str, Any]:
        exhausted = self.exhausted(state)
        if exhausted is not None:
            return {"solution": None, "exhausted_man": exhausted}
        return {
            "matching": {m: self._proposing_to(state, m) for m in g.nodes},
            "optimal": self.optimal(g, state),
        }


def smp_program(instance: SmpInstance) -> StableMarriage:
    return StableMarriage(instance)
