"""Local-state variants and their text/JSON encodings."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum, auto
from typing import Any, Optional, Sequence

from .errors import ParseError
from .types import GlobalState, LocalState, NodeId


class Membership(Enum):
    """Whether a node belongs to the set being built (DS or VC)."""

    IN = auto()
    OUT = auto()

    def flipped(self) -> Membership:
        return Membership.OUT if self is Membership.IN else Membership.IN

    @classmethod
    def parse(cls, text: str) -> Membership:
        token = text.strip().upper()
        if token in ("IN", "I", "1"):
            return cls.IN
        if token in ("OUT", "O", "0"):
            return cls.OUT
        raise ParseError(f"expected IN or OUT, got {text!r}")

    def __repr__(self) -> str:
        return self.name


IN = Membership.IN
OUT = Membership.OUT


@dataclass(frozen=True)
class CoverState:
    """Vertex-cover node: membership plus the ``done`` flag."""

    st: Membership = OUT
    done: bool = False

    def finished(self) -> CoverState:
        return replace(self, done=True)


@dataclass(frozen=True)
class PointerState:
    """Vertex-cover node that may point at the neighbour it wants added.

    ``point`` is ``None`` while the node points nowhere.
    """

    st: Membership = OUT
    done: bool = False
    point: Optional[NodeId] = None


def encode_local(value: LocalState) -> Any:
    """JSON-friendly form of one local state."""

    if isinstance(value, Membership):
        return value.name
    if isinstance(value, CoverState):
        return {"st": value.st.name, "done": value.done}
    if isinstance(value, PointerState):
        return {"st": value.st.name, "done": value.done, "point": value.point}
    return value


def encode_state(state: GlobalState) -> list:
    return [encode_local(v) for v in state]


def format_local(value: LocalState) -> str:
    if isinstance(value, Membership):
        return value.name
    if isinstance(value, CoverState):
        return f"{value.st.name}{'*' if value.done else ''}"
    if isinstance(value, PointerState):
        arrow = "" if value.point is None else f"->{value.point}"
        return f"{value.st.name}{'*' if value.done else ''}{arrow}"
    return str(value)


def format_state(state: GlobalState) -> str:
    """Compact rendering, e.g. ``(IN,OUT,IN,OUT)``; ``*`` marks done nodes."""

    return "(" + ",".join(format_local(v) for v in state) + ")"


def memberships(text: str) -> GlobalState:
    """Parse ``"IN,OUT,IN"`` into a tuple of :class:`Membership`."""

    return tuple(Membership.parse(token) for token in split_tokens(text))


def split_tokens(text: str) -> Sequence[str]:
    tokens = [t for t in text.replace(" ", ",").strip("()<>").split(",") if t]
    if not tokens:
        raise ParseError("empty state literal")
    return tokens


def members(state: GlobalState) -> frozenset:
    """Nodes whose ``st`` is IN, for any membership-bearing variant."""

    chosen = set()
    for i, value in enumerate(state):
        st = value if isinstance(value, Membership) else getattr(value, "st", None)
        if st is IN:
            chosen.add(i)
    return frozenset(chosen)
