"""Type aliases shared across the package."""

from typing import Hashable, Mapping, Tuple

NodeId = int
LocalState = Hashable
GlobalState = Tuple[LocalState, ...]
# An action: the local states it writes, keyed by node.
Writes = Mapping[NodeId, LocalState]
