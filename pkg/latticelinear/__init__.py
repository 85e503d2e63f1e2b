"""Lattice-linear self-stabilizing graph algorithms: simulator and lattice checker."""

from .algorithms import ALGORITHM_NAMES, program_by_name
from .colouring import GraphColouring, gc_program
from .dominating_set import (EventuallyLatticeLinearDominatingSet, MinimalDominatingSet, mds_eventually_ll_program,
                             mds_program)
from .engine import (Daemon, ExecutionTrace, Outcome, ReadKind, ReadModel, StaleView, Step, budget_for,
                     replay_check, run, trace_to_json)
from .errors import CapacityError, InputError, ParseError
from .graph import (Graph, adj_x, complete_graph, load_graph, parse_edge_list, path_graph, random_graph,
                    read_edge_list, write_edge_list)
from .lattice import (LatticeClass, LatticeReport, RevisitWitness, StateSpace, explore, impedensable, join, meet,
                      rank, read_robustness, report_to_json, to_dot, verify_partition)
from .marriage import SmpInstance, StableMarriage, smp_program
from .program import MoveBudget, NodeProgram
from .states import IN, OUT, CoverState, Membership, PointerState, format_state, memberships
from .types import GlobalState, LocalState, NodeId, Writes
from .vertex_cover import (DistributedVertexCover, NaiveVertexCover, TwoApproxVertexCover, naive_vc_program,
                           vc_distributed_program, vc_program)

__version__ = "0.2.1"

__all__ = [
    "ALGORITHM_NAMES",
    "program_by_name",
    "GraphColouring",
    "gc_program",
    "EventuallyLatticeLinearDominatingSet",
    "MinimalDominatingSet",
    "mds_eventually_ll_program",
    "mds_program",
    "Daemon",
    "ExecutionTrace",
    "Outcome",
    "ReadKind",
    "ReadModel",
    "StaleView",
    "Step",
    "budget_for",
    "replay_check",
    "run",
    "trace_to_json",
    "CapacityError",
    "InputError",
    "ParseError",
    "Graph",
    "adj_x",
    "complete_graph",
    "load_graph",
    "parse_edge_list",
    "path_graph",
    "random_graph",
    "read_edge_list",
    "write_edge_list",
    "LatticeClass",
    "LatticeReport",
    "RevisitWitness",
    "StateSpace",
    "explore",
    "impedensable",
    "join",
    "meet",
    "rank",
    "read_robustness",
    "report_to_json",
    "to_dot",
    "verify_partition",
    "SmpInstance",
    "StableMarriage",
    "smp_program",
    "MoveBudget",
    "NodeProgram",
    "IN",
    "OUT",
    "CoverState",
    "Membership",
    "PointerState",
    "format_state",
    "memberships",
    "GlobalState",
    "LocalState",
    "NodeId",
    "Writes",
    "DistributedVertexCover",
    "NaiveVertexCover",
    "TwoApproxVertexCover",
    "naive_vc_program",
    "vc_distributed_program",
    "vc_program",
]
