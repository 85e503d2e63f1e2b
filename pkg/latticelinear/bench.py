"""Batch trials and their CSV rows."""

from __future__ import annotations

import csv
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from itertools import product
from typing import Iterable, Iterator, List, Optional, Sequence, TextIO

import numpy as np

from .algorithms import program_by_name
from .engine import Daemon, Outcome, ReadKind, ReadModel, budget_for, replay_check, run
from .errors import CapacityError, InputError
from .graph import Graph
from .marriage import SmpInstance
from .program import NodeProgram
from .states import IN, OUT
from .types import GlobalState

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BenchRow:
    """One CSV row; field order is the CSV column order."""

    alg: str
    n: int
    m_edges: int
    seed: int
    daemon: str
    read_model: str
    lag: int
    moves: int
    budget: int
    within_budget: bool
    wall_ms: float


CSV_HEADER = tuple(f.name for f in fields(BenchRow))


@dataclass(frozen=True)
class BenchJob:
    """Everything a worker process needs to rebuild the program and run one trial."""

    algorithm: str
    graph: Graph
    init: GlobalState
    daemon: Daemon = Daemon.CENTRAL
    read_model: ReadModel = ReadModel()
    seed: int = 0
    max_moves: Optional[int] = None
    instance: Optional[SmpInstance] = None
    max_init_colour: Optional[int] = None


def run_trial(job: BenchJob) -> BenchRow:
    prog = program_by_name(job.algorithm, job.instance, job.max_init_colour)
    start = time.perf_counter()
    trace = run(prog, job.graph, job.init, daemon=job.daemon, read_model=job.read_model,
                seed=job.seed, max_moves=job.max_moves)
    wall_ms = (time.perf_counter() - start) * 1000.0
    budget = budget_for(prog, job.graph)
    if trace.converged:
        within = replay_check(trace, budget)
    else:
        # A man running out of choices is still bounded; divergence never is.
        within = trace.outcome is Outcome.NO_SOLUTION and trace.total_moves <= budget.budget
    return BenchRow(
        alg=prog.name,
        n=job.graph.node_count,
        m_edges=job.graph.edge_count,
        seed=job.seed,
        daemon=job.daemon.value,
        read_model=str(job.read_model),
        lag=job.read_model.lag if job.read_model.kind is ReadKind.AMR else 0,
        moves=trace.total_moves,
        budget=budget.budget,
        within_budget=within,
        wall_ms=round(wall_ms, 3),
    )


def run_bench(jobs: Sequence[BenchJob], workers: int = 1) -> List[BenchRow]:
    """Run every job; rows come back in job order whatever the worker count."""

    if workers < 1:
        raise InputError("workers must be at least 1.")
    if workers == 1 or len(jobs) <= 1:
        rows = [run_trial(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_trial, jobs))
    failures = sum(1 for row in rows if not row.within_budget)
    if failures:
        logger.warning("%d of %d trials exceeded the move budget", failures, len(rows))
    return rows


def write_csv(rows: Iterable[BenchRow], stream: TextIO) -> None:
    writer = csv.writer(stream)
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(astuple(row))


def mean_moves(rows: Sequence[BenchRow]) -> float:
    return float(np.mean([row.moves for row in rows])) if rows else 0.0


def mean_wall_ms(rows: Sequence[BenchRow]) -> float:
    return float(np.mean([row.wall_ms for row in rows])) if rows else 0.0


# --- Initial states ---------------------------------------------------

def all_states(prog: NodeProgram, g: Graph, cap: Optional[int] = None,
               capacity: int = 1 << 20) -> Iterator[GlobalState]:
    """Every state of the (capped) domain, in product order."""

    domains = [prog.domain(g, i, cap) for i in g.nodes]
    size = math.prod(len(d) for d in domains)
    if size > capacity:
        raise CapacityError(f"{prog.name}: {size} initial states exceed the capacity of {capacity}.")
    return product(*domains)


def initial_state(prog: NodeProgram, g: Graph, policy: str, seed: int = 0) -> GlobalState:
    """Resolve one initial state: a named policy or a state literal."""

    if policy == "fixed":
        return prog.initial_state(g)
    if policy == "random":
        return prog.random_state(g, np.random.default_rng(seed))
    if policy in ("all-in", "all-out"):
        state = ((IN if policy == "all-in" else OUT),) * g.node_count
        prog.validate(g, state)
        return state
    if policy == "enumerate-all":
        raise InputError("enumerate-all yields many initial states; use all_states.")
    return prog.parse_state(g, policy)
