"""Command-line front end: ``run``, ``verify``, ``bench`` and ``gen``.

Exit status 0 on success, 1 when a property is violated (divergence, a
failed lattice check, a trial over its move budget), 2 on usage errors.

Examples:
    latticelinear run --alg mds --graph g4.txt --init all-in
    latticelinear run --alg smp --instance smp.json --init 1,1,1
    latticelinear verify --alg mds --graph g4.txt --json
    latticelinear bench --alg gc --n 200 --m 800 --trials 100 --init random
    latticelinear gen --n 4 --m 2 --seed 7 --output g.txt
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .algorithms import ALGORITHM_NAMES, program_by_name
from .bench import BenchJob, all_states, initial_state, mean_moves, mean_wall_ms, run_bench, write_csv
from .config import ExperimentConfig, load_config
from .engine import Daemon, Outcome, ReadKind, budget_for, run
from .errors import CapacityError, InputError
from .graph import Graph, load_graph, random_graph, write_edge_list
from .lattice import explore, report_to_json, to_dot, verify_partition
from .marriage import SmpInstance
from .program import NodeProgram
from .states import format_state

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

# Programs that only run from their fixed initial state
_REACHABLE_ONLY = ("vc", "vc-dist")


# ANSI color codes for terminal output
class Colors:
    RESET = "\033[0m"
    BOLD = "\033[1m"
    RED = "\033[91m"
    GREEN = "\033[92m"
    YELLOW = "\033[93m"
    BLUE = "\033[94m"

    @classmethod
    def disable(cls):
        """Disable colors (for non-TTY output)."""
        cls.RESET = cls.BOLD = cls.RED = cls.GREEN = cls.YELLOW = cls.BLUE = ""


if not sys.stderr.isatty():
    Colors.disable()


def print_error(message: str) -> None:
    print(f"{Colors.RED}error: {message}{Colors.RESET}", file=sys.stderr)


def print_warning(message: str) -> None:
    print(f"{Colors.YELLOW}warning: {message}{Colors.RESET}", file=sys.stderr)


def print_info(message: str) -> None:
    print(f"{Colors.BLUE}{message}{Colors.RESET}", file=sys.stderr)


def print_success(message: str) -> None:
    print(f"{Colors.GREEN}{message}{Colors.RESET}", file=sys.stderr)


# --- Arguments --------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser) -> None:
    # Defaults are None so that unset flags leave the TOML values alone.
    parser.add_argument("--alg", dest="algorithm", choices=ALGORITHM_NAMES, default=None,
                        help="Algorithm (default: mds)")
    parser.add_argument("--graph", type=Path, default=None, help="Edge-list file")
    parser.add_argument("--n", type=int, default=None, help="Random graph node count")
    parser.add_argument("--m", type=int, default=None, help="Random graph edge count")
    parser.add_argument("--seed", type=int, default=None, help="Base seed")
    parser.add_argument("--instance", type=Path, default=None, help="SMP instance JSON file")
    parser.add_argument("--max-init-colour", type=int, default=None,
                        help="Largest colour accepted in a GC initial state")
    parser.add_argument("--daemon", choices=[d.value for d in Daemon], default=None)
    parser.add_argument("--read-model", choices=[k.value for k in ReadKind], default=None)
    parser.add_argument("--lag", type=int, default=None, help="AMR lag bound (default: 3)")
    parser.add_argument("--refresh-on-act", action="store_true", default=None,
                        help="A node's reads are at least as fresh as its last action")
    parser.add_argument("--max-moves", type=int, default=None)
    parser.add_argument("--output", "-o", type=Path, default=None, help="Output file")
    parser.add_argument("--json", action="store_true", default=None, help="JSON output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latticelinear",
        description="Simulate and verify lattice-linear self-stabilizing graph algorithms",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="Examples:" + __doc__.split("Examples:", 1)[1],
    )
    parser.add_argument("--config", "-c", type=Path, default=None,
                        help="TOML file with an [experiment] table")
    parser.add_argument("--verbose", "-v", action="count", default=0,
                        help="-v for INFO, -vv for DEBUG")
    commands = parser.add_subparsers(dest="command", required=True)

    run_cmd = commands.add_parser("run", help="Execute one run")
    _add_common(run_cmd)
    run_cmd.add_argument("--init", default=None,
                         help="fixed | random | all-in | all-out | a literal such as IN,OUT,IN")

    verify_cmd = commands.add_parser("verify", help="Check the lattice structure exhaustively")
    _add_common(verify_cmd)
    verify_cmd.add_argument("--cap", type=int, default=None, help="Colour cap for gc")
    verify_cmd.add_argument("--reachable", action="store_true", default=None,
                            help="Only states reachable from the fixed initial state")
    verify_cmd.add_argument("--feasible", action="store_true", default=None,
                            help="Only states satisfying the program's feasibility predicate")
    verify_cmd.add_argument("--capacity", type=int, default=None)
    verify_cmd.add_argument("--dot", type=Path, default=None, help="Write a Graphviz Hasse diagram")

    bench_cmd = commands.add_parser("bench", help="Run seeded trials and emit CSV")
    _add_common(bench_cmd)
    bench_cmd.add_argument("--init", default=None,
                           help="fixed | random | all-in | all-out | enumerate-all | a literal")
    bench_cmd.add_argument("--trials", type=int, default=None)
    bench_cmd.add_argument("--workers", type=int, default=None)
    bench_cmd.add_argument("--cap", type=int, default=None, help="Colour cap for enumerate-all")
    bench_cmd.add_argument("--capacity", type=int, default=None)

    gen_cmd = commands.add_parser("gen", help="Write a random edge list")
    gen_cmd.add_argument("--n", type=int, required=True)
    gen_cmd.add_argument("--m", type=int, required=True)
    gen_cmd.add_argument("--seed", type=int, default=0)
    gen_cmd.add_argument("--output", "-o", type=Path, default=None)

    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


# --- Helpers ----------------------------------------------------------

def load_instance(path: Path) -> SmpInstance:
    return SmpInstance.from_json(Path(path).read_text(encoding="utf-8"))


def resolve(config: ExperimentConfig, trial: int = 0) -> Tuple[NodeProgram, Graph]:
    """Build the program and the graph the config names."""

    instance = load_instance(config.instance) if config.instance is not None else None
    prog = program_by_name(config.algorithm, instance, config.max_init_colour)
    if instance is not None and config.algorithm == "smp":
        return prog, instance.graph()
    if config.graph is not None:
        return prog, load_graph(config.graph)
    return prog, random_graph(config.n, config.m, config.seed + trial)


def emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")
        print_info(f"Wrote {output}")


# --- Commands ---------------------------------------------------------

def cmd_run(config: ExperimentConfig) -> int:
    prog, g = resolve(config)
    init = initial_state(prog, g, config.init, config.seed)
    trace = run(prog, g, init, daemon=config.daemon_kind, read_model=config.read,
                seed=config.seed, max_moves=config.max_moves)
    if config.json:
        data = trace.to_dict(g)
        data["summary"] = prog.summarize(g, trace.final_state)
        emit(json.dumps(data, indent=2) + "\n", config.output)
    else:
        lines = [
            f"algorithm: {prog.name}",
            f"graph: {g.node_count} nodes, {g.edge_count} edges ({g.digest()})",
            f"initial: {format_state(init)}",
            f"outcome: {trace.outcome.name.lower()} after {trace.total_moves} moves "
            f"(budget {budget_for(prog, g).budget})",
            f"final: {format_state(trace.final_state)}",
        ]
        lines.extend(f"{key}: {value}" for key, value in prog.summarize(g, trace.final_state).items())
        emit("\n".join(lines) + "\n", config.output)
    return EXIT_VIOLATION if trace.outcome is Outcome.DIVERGED else EXIT_OK


def cmd_verify(config: ExperimentConfig) -> int:
    prog, g = resolve(config)
    reachable = config.reachable or config.algorithm in _REACHABLE_ONLY
    start = prog.initial_state(g) if reachable else None
    space = explore(prog, g, config.cap, reachable_from=start,
                    feasible_only=config.feasible, capacity=config.capacity)
    report = verify_partition(space, prog, max_moves=config.max_moves)
    if config.dot is not None:
        config.dot.write_text(to_dot(report, space), encoding="utf-8")
        print_info(f"Wrote {config.dot}")
    if config.json:
        emit(report_to_json(report) + "\n", config.output)
    else:
        lines = [
            f"algorithm: {prog.name}",
            f"explored: {report.explored} states",
            f"classes: {report.width}",
        ]
        for cls in report.classes:
            lines.append(f"  {format_state(cls.supremum)}: {len(cls)} states"
                         f"{'' if cls.optimal else ' (supremum not optimal)'}")
        lines.append(f"disjoint: {report.disjoint}")
        lines.append(f"exhaustive: {report.exhaustive}")
        lines.append(f"suprema optimal: {report.suprema_optimal}")
        for w in report.revisit_violations:
            lines.append(f"revisit: node {w.node} from {format_state(w.start)}: "
                         f"{' -> '.join(map(str, w.values))}")
        if report.divergent:
            lines.append(f"divergent: {len(report.divergent)} states")
        if report.unsolvable:
            lines.append(f"no solution: {len(report.unsolvable)} states")
        if report.rank_violations:
            lines.append(f"non-decreasing rank transitions: {len(report.rank_violations)}")
        emit("\n".join(lines) + "\n", config.output)
    if report.ok:
        print_success(f"{prog.name}: {report.width} lattice(s), all checks pass")
        return EXIT_OK
    print_warning(f"{prog.name}: lattice checks failed")
    return EXIT_VIOLATION


def bench_jobs(config: ExperimentConfig) -> List[BenchJob]:
    instance = load_instance(config.instance) if config.instance is not None else None
    jobs = []
    if config.init == "enumerate-all":
        prog, g = resolve(config)
        for k, init in enumerate(all_states(prog, g, config.cap, config.capacity)):
            jobs.append(BenchJob(config.algorithm, g, init, config.daemon_kind, config.read,
                                 config.seed + k, config.max_moves, instance, config.max_init_colour))
        return jobs
    for trial in range(config.trials):
        seed = config.seed + trial
        prog, g = resolve(config, trial)
        init = initial_state(prog, g, config.init, seed)
        jobs.append(BenchJob(config.algorithm, g, init, config.daemon_kind, config.read,
                             seed, config.max_moves, instance, config.max_init_colour))
    return jobs


def cmd_bench(config: ExperimentConfig) -> int:
    rows = run_bench(bench_jobs(config), config.workers)
    if config.json:
        data = {
            "rows": [asdict(row) for row in rows],
            "mean_moves": mean_moves(rows),
            "mean_wall_ms": mean_wall_ms(rows),
        }
        emit(json.dumps(data, indent=2) + "\n", config.output)
    else:
        if config.output is None:
            write_csv(rows, sys.stdout)
        else:
            with config.output.open("w", newline="", encoding="utf-8") as f:
                write_csv(rows, f)
            print_info(f"Wrote {config.output}")
        print_info(f"{len(rows)} trials, mean moves {mean_moves(rows):.2f}, "
                   f"mean wall {mean_wall_ms(rows):.3f} ms")
    over = [row for row in rows if not row.within_budget]
    if over:
        print_warning(f"{len(over)} trial(s) exceeded the move budget")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_gen(n: int, m: int, seed: int, path: Optional[Path]) -> int:
    emit(write_edge_list(random_graph(n, m, seed)), path)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    configure_logging(args.verbose)
    try:
        if args.command == "gen":
            return cmd_gen(args.n, args.m, args.seed, args.output)
        config = load_config(args)
        if args.command == "run":
            return cmd_run(config)
        if args.command == "verify":
            return cmd_verify(config)
        return cmd_bench(config)
    except (InputError, CapacityError, OSError) as e:
        print_error(str(e))
        return EXIT_USAGE
