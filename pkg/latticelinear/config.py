"""Experiment configuration: dataclass defaults, then TOML, then command-line flags."""

from __future__ import annotations

import argparse
import logging
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Dict, Optional

# tomllib is available in Python 3.11+, tomli provides it for earlier versions
try:
    import tomllib
except ImportError:  # pragma: no cover
    import tomli as tomllib

from .engine import DEFAULT_LAG, Daemon, ReadKind, ReadModel
from .errors import InputError, ParseError
from .lattice import DEFAULT_CAPACITY
from .states import split_tokens

logger = logging.getLogger(__name__)

INIT_POLICIES = ("fixed", "random", "all-in", "all-out", "enumerate-all")
_LITERAL_WORDS = ("IN", "OUT", "I", "O")


def _is_state_literal(text: str) -> bool:
    try:
        tokens = split_tokens(text)
    except ParseError:
        return False
    return all(t.isdigit() or t.upper() in _LITERAL_WORDS for t in tokens)


@dataclass
class ExperimentConfig:
    """Every knob of a run, verify or bench command."""

    # Program
    algorithm: str = "mds"
    max_init_colour: Optional[int] = None

    # Graph source: a file, or random(n, m, seed)
    graph: Optional[Path] = None
    n: int = 4
    m: int = 2
    seed: int = 0
    instance: Optional[Path] = None

    # Execution
    init: str = "fixed"
    daemon: str = "central"
    read_model: str = "fresh"
    lag: int = DEFAULT_LAG
    refresh_on_act: bool = False
    max_moves: Optional[int] = None

    # Verification
    cap: Optional[int] = None
    reachable: bool = False
    feasible: bool = False
    capacity: int = DEFAULT_CAPACITY

    # Batch
    trials: int = 1
    workers: int = 1

    # Output
    output: Optional[Path] = None
    json: bool = False
    dot: Optional[Path] = None

    def __post_init__(self):
        for name in ("graph", "instance", "output", "dot"):
            value = getattr(self, name)
            if isinstance(value, str):
                setattr(self, name, Path(value))

    def validate(self) -> None:
        try:
            Daemon(self.daemon)
            ReadKind(self.read_model)
        except ValueError as e:
            raise InputError(str(e)) from None
        if self.init not in INIT_POLICIES and not _is_state_literal(self.init):
            raise InputError(
                f"init must be one of {', '.join(INIT_POLICIES)} or a state literal, got {self.init!r}."
            )
        if self.lag < 0:
            raise InputError("lag must be non-negative.")
        if self.trials < 1:
            raise InputError("trials must be at least 1.")
        if self.workers < 1:
            raise InputError("workers must be at least 1.")
        if self.max_moves is not None and self.max_moves <= 0:
            raise InputError("max_moves must be positive.")
        if self.capacity < 1:
            raise InputError("capacity must be positive.")

    @property
    def daemon_kind(self) -> Daemon:
        return Daemon(self.daemon)

    @property
    def read(self) -> ReadModel:
        if ReadKind(self.read_model) is ReadKind.AMR:
            return ReadModel.amr(self.lag, self.refresh_on_act)
        return ReadModel.fresh()


def load_config_from_toml(config_path: Path) -> Dict[str, Any]:
    """Load the ``[experiment]`` table of a TOML file.

    A missing file yields an empty mapping; a malformed one is an input error.
    """

    if not config_path.exists():
        logger.warning("Config file %s not found; using defaults", config_path)
        return {}
    try:
        with config_path.open("rb") as f:
            data = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise InputError(f"Failed to load config {config_path}: {e}") from e
    table = {key.replace("-", "_"): value for key, value in data.get("experiment", {}).items()}
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = sorted(set(table) - known)
    if unknown:
        raise InputError(f"Unknown config keys in {config_path}: {', '.join(unknown)}")
    return table


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """Merge defaults, the TOML file named by ``args.config`` and explicit flags.

    Flags left at ``None`` on ``args`` do not override anything.
    """

    values: Dict[str, Any] = {}
    if getattr(args, "config", None) is not None:
        logger.info("Loading config from %s", args.config)
        values.update(load_config_from_toml(args.config))
    for f in fields(ExperimentConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            values[f.name] = flag
    config = ExperimentConfig(**values)
    config.validate()
    return config
