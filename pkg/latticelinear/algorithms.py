"""Program lookup by name."""

from __future__ import annotations

from typing import Callable, Dict, Optional

from .colouring import gc_program
from .dominating_set import mds_eventually_ll_program, mds_program
from .errors import InputError
from .marriage import SmpInstance, smp_program
from .program import NodeProgram
from .vertex_cover import naive_vc_program, vc_distributed_program, vc_program

_FACTORIES: Dict[str, Callable[[], NodeProgram]] = {
    "mds": mds_program,
    "mds-ell": mds_eventually_ll_program,
    "gc": gc_program,
    "vc": vc_program,
    "vc-dist": vc_distributed_program,
    "naive-vc": naive_vc_program,
}

ALGORITHM_NAMES = ("mds", "mds-ell", "gc", "vc", "vc-dist", "smp", "naive-vc")


def program_by_name(name: str, instance: Optional[SmpInstance] = None,
                    max_init_colour: Optional[int] = None) -> NodeProgram:
    """Build the program registered under ``name``."""

    if name == "smp":
        if instance is None:
            raise InputError("smp needs an instance (men_pref / women_pref).")
        return smp_program(instance)
    if name == "gc":
        return gc_program(max_init_colour)
    try:
        return _FACTORIES[name]()
    except KeyError:
        raise InputError(
            f"Unknown algorithm {name!r}; expected one of {', '.join(ALGORITHM_NAMES)}."
        ) from None
