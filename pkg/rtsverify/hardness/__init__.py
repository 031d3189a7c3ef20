from .colouring import colouring_instance
from .gadget import GadgetConfiguration, oracle_successors, sample_run, semantics_oracle_step
from .generator import (
    build_hardness_instance,
    constraint_a2,
    hardness_delta,
    hardness_framework,
    pair_constraint,
    separator_candidate,
)
from .tm import TmSpec, parse_tm, read_tm

__all__ = [
    "GadgetConfiguration",
    "TmSpec",
    "build_hardness_instance",
    "colouring_instance",
    "constraint_a2",
    "hardness_delta",
    "hardness_framework",
    "oracle_successors",
    "pair_constraint",
    "parse_tm",
    "read_tm",
    "sample_run",
    "semantics_oracle_step",
    "separator_candidate",
]
