from .instance import AutomatonSize, SafetyInstance, Verdict
from .invariants import (
    abstract_safety_direct,
    inductive_dfa,
    is_inductive,
    non_inductive_nfa,
    preach_transducer,
)
from .learner import learn, learn_and_check
from .sat import CnfFormula, read_dimacs, sat_solve
from .separability import separate

__all__ = [
    "AutomatonSize",
    "CnfFormula",
    "SafetyInstance",
    "Verdict",
    "abstract_safety_direct",
    "inductive_dfa",
    "is_inductive",
    "learn",
    "learn_and_check",
    "non_inductive_nfa",
    "preach_transducer",
    "read_dimacs",
    "sat_solve",
    "separate",
]
