"""
Separability for length-preserving instances: is there an inductive
constraint satisfied by c but not by c'? Decided by a CNF encoding of the
constraint word and the runs of the automata reading it.
"""

from __future__ import annotations

import hashlib
import logging
from pathlib import Path
from typing import Optional, Union

from ..automata.alphabet import Word, WordLike
from ..automata.nfa import Nfa
from ..errors import ConfigurationError, RtsError, UnsupportedInstanceError
from .instance import SafetyInstance
from .invariants import is_inductive, non_inductive_nfa
from .sat import CnfFormula, SatResult, sat_solve

logger = logging.getLogger(__name__)

BRUTE_FORCE_GUARD = 10**6


def check_separable_case(inst: SafetyInstance, c: Word, c2: Word) -> None:
    inst.sigma.encode(c)
    inst.sigma.encode(c2)
    if not inst.delta.length_preserving:
        raise UnsupportedInstanceError(
            f"separability is only decided for length-preserving transition relations; '{inst.name}' is not"
        )
    if not inst.framework.length_uniform:
        raise UnsupportedInstanceError(
            f"separability is only decided for length-preserving interpretations; '{inst.framework.name}' is not"
        )
    if len(c) != len(c2):
        raise UnsupportedInstanceError(
            f"separability is only decided for configurations of equal length, got {len(c)} and {len(c2)}"
        )


def _run_group(
    f: CnfFormula, tag: str, dfa_table, initial: int, num_states: int, n: int, gamma_size: int, step_sym
) -> None:
    """One-hot run of a complete DFA along the letter variables; step_sym(gamma, i) gives its input."""
    for i in range(n + 1):
        f.at_most_one([f.var((tag, q, i)) for q in range(num_states)])
    f.add([f.var((tag, initial, 0))])
    for i in range(1, n + 1):
        for q in range(num_states):
            for g in range(gamma_size):
                r = dfa_table[q][step_sym(g, i)]
                f.add([-f.var((tag, q, i - 1)), -f.var(("letter", g, i)), f.var((tag, r, i))])


def encode(inst: SafetyInstance, c: WordLike, c2: WordLike) -> CnfFormula:
    """
    Satisfying assignments, read on the letter variables, are the constraint
    words A with |A| = |c| that are constraints, are satisfied by c but not by
    c', and are rejected by the non-inductive NFA.
    """
    sigma = inst.sigma
    cw, c2w = sigma.encode(c), sigma.encode(c2)
    n = len(cw)
    fw = inst.framework
    gamma = fw.gamma
    pa = fw.pairs
    f = CnfFormula()

    # letters: exactly one per position
    for i in range(1, n + 1):
        for g in range(gamma.size):
            f.var(("letter", g, i))
    for i in range(1, n + 1):
        f.exactly_one([f.var(("letter", g, i)) for g in range(gamma.size)])

    # A is a constraint
    cons = fw.constraints_dfa
    _run_group(f, "A", cons.table, cons.initial, cons.num_states, n, gamma.size, lambda g, i: g)
    for q in range(cons.num_states):
        if q not in cons.final:
            f.add([-f.var(("A", q, n))])

    # c in V(A), c' not in V(A)
    interp = fw.interp
    for tag, word in (("V+", cw), ("V-", c2w)):
        _run_group(
            f, tag, interp.table, interp.initial, interp.num_states, n, gamma.size,
            lambda g, i, word=word: pa.pair(g, word[i - 1]),
        )
    for q in range(interp.num_states):
        if q in interp.final:
            f.add([-f.var(("V-", q, n))])
        else:
            f.add([-f.var(("V+", q, n))])

    # A rejected by the non-inductive NFA: (q, i) iff q reachable after i letters
    nfa = non_inductive_nfa(inst, restrict=False)
    _reachability_group(f, nfa, n)
    logger.debug("encoded separation of length %d: %d vars, %d clauses", n, f.num_vars, len(f.clauses))
    return f


def _reachability_group(f: CnfFormula, nfa: Nfa, n: int) -> None:
    for i in range(n + 1):
        for q in range(nfa.num_states):
            f.var(("R", q, i))
    for q in range(nfa.num_states):
        f.add([f.var(("R", q, 0)) if q in nfa.initial else -f.var(("R", q, 0))])
    incoming: dict[int, list[tuple[int, int]]] = {q: [] for q in range(nfa.num_states)}
    for p, sym, q in sorted(nfa.transitions):
        incoming[q].append((p, sym))
    moves = sorted({(p, sym) for p, sym, _ in nfa.transitions})
    for i in range(1, n + 1):
        for p, sym in moves:
            y = f.var(("Y", p, sym, i))
            r, letter = f.var(("R", p, i - 1)), f.var(("letter", sym, i))
            f.add([-y, r])
            f.add([-y, letter])
            f.add([y, -r, -letter])
        for q in range(nfa.num_states):
            rq = f.var(("R", q, i))
            ys = [f.var(("Y", p, sym, i)) for p, sym in incoming[q]]
            f.add([-rq] + ys)
            for y in ys:
                f.add([-y, rq])
    for q in nfa.final:
        f.add([-f.var(("R", q, n))])


def expected_num_vars(inst: SafetyInstance, n: int) -> int:
    """Variable count of encode() for words of length n."""
    fw = inst.framework
    nfa = non_inductive_nfa(inst, restrict=False)
    moves = len({(p, sym) for p, sym, _ in nfa.transitions})
    return (
        n * fw.gamma.size
        + (n + 1) * (fw.constraints_dfa.num_states + 2 * fw.interp.num_states + nfa.num_states)
        + n * moves
    )


def decode(f: CnfFormula, result: SatResult, inst: SafetyInstance, n: int) -> Word:
    gamma = inst.gamma
    word = []
    for i in range(1, n + 1):
        hits = [g for g in range(gamma.size) if result.value(f.var_names[("letter", g, i)])]
        if len(hits) != 1:
            raise RtsError(f"model has {len(hits)} letters at position {i}")
        word.append(gamma.symbols[hits[0]])
    return tuple(word)


def separate(
    inst: SafetyInstance,
    c: WordLike,
    c2: WordLike,
    dimacs_dir: Optional[Union[str, Path]] = None,
) -> Optional[Word]:
    """
    An inductive constraint A with c in V(A) and c' not in V(A), or None when
    no such A exists.
    """
    cw, c2w = inst.sigma.parse_word(c), inst.sigma.parse_word(c2)
    check_separable_case(inst, cw, c2w)
    if cw == c2w:
        return None
    f = encode(inst, cw, c2w)
    if dimacs_dir is not None:
        digest = hashlib.sha1(" ".join(cw + ("|",) + c2w).encode()).hexdigest()[:10]
        f.write_dimacs(Path(dimacs_dir) / f"separate_{len(cw)}_{digest}.cnf")
    result = sat_solve(f)
    if not result:
        logger.debug("no separator for %s / %s", " ".join(cw), " ".join(c2w))
        return None
    a = decode(f, result, inst, len(cw))
    fw = inst.framework
    if not (is_inductive(inst, a) and fw.satisfies(a, cw) and not fw.satisfies(a, c2w)):
        raise RtsError(f"decoded separator {' '.join(a)} fails re-validation")
    logger.debug("separator %s for %s / %s", " ".join(a), " ".join(cw), " ".join(c2w))
    return a


def brute_force_separate(
    inst: SafetyInstance, c: WordLike, c2: WordLike, guard: int = BRUTE_FORCE_GUARD
) -> Optional[Word]:
    """First separator of length |c| in lexicographic order, by enumeration."""
    cw, c2w = inst.sigma.parse_word(c), inst.sigma.parse_word(c2)
    n = len(cw)
    fw = inst.framework
    if fw.gamma.size**n > guard:
        raise ConfigurationError(f"{fw.gamma.size}^{n} candidate constraints exceed the enumeration bound {guard}")
    for a in fw.gamma.words(n):
        if not fw.in_constraints(a):
            continue
        if fw.satisfies(a, cw) and not fw.satisfies(a, c2w) and is_inductive(inst, a):
            return a
    return None
