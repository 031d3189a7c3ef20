"""
Brute-force oracles over bounded word universes. Slow on purpose: they
evaluate definitions directly and are what the automata pipelines are
checked against.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Iterable, Optional

from ..automata.alphabet import Word, WordLike
from ..automata.nfa import accepts
from ..automata.transducer import Transducer, successors
from ..errors import ConfigurationError
from ..frameworks.framework import Framework
from .instance import SafetyInstance
from .sat import CnfFormula

TRUTH_TABLE_MAX_VARS = 22


def step_successors(inst: SafetyInstance, c: WordLike, max_len: Optional[int] = None) -> set[Word]:
    """Delta(c), restricted to words of length <= max_len (|c| for length-preserving Delta)."""
    word = inst.sigma.parse_word(c)
    bound = len(word) if inst.delta.length_preserving else (max_len if max_len is not None else len(word) + 1)
    return successors(inst.delta, word, bound)


def configurations(inst: SafetyInstance, length: int) -> Iterable[Word]:
    return inst.sigma.words(length)


def brute_force_inductive(inst: SafetyInstance, a: WordLike, max_len: Optional[int] = None) -> bool:
    """
    Every c in V(A) has all its successors in V(A). For length-uniform
    frameworks V(A) only holds words of length |A|; otherwise the check runs
    over configurations up to max_len.
    """
    fw = inst.framework
    word = inst.gamma.parse_word(a)
    if fw.length_uniform:
        universe: Iterable[Word] = inst.sigma.words(len(word))
    else:
        if max_len is None:
            raise ConfigurationError("max_len is required for frameworks that are not length-uniform")
        universe = inst.sigma.words_up_to(max_len)
    for c in universe:
        if not fw.satisfies(word, c):
            continue
        for c2 in step_successors(inst, c, max_len):
            if not fw.satisfies(word, c2):
                return False
    return True


def is_trivial(fw: Framework, a: WordLike, length: int) -> bool:
    """A is satisfied by all or by none of the configurations of the given length."""
    verdicts = {fw.satisfies(a, c) for c in fw.sigma.words(length)}
    return len(verdicts) <= 1


def bounded_reach(inst: SafetyInstance, max_len: int, max_steps: int) -> dict[Word, Optional[Word]]:
    """
    BFS over Delta from the initial configurations of length <= max_len.
    Maps every reached configuration to its BFS parent (None for initial ones).
    """
    parent: dict[Word, Optional[Word]] = {}
    frontier: deque[tuple[Word, int]] = deque()
    for c in inst.sigma.words_up_to(max_len):
        if accepts(inst.c_init, c):
            parent[c] = None
            frontier.append((c, 0))
    while frontier:
        c, depth = frontier.popleft()
        if depth == max_steps:
            continue
        for c2 in sorted(step_successors(inst, c, max_len)):
            if c2 not in parent:
                parent[c2] = c
                frontier.append((c2, depth + 1))
    return parent


def reach_unsafe(inst: SafetyInstance, max_len: int, max_steps: int) -> Optional[list[Word]]:
    """A concrete path from C_I into C_U within the bounds, or None."""
    parent = bounded_reach(inst, max_len, max_steps)
    for c in sorted(parent, key=lambda w: (len(w), w)):
        if accepts(inst.c_unsafe, c):
            path = [c]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
    return None


def relation_pairs(t: Transducer, max_len: int) -> set[tuple[Word, Word]]:
    """Every (u, w) with |u|, |w| <= max_len related by t."""
    return {
        (u, w)
        for u in t.left.words_up_to(max_len)
        for w in t.right.words_up_to(max_len)
        if t.relates(u, w)
    }


def separated_by(fw: Framework, constraints: Iterable[WordLike], c: WordLike, c2: WordLike) -> Optional[Word]:
    """First constraint in the iterable satisfied by c and not by c'."""
    for a in constraints:
        if fw.satisfies(a, c) and not fw.satisfies(a, c2):
            return fw.gamma.parse_word(a)
    return None


def brute_force_not_preach(inst: SafetyInstance, ind_lang, c: WordLike, c2: WordLike) -> bool:
    """
    Is (c, c') separated by a constraint of ind_lang (an automaton over gamma)?
    Candidates are the constraints of length |c|, which is exhaustive for
    length-uniform frameworks.
    """
    fw = inst.framework
    n = len(inst.sigma.parse_word(c))
    candidates = (a for a in fw.gamma.words(n) if accepts(ind_lang, a))
    return separated_by(fw, candidates, c, c2) is not None


def truth_table_sat(formula: CnfFormula) -> bool:
    """Exhaustive satisfiability; only for small formulas."""
    n = formula.num_vars
    if n > TRUTH_TABLE_MAX_VARS:
        raise ConfigurationError(f"{n} variables exceed the truth-table bound {TRUTH_TABLE_MAX_VARS}")
    for bits in itertools.product((False, True), repeat=n):
        if all(any(bits[abs(lit) - 1] == (lit > 0) for lit in clause) for clause in formula.clauses):
            return True
    return False


# -------------------------
# Abstraction / concretisation on bounded universes
# -------------------------
def alpha(fw: Framework, configs: Iterable[WordLike], length: int) -> set[Word]:
    """Constraints of the given length satisfied by every configuration in configs."""
    configs = [fw.sigma.parse_word(c) for c in configs]
    return {
        a
        for a in fw.gamma.words(length)
        if fw.in_constraints(a) and all(fw.satisfies(a, c) for c in configs)
    }


def gamma_of(fw: Framework, constraints: Iterable[WordLike], length: int) -> set[Word]:
    """Configurations of the given length satisfying every constraint in the set."""
    constraints = [fw.gamma.parse_word(a) for a in constraints]
    return {c for c in fw.sigma.words(length) if all(fw.satisfies(a, c) for a in constraints)}


def galois_holds(fw: Framework, configs: Iterable[WordLike], constraints: Iterable[WordLike], length: int) -> bool:
    """B subset of alpha(C) iff C subset of gamma(B), on words of one length."""
    configs = {fw.sigma.parse_word(c) for c in configs}
    constraints = {fw.gamma.parse_word(a) for a in constraints}
    left = constraints <= alpha(fw, configs, length)
    right = configs <= gamma_of(fw, constraints, length)
    return left == right
