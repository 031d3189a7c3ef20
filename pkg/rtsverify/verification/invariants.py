"""
Direct pipeline: the non-inductive constraints, the potential reachability
relation for a given set of inductive constraints, and the safety decision.
"""

from __future__ import annotations

import logging
import time
from typing import Callable, Iterator, Optional, Union

from ..automata.alphabet import WordLike
from ..automata.dfa import Dfa, determinize, minimize, product, sizes
from ..automata.nfa import Nfa, as_nfa, intersect, is_empty, remove_epsilon, trim
from ..automata.transducer import (
    Transducer,
    complement_relation,
    compose,
    identity_on,
    image,
    inverse,
    preimage,
    project,
)
from ..errors import UsageError
from .instance import AutomatonSize, SafetyInstance, Verdict

logger = logging.getLogger(__name__)

DONE = -1


def _product_step(inst: SafetyInstance) -> Callable[[tuple, int], Iterator[tuple]]:
    """
    Successor function of the product Delta x V x co-V read along one
    constraint letter `a` (gamma pad id for the part after the constraint
    ended). A core state is (d, v, w): d the Delta state or DONE once both
    configuration tracks ended, v the interpretation on (A, c), w the
    interpretation on (A, c').
    """
    fw = inst.framework
    pa = fw.pairs
    vt = fw.interp.table
    delta = remove_epsilon(inst.delta.auto)
    dpa = inst.delta.pairs
    dout = delta.out
    dfinal = delta.final
    gpad, spad = pa.lpad, pa.rpad

    def read(state: int, a: int, x: int) -> int:
        if a == gpad and x == spad:
            return state
        return vt[state][pa.pair(a, x)]

    def step(core: tuple, a: int) -> Iterator[tuple]:
        d, v, w = core
        if d != DONE:
            for k, targets in dout[d].items():
                x, y = dpa.split(k)
                v2, w2 = read(v, a, x), read(w, a, y)
                for d2 in targets:
                    yield (d2, v2, w2)
        if a != gpad and (d == DONE or d in dfinal):
            yield (DONE, read(v, a, spad), read(w, a, spad))

    return step


def _core_final(inst: SafetyInstance) -> Callable[[tuple], bool]:
    vfinal = inst.framework.interp.final
    dfinal = inst.delta.auto.final

    def is_final(core: tuple) -> bool:
        d, v, w = core
        return (d == DONE or d in dfinal) and v in vfinal and w not in vfinal

    return is_final


def _initial_cores(inst: SafetyInstance) -> list[tuple]:
    v0 = inst.framework.interp.initial
    return [(d, v0, v0) for d in sorted(inst.delta.auto.initial)]


def non_inductive_nfa(inst: SafetyInstance, restrict: bool = True, fused: bool = True) -> Nfa:
    """
    NFA over gamma for the constraints A such that some transition (c, c')
    has c in V(A) and c' not in V(A). With restrict the result is cut down
    to the constraint language. fused=False runs the relational pipeline
    step by step (same language, larger intermediates).
    """
    key = ("nonind" if restrict else "nonind_full") + ("" if fused else "_literal")
    if key in inst._cache:
        return inst._cache[key]
    t0 = time.perf_counter()
    if fused:
        result = _non_inductive_fused(inst)
    else:
        result = _non_inductive_literal(inst)
    if restrict and not inst.framework.all_constraints:
        result = trim(intersect(result, inst.framework.constraints))
    inst._cache[key] = result
    logger.debug(
        "non-inductive NFA (%s, %s): %d states in %.3fs",
        "fused" if fused else "literal",
        "restricted" if restrict else "unrestricted",
        result.num_states,
        time.perf_counter() - t0,
    )
    return result


def _non_inductive_fused(inst: SafetyInstance) -> Nfa:
    gamma = inst.gamma
    gpad = inst.framework.pairs.lpad
    step = _product_step(inst)
    core_final = _core_final(inst)

    # key = (core, constraint ended); letters after the end are epsilon moves
    def successors(key):
        core, ended = key
        if not ended:
            for a in range(gamma.size):
                for nxt in step(core, a):
                    yield a, (nxt, False)
        for nxt in step(core, gpad):
            yield None, (nxt, True)

    result = Nfa.explore(
        gamma,
        [(core, False) for core in _initial_cores(inst)],
        successors,
        lambda key: core_final(key[0]),
    )
    return trim(result)


def _non_inductive_literal(inst: SafetyInstance) -> Nfa:
    v_rel = inst.framework.relation
    moved = compose(v_rel, inst.delta)
    separated = compose(moved, complement_relation(inverse(v_rel)))
    diagonal = identity_on(Nfa.universal(inst.gamma))
    on_diagonal = Transducer(inst.gamma, inst.gamma, trim(intersect(separated.auto, diagonal.auto)))
    return project(on_diagonal, 1)


def bound_non_inductive(inst: SafetyInstance) -> int:
    """n_Delta * n_V^2 for the instance."""
    return inst.delta.num_states * inst.framework.interp.num_states**2


def is_inductive(inst: SafetyInstance, a: WordLike) -> bool:
    """
    Membership of one constraint in Ind, searching the product along the
    fixed word A only.
    """
    word = inst.gamma.parse_word(a)
    if not inst.framework.in_constraints(word):
        raise UsageError(f"{' '.join(word) or 'eps'} is not a constraint of '{inst.framework.name}'")
    ids = inst.gamma.encode(word)
    n = len(ids)
    gpad = inst.framework.pairs.lpad
    step = _product_step(inst)
    core_final = _core_final(inst)

    seen = set()
    stack = [(0, core) for core in _initial_cores(inst)]
    while stack:
        k, core = stack.pop()
        if (k, core) in seen:
            continue
        seen.add((k, core))
        if k == n and core_final(core):
            return False
        if k < n:
            stack.extend((k + 1, nxt) for nxt in step(core, ids[k]))
        else:
            stack.extend((k, nxt) for nxt in step(core, gpad))
    return True


def inductive_dfa(inst: SafetyInstance) -> Dfa:
    """Minimal DFA for Ind = constraints minus non-inductive ones."""
    if "ind" in inst._cache:
        return inst._cache["ind"]
    nonind = determinize(non_inductive_nfa(inst, restrict=False))
    result = minimize(product(inst.framework.constraints_dfa, nonind, "diff"))
    inst._cache["ind"] = result
    logger.debug("Ind DFA: %d states", result.num_states)
    return result


def _trimmed(lang: Union[Nfa, Dfa]) -> Nfa:
    return trim(as_nfa(lang))


def not_preach_transducer(inst: SafetyInstance, ind_lang: Union[Nfa, Dfa]) -> Transducer:
    """Pairs (c, c') separated by some constraint of ind_lang: V^-1 ; Id(H) ; co-V."""
    v_rel = inst.framework.relation
    left = compose(inverse(v_rel), identity_on(_trimmed(ind_lang)))
    return compose(left, complement_relation(v_rel))


def preach_transducer(inst: SafetyInstance, ind_lang: Union[Nfa, Dfa]) -> Transducer:
    """Potential reachability relation for ind_lang, as a minimal deterministic automaton."""
    comp = complement_relation(not_preach_transducer(inst, ind_lang))
    return Transducer(inst.sigma, inst.sigma, trim(minimize(comp.auto).to_nfa()))


def _of_length(sigma, n: int) -> Nfa:
    return Nfa(sigma, n + 1, ((i, a, i + 1) for i in range(n) for a in range(sigma.size)), {0}, {n})


def _size(a) -> AutomatonSize:
    s = sizes(a)
    return AutomatonSize(trim=s.trim, complete=s.complete)


def abstract_safety_direct(inst: SafetyInstance, ind_lang: Optional[Union[Nfa, Dfa]] = None) -> Verdict:
    """
    Safe iff PReach_H(C_I) and C_U are disjoint, H = Ind unless given. A
    counterexample is the shortest, then least, c' in the intersection and
    the shortest, then least, c in C_I with (c, c') in PReach_H, taken of
    length |c'| when C_I has such a word.
    """
    t0 = time.perf_counter()
    certificate = inductive_dfa(inst) if ind_lang is None else minimize(ind_lang)
    preach = preach_transducer(inst, certificate)
    reach = image(inst.c_init, preach)
    bad = is_empty(intersect(reach, inst.c_unsafe))
    if ind_lang is None:
        sizes_ = {"Ind": _size(certificate), "PReach": _size(preach.auto)}
    else:
        sizes_ = {"H": _size(certificate), "PReach_H": _size(preach.auto)}
    stats = {"wall_s": round(time.perf_counter() - t0, 3)}
    if bad is None:
        logger.info("direct: %s safe for property %s", inst.name, inst.prop)
        return Verdict(
            safe=True,
            mode="direct",
            property=inst.prop,
            framework=inst.framework.name,
            certificate=certificate,
            sizes=sizes_,
            stats=stats,
        )
    sources = intersect(preimage(preach, Nfa.from_word(inst.sigma, bad)), inst.c_init)
    # separability is only decided on equal lengths
    source = is_empty(intersect(sources, _of_length(inst.sigma, len(bad))))
    if source is None:
        source = is_empty(sources)
    logger.info("direct: %s not abstractly safe for %s, witness %s -> %s", inst.name, inst.prop, source, bad)
    return Verdict(
        safe=False,
        mode="direct",
        property=inst.prop,
        framework=inst.framework.name,
        witness=(source, bad),
        sizes=sizes_,
        stats=stats,
    )
