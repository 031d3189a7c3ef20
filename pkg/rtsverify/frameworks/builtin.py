from __future__ import annotations

import logging

from ..automata.alphabet import Alphabet, PairAlphabet, PowersetAlphabet, ProductAlphabet, TaggedAlphabet
from ..automata.dfa import Dfa
from ..automata.nfa import Nfa, remove_epsilon
from ..errors import ConfigurationError, UsageError, alphabet_mismatch
from .framework import Framework

logger = logging.getLogger(__name__)

MAX_VIEWS = 16


# -------------------------
# Clause frameworks
# -------------------------
def disjunctive_framework(sigma: Alphabet, b: int = 1) -> Framework:
    """
    Positive CNF with b clauses. A letter is a b-tuple of subsets of sigma;
    the state is the bitmask of clauses already satisfied, and every padded
    letter satisfies everything (length mismatch).
    """
    if b < 1:
        raise UsageError(f"disjunctive framework needs b >= 1, got {b}")
    clause = PowersetAlphabet(sigma)
    gamma: Alphabet = clause if b == 1 else ProductAlphabet([clause] * b)
    pa = PairAlphabet(gamma, sigma)
    full = (1 << b) - 1

    def step(mask: int, k: int) -> int:
        i, j = pa.split(k)
        if i == pa.lpad or j == pa.rpad:
            return full
        letters = (i,) if b == 1 else gamma.components(i)
        for c, letter in enumerate(letters):
            if clause.contains(letter, j):
                mask |= 1 << c
        return mask

    interp = Dfa.explore(pa, 0, step, lambda mask: mask == full)
    return Framework(gamma, sigma, Nfa.universal(gamma), interp, f"disj={b}", length_uniform=True)


def xor_framework(sigma: Alphabet) -> Framework:
    """
    Exactly one position matches. States 0 and 1 count matches, 3 has seen a
    second match and 2 is the pad-reached state; any padded letter goes to 2,
    so every length mismatch is satisfied.
    """
    gamma = PowersetAlphabet(sigma)
    pa = PairAlphabet(gamma, sigma)

    def step(q: int, k: int):
        i, j = pa.split(k)
        if i == pa.lpad or j == pa.rpad:
            return 2
        if q == 2:
            return None
        if gamma.contains(i, j):
            return 1 if q == 0 else 3
        return q

    interp = Dfa.explore(pa, 0, step, lambda q: q in (1, 2))
    return Framework(gamma, sigma, Nfa.universal(gamma), interp, "xor", length_uniform=True)


def _view_name(view: tuple[str, ...]) -> str:
    if not view:
        return "eps"
    if all(len(s) == 1 for s in view):
        return "".join(view)
    return ".".join(view)


def views_framework(sigma: Alphabet, k: int = 1) -> Framework:
    """
    A letter is a set F of forbidden views (words of length <= k); constraints
    are constant words F^l and V(F^l) is the configurations of length l with
    no scattered subword in F. The state keeps F and, per view, the length of
    its longest matched prefix.
    """
    if k < 1:
        raise UsageError(f"views framework needs k >= 1, got {k}")
    views = list(sigma.words_up_to(k))
    if len(views) > MAX_VIEWS:
        raise ConfigurationError(
            f"views={k} over {sigma.size} symbols gives {len(views)} views; the bound is {MAX_VIEWS}"
        )
    ids = [sigma.encode(v) for v in views]
    view_alphabet = Alphabet([_view_name(v) for v in views], name=f"views{k}({sigma.name})")
    gamma = PowersetAlphabet(view_alphabet)
    pa = PairAlphabet(gamma, sigma)

    def advance(members: tuple[int, ...], progress: tuple[int, ...], s: int):
        out = []
        for v, p in zip(members, progress):
            if p < len(ids[v]) and ids[v][p] == s:
                p += 1
            if p == len(ids[v]):
                return None
            out.append(p)
        return tuple(out)

    def step(key, letter: int):
        f, j = pa.split(letter)
        if f == pa.lpad or j == pa.rpad:
            return None
        if key == "start":
            members = tuple(v for v in range(len(views)) if gamma.contains(f, v))
            progress = advance(members, (0,) * len(members), j)
            return None if progress is None else (f, members, progress)
        f0, members, progress = key
        if f != f0:
            return None
        progress = advance(members, progress, j)
        return None if progress is None else (f, members, progress)

    interp = Dfa.explore(pa, "start", step, lambda key: True)
    trans = []
    for f in range(gamma.size):
        trans += [(0, f, f + 1), (f + 1, f, f + 1)]
    constraints = Nfa(gamma, gamma.size + 1, trans, {0}, range(gamma.size + 1))
    logger.debug("views=%d: %d letters, %d interpretation states", k, gamma.size, interp.num_states)
    return Framework(gamma, sigma, constraints, interp, f"views={k}", length_uniform=True)


def trivial_framework(sigma: Alphabet) -> Framework:
    """One letter 'T'; every constraint is satisfied by every configuration."""
    gamma = Alphabet(["T"], name="trivial")
    pa = PairAlphabet(gamma, sigma)
    interp = Dfa.explore(pa, 0, lambda q, k: 0, lambda q: True)
    return Framework(gamma, sigma, Nfa.universal(gamma), interp, "trivial", length_uniform=True)


# -------------------------
# Combinators
# -------------------------
def _check_sigma(f1: Framework, f2: Framework, what: str) -> None:
    if f1.sigma != f2.sigma:
        raise alphabet_mismatch(f1.sigma, f2.sigma, what)


def union_framework(f1: Framework, f2: Framework) -> Framework:
    """
    Tagged disjoint union. The interpretation starts in a fresh state that
    commits to a side on the first constraint letter; padded letters from the
    fresh state follow side 1 when the empty word is a side-1 constraint.
    """
    _check_sigma(f1, f2, "union_framework")
    gamma = TaggedAlphabet(f1.gamma, f2.gamma)
    sigma = f1.sigma
    pa = PairAlphabet(gamma, sigma)
    sides = {1: f1, 2: f2}
    eps_side = 1 if f1.constraints_dfa.initial in f1.constraints_dfa.final else 2

    c1, c2 = remove_epsilon(f1.constraints), remove_epsilon(f2.constraints)
    n1 = c1.num_states
    trans = [(p, a, q) for p, a, q in c1.transitions]
    trans += [(p + n1, a + f1.gamma.size, q + n1) for p, a, q in c2.transitions]
    constraints = Nfa(
        gamma,
        n1 + c2.num_states,
        trans,
        list(c1.initial) + [q + n1 for q in c2.initial],
        list(c1.final) + [q + n1 for q in c2.final],
    )

    def side_step(side: int, q: int, letter: int, j: int) -> int:
        f = sides[side]
        inner = f.pairs
        left = inner.lpad if letter < 0 else letter
        right = inner.rpad if j == pa.rpad else j
        return f.interp.table[q][inner.pair(left, right)]

    def step(key, k: int):
        i, j = pa.split(k)
        if key == "start":
            if i == pa.lpad:
                return (eps_side, side_step(eps_side, sides[eps_side].interp.initial, -1, j))
            side, letter = gamma.side(i)
            return (side, side_step(side, sides[side].interp.initial, letter, j))
        side, q = key
        if i == pa.lpad:
            return (side, side_step(side, q, -1, j))
        s, letter = gamma.side(i)
        if s != side:
            return None
        return (side, side_step(side, q, letter, j))

    def is_final(key) -> bool:
        if key == "start":
            f = sides[eps_side]
            return f.interp.initial in f.interp.final
        side, q = key
        return q in sides[side].interp.final

    interp = Dfa.explore(pa, "start", step, is_final)
    return Framework(
        gamma,
        sigma,
        constraints,
        interp,
        f"union({f1.name},{f2.name})",
        length_uniform=f1.length_uniform and f2.length_uniform,
    )


def convolution_framework(f1: Framework, f2: Framework) -> Framework:
    """Conjunction of equal-length constraints; letters are pairs a|b."""
    _check_sigma(f1, f2, "convolution_framework")
    gamma = ProductAlphabet([f1.gamma, f2.gamma])
    sigma = f1.sigma
    pa = PairAlphabet(gamma, sigma)
    p1, p2 = f1.pairs, f2.pairs
    t1, t2 = f1.interp.table, f2.interp.table

    c1, c2 = remove_epsilon(f1.constraints), remove_epsilon(f2.constraints)
    out1, out2 = c1.out, c2.out

    def constraint_successors(key):
        q1, q2 = key
        for a, targets1 in out1[q1].items():
            for b, targets2 in out2[q2].items():
                sym = gamma.combine((a, b))
                for r1 in targets1:
                    for r2 in targets2:
                        yield sym, (r1, r2)

    constraints = Nfa.explore(
        gamma,
        [(q1, q2) for q1 in sorted(c1.initial) for q2 in sorted(c2.initial)],
        constraint_successors,
        lambda key: key[0] in c1.final and key[1] in c2.final,
    )

    def step(key, k: int):
        i, j = pa.split(k)
        q1, q2 = key
        if i == pa.lpad:
            a, b = p1.lpad, p2.lpad
        else:
            a, b = gamma.components(i)
        j1 = p1.rpad if j == pa.rpad else j
        j2 = p2.rpad if j == pa.rpad else j
        return (t1[q1][p1.pair(a, j1)], t2[q2][p2.pair(b, j2)])

    interp = Dfa.explore(
        pa,
        (f1.interp.initial, f2.interp.initial),
        step,
        lambda key: key[0] in f1.interp.final and key[1] in f2.interp.final,
    )
    return Framework(
        gamma,
        sigma,
        constraints,
        interp,
        f"conv({f1.name},{f2.name})",
        length_uniform=f1.length_uniform and f2.length_uniform,
    )
