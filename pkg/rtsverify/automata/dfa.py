from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Optional, Union

import numpy as np

from ..errors import alphabet_mismatch
from .alphabet import Alphabet, Word, WordLike
from .nfa import Nfa, remove_epsilon


class Dfa:
    """
    Complete DFA; delta is an (num_states x alphabet size) integer array.
    A rejecting sink, when needed, is an ordinary explicit state.
    """

    def __init__(self, alphabet: Alphabet, delta: np.ndarray, initial: int, final):
        self.alphabet = alphabet
        self.delta = np.asarray(delta, dtype=np.int64).reshape(-1, alphabet.size)
        self.delta.setflags(write=False)
        self.initial = int(initial)
        self.final: frozenset[int] = frozenset(int(q) for q in final)

    @property
    def num_states(self) -> int:
        return int(self.delta.shape[0])

    @cached_property
    def final_mask(self) -> np.ndarray:
        mask = np.zeros(self.num_states, dtype=bool)
        if self.final:
            mask[list(self.final)] = True
        return mask

    @cached_property
    def table(self) -> list[list[int]]:
        """delta as nested lists; faster than numpy for scalar lookups."""
        return self.delta.tolist()

    def step(self, q: int, sym: int) -> int:
        return self.table[q][sym]

    def run_ids(self, ids) -> int:
        q = self.initial
        t = self.table
        for sym in ids:
            q = t[q][sym]
        return q

    def accepts(self, word: WordLike) -> bool:
        return self.run_ids(self.alphabet.encode(word)) in self.final

    def to_nfa(self) -> Nfa:
        trans = [(p, a, int(q)) for p, row in enumerate(self.table) for a, q in enumerate(row)]
        return Nfa(self.alphabet, self.num_states, trans, {self.initial}, self.final)

    def __repr__(self) -> str:
        return f"Dfa(states={self.num_states}, final={len(self.final)}, alphabet={self.alphabet.name!r})"

    @staticmethod
    def explore(
        alphabet: Alphabet,
        initial: Hashable,
        step: Callable[[Hashable, int], Optional[Hashable]],
        is_final: Callable[[Hashable], bool],
    ) -> "Dfa":
        """
        Build a complete DFA from an implicit deterministic state space,
        breadth-first in symbol order. step() returning None sends the letter
        to a shared rejecting sink appended last.
        """
        k = alphabet.size
        ids: dict[Hashable, int] = {initial: 0}
        order: list[Hashable] = [initial]
        rows: list[list[int]] = []
        needs_sink = False
        i = 0
        while i < len(order):
            key = order[i]
            i += 1
            row = [-1] * k
            for sym in range(k):
                nxt = step(key, sym)
                if nxt is None:
                    needs_sink = True
                    continue
                if nxt not in ids:
                    ids[nxt] = len(order)
                    order.append(nxt)
                row[sym] = ids[nxt]
            rows.append(row)
        final = [ids[key] for key in order if is_final(key)]
        if needs_sink:
            sink = len(order)
            rows.append([sink] * k)
            rows = [[sink if q < 0 else q for q in row] for row in rows]
        return Dfa(alphabet, np.array(rows, dtype=np.int64).reshape(-1, k), 0, final)


AutomatonLike = Union[Nfa, Dfa]


def as_dfa(a: AutomatonLike) -> Dfa:
    return a if isinstance(a, Dfa) else determinize(a)


# -------------------------
# Subset construction
# -------------------------
def determinize(a: Nfa) -> Dfa:
    """Reachable-subset construction; an empty subset becomes the sink."""
    if isinstance(a, Dfa):
        return a
    a = remove_epsilon(a)
    k = a.alphabet.size
    start = frozenset(a.initial)
    ids: dict[frozenset[int], int] = {start: 0}
    order: list[frozenset[int]] = [start]
    rows: list[list[int]] = []
    i = 0
    while i < len(order):
        subset = order[i]
        i += 1
        moves: dict[int, set[int]] = {}
        for p in subset:
            for sym, targets in a.out[p].items():
                moves.setdefault(sym, set()).update(targets)
        row = [-1] * k
        for sym in sorted(moves):
            target = frozenset(moves[sym])
            if target not in ids:
                ids[target] = len(order)
                order.append(target)
            row[sym] = ids[target]
        rows.append(row)
    empty = frozenset()
    if any(q < 0 for row in rows for q in row):
        if empty not in ids:
            ids[empty] = len(order)
            order.append(empty)
            rows.append([ids[empty]] * k)
        sink = ids[empty]
        rows = [[sink if q < 0 else q for q in row] for row in rows]
    final = [ids[s] for s in order if s & a.final]
    return Dfa(a.alphabet, np.array(rows, dtype=np.int64).reshape(-1, k), 0, final)


def complement(a: AutomatonLike) -> Dfa:
    """Complement relative to the full alphabet's Σ*."""
    d = as_dfa(a)
    return Dfa(d.alphabet, d.delta, d.initial, set(range(d.num_states)) - d.final)


def product(d1: Dfa, d2: Dfa, mode: str = "and") -> Dfa:
    if d1.alphabet != d2.alphabet:
        raise alphabet_mismatch(d1.alphabet, d2.alphabet, "product")
    t1, t2 = d1.table, d2.table
    f1, f2 = d1.final, d2.final
    if mode == "and":
        fin = lambda k: k[0] in f1 and k[1] in f2
    elif mode == "or":
        fin = lambda k: k[0] in f1 or k[1] in f2
    elif mode == "diff":
        fin = lambda k: k[0] in f1 and k[1] not in f2
    else:
        raise ValueError(mode)
    return Dfa.explore(d1.alphabet, (d1.initial, d2.initial), lambda k, s: (t1[k[0]][s], t2[k[1]][s]), fin)


# -------------------------
# Minimisation
# -------------------------
def _canonical(d: Dfa) -> Dfa:
    """Reachable part renumbered breadth-first from the initial state in symbol order."""
    t = d.table
    ren = {d.initial: 0}
    order = [d.initial]
    i = 0
    while i < len(order):
        p = order[i]
        i += 1
        for q in t[p]:
            if q not in ren:
                ren[q] = len(order)
                order.append(q)
    rows = [[ren[q] for q in t[p]] for p in order]
    final = [ren[p] for p in order if p in d.final]
    return Dfa(d.alphabet, np.array(rows, dtype=np.int64).reshape(-1, d.alphabet.size), 0, final)


def minimize(a: AutomatonLike) -> Dfa:
    """Moore partition refinement over the numpy table, then canonical numbering."""
    d = _canonical(as_dfa(a))
    delta = d.delta
    classes = d.final_mask.astype(np.int64)
    count = len(np.unique(classes))
    while True:
        signature = np.column_stack([classes, classes[delta]]) if delta.size else classes.reshape(-1, 1)
        _, inverse = np.unique(signature, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        new_count = int(inverse.max()) + 1 if inverse.size else 0
        classes = inverse.astype(np.int64)
        if new_count == count:
            break
        count = new_count
    reps = np.zeros(count, dtype=np.int64)
    reps[classes[::-1]] = np.arange(len(classes))[::-1]
    quotient = classes[delta[reps]]
    final = {int(classes[q]) for q in d.final}
    return _canonical(Dfa(d.alphabet, quotient, int(classes[d.initial]), final))


def dead_states(d: Dfa) -> set[int]:
    """States from which no final state is reachable."""
    back: list[set[int]] = [set() for _ in range(d.num_states)]
    for p, row in enumerate(d.table):
        for q in row:
            back[q].add(p)
    live = set(d.final)
    stack = list(live)
    while stack:
        q = stack.pop()
        for p in back[q]:
            if p not in live:
                live.add(p)
                stack.append(p)
    return set(range(d.num_states)) - live


@dataclass(frozen=True)
class Sizes:
    complete: int
    trim: int


def sizes(a: AutomatonLike) -> Sizes:
    """Minimal complete and minimal trim state counts."""
    m = minimize(a)
    return Sizes(complete=m.num_states, trim=m.num_states - len(dead_states(m)))


# -------------------------
# Equivalence
# -------------------------
@dataclass(frozen=True)
class EquivalenceResult:
    equal: bool
    witness: Optional[Word] = None

    def __bool__(self) -> bool:
        return self.equal


def equivalent(a: AutomatonLike, b: AutomatonLike) -> EquivalenceResult:
    """Language equality; on failure a shortest, then lexicographically least, word in the symmetric difference."""
    if a.alphabet != b.alphabet:
        raise alphabet_mismatch(a.alphabet, b.alphabet, "equivalent")
    d1, d2 = as_dfa(a), as_dfa(b)
    t1, t2 = d1.table, d2.table
    k = d1.alphabet.size
    start = (d1.initial, d2.initial)
    parent: dict[tuple[int, int], Optional[tuple[tuple[int, int], int]]] = {start: None}
    queue = deque([start])
    while queue:
        key = queue.popleft()
        if (key[0] in d1.final) != (key[1] in d2.final):
            word: list[int] = []
            node = key
            while parent[node] is not None:
                node, sym = parent[node]
                word.append(sym)
            return EquivalenceResult(False, d1.alphabet.decode(reversed(word)))
        for sym in range(k):
            nxt = (t1[key[0]][sym], t2[key[1]][sym])
            if nxt not in parent:
                parent[nxt] = (key, sym)
                queue.append(nxt)
    return EquivalenceResult(True, None)
