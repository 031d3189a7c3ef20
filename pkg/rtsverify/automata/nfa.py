from __future__ import annotations

from collections import deque
from functools import cached_property
from typing import Callable, Hashable, Iterable, Optional, Sequence

from ..errors import UsageError, alphabet_mismatch
from .alphabet import Alphabet, Word, WordLike

Transition = tuple[int, int, int]


class Nfa:
    """
    Immutable NFA over an indexed alphabet. Transitions are (state, symbol-id,
    state) triples; epsilon moves are (state, state) pairs and are removed by
    remove_epsilon() before any Boolean operation.
    """

    def __init__(
        self,
        alphabet: Alphabet,
        num_states: int,
        transitions: Iterable[Transition] = (),
        initial: Iterable[int] = (),
        final: Iterable[int] = (),
        epsilon: Iterable[tuple[int, int]] = (),
    ):
        self.alphabet = alphabet
        self.num_states = int(num_states)
        self.transitions: frozenset[Transition] = frozenset(transitions)
        self.epsilon: frozenset[tuple[int, int]] = frozenset(epsilon)
        self.initial: frozenset[int] = frozenset(initial)
        self.final: frozenset[int] = frozenset(final)

        k = alphabet.size
        for p, a, q in self.transitions:
            if not (0 <= p < self.num_states and 0 <= q < self.num_states):
                raise UsageError(f"transition ({p}, {a}, {q}) uses a state outside 0..{self.num_states - 1}")
            if not 0 <= a < k:
                raise UsageError(f"transition ({p}, {a}, {q}) uses a symbol id outside alphabet '{alphabet.name}'")
        for p, q in self.epsilon:
            if not (0 <= p < self.num_states and 0 <= q < self.num_states):
                raise UsageError(f"epsilon move ({p}, {q}) uses a state outside 0..{self.num_states - 1}")
        for q in self.initial | self.final:
            if not 0 <= q < self.num_states:
                raise UsageError(f"state {q} outside 0..{self.num_states - 1}")

    # -------------------------
    # Indexes
    # -------------------------
    @cached_property
    def out(self) -> list[dict[int, tuple[int, ...]]]:
        tmp: list[dict[int, set[int]]] = [dict() for _ in range(self.num_states)]
        for p, a, q in self.transitions:
            tmp[p].setdefault(a, set()).add(q)
        return [{a: tuple(sorted(ts)) for a, ts in sorted(d.items())} for d in tmp]

    @cached_property
    def eps_out(self) -> list[tuple[int, ...]]:
        tmp: list[set[int]] = [set() for _ in range(self.num_states)]
        for p, q in self.epsilon:
            tmp[p].add(q)
        return [tuple(sorted(s)) for s in tmp]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Nfa)
            and self.alphabet == other.alphabet
            and self.num_states == other.num_states
            and self.transitions == other.transitions
            and self.epsilon == other.epsilon
            and self.initial == other.initial
            and self.final == other.final
        )

    def __hash__(self) -> int:
        return hash((self.num_states, self.transitions, self.initial, self.final))

    def __repr__(self) -> str:
        return (
            f"Nfa(states={self.num_states}, transitions={len(self.transitions)}, "
            f"epsilon={len(self.epsilon)}, alphabet={self.alphabet.name!r})"
        )

    # -------------------------
    # Builders
    # -------------------------
    @staticmethod
    def empty(alphabet: Alphabet) -> "Nfa":
        return Nfa(alphabet, 1, (), {0}, ())

    @staticmethod
    def universal(alphabet: Alphabet) -> "Nfa":
        return Nfa(alphabet, 1, ((0, a, 0) for a in range(alphabet.size)), {0}, {0})

    @staticmethod
    def from_word(alphabet: Alphabet, word: WordLike) -> "Nfa":
        ids = alphabet.encode(word)
        return Nfa(alphabet, len(ids) + 1, ((i, a, i + 1) for i, a in enumerate(ids)), {0}, {len(ids)})

    @staticmethod
    def from_words(alphabet: Alphabet, words: Iterable[WordLike]) -> "Nfa":
        """Trie automaton for a finite set of words."""
        trie: dict[tuple[int, ...], int] = {(): 0}
        trans: list[Transition] = []
        final: set[int] = set()
        for w in words:
            node: tuple[int, ...] = ()
            for a in alphabet.encode(w):
                nxt = node + (a,)
                if nxt not in trie:
                    trie[nxt] = len(trie)
                    trans.append((trie[node], a, trie[nxt]))
                node = nxt
            final.add(trie[node])
        return Nfa(alphabet, len(trie), trans, {0}, final)

    @staticmethod
    def explore(
        alphabet: Alphabet,
        initial: Iterable[Hashable],
        successors: Callable[[Hashable], Iterable[tuple[Optional[int], Hashable]]],
        is_final: Callable[[Hashable], bool],
    ) -> "Nfa":
        """
        Materialise an NFA from an implicit state space. successors(key)
        yields (symbol-id, key) pairs, symbol None meaning an epsilon move.
        States are numbered in breadth-first discovery order.
        """
        ids: dict[Hashable, int] = {}
        queue: deque = deque()
        for key in initial:
            if key not in ids:
                ids[key] = len(ids)
                queue.append(key)
        init = set(ids.values())
        trans: list[Transition] = []
        eps: list[tuple[int, int]] = []
        final: set[int] = set()
        while queue:
            key = queue.popleft()
            p = ids[key]
            if is_final(key):
                final.add(p)
            for sym, nxt in successors(key):
                if nxt not in ids:
                    ids[nxt] = len(ids)
                    queue.append(nxt)
                if sym is None:
                    eps.append((p, ids[nxt]))
                else:
                    trans.append((p, sym, ids[nxt]))
        return Nfa(alphabet, len(ids), trans, init, final, eps)


# -------------------------
# Structural helpers
# -------------------------
def epsilon_closure(a: Nfa, states: Iterable[int]) -> frozenset[int]:
    seen = set(states)
    stack = list(seen)
    while stack:
        p = stack.pop()
        for q in a.eps_out[p]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return frozenset(seen)


def remove_epsilon(a: Nfa) -> Nfa:
    """Same states, no epsilon moves: p -x-> r whenever p -eps*-> q -x-> r."""
    if not a.epsilon:
        return a
    trans: set[Transition] = set()
    final: set[int] = set()
    for p in range(a.num_states):
        cl = epsilon_closure(a, (p,))
        if cl & a.final:
            final.add(p)
        for q in cl:
            for sym, targets in a.out[q].items():
                for r in targets:
                    trans.add((p, sym, r))
    return Nfa(a.alphabet, a.num_states, trans, a.initial, final)


def trim(a: Nfa) -> Nfa:
    """Keep states both reachable and co-reachable, renumbered breadth-first."""
    a = remove_epsilon(a)
    reach = set(a.initial)
    queue = deque(sorted(a.initial))
    while queue:
        p = queue.popleft()
        for targets in a.out[p].values():
            for q in targets:
                if q not in reach:
                    reach.add(q)
                    queue.append(q)
    back: list[list[int]] = [[] for _ in range(a.num_states)]
    for p, _, q in a.transitions:
        back[q].append(p)
    co = set(a.final)
    stack = list(co)
    while stack:
        q = stack.pop()
        for p in back[q]:
            if p not in co:
                co.add(p)
                stack.append(p)
    keep = reach & co
    order: list[int] = []
    seen: set[int] = set()
    queue = deque(q for q in sorted(a.initial) if q in keep)
    seen.update(queue)
    while queue:
        p = queue.popleft()
        order.append(p)
        for targets in a.out[p].values():
            for q in targets:
                if q in keep and q not in seen:
                    seen.add(q)
                    queue.append(q)
    ren = {q: i for i, q in enumerate(order)}
    trans = [(ren[p], x, ren[q]) for p, x, q in a.transitions if p in ren and q in ren]
    return Nfa(
        a.alphabet,
        len(order),
        trans,
        (ren[q] for q in a.initial if q in ren),
        (ren[q] for q in a.final if q in ren),
    )


def _check_same(a: Nfa, b: Nfa, what: str) -> None:
    if a.alphabet != b.alphabet:
        raise alphabet_mismatch(a.alphabet, b.alphabet, what)


# -------------------------
# Boolean operations
# -------------------------
def intersect(a: Nfa, b: Nfa) -> Nfa:
    """Reachable part of the product automaton."""
    _check_same(a, b, "intersect")
    a, b = remove_epsilon(a), remove_epsilon(b)
    out_a, out_b = a.out, b.out

    def successors(key):
        p, q = key
        da, db = out_a[p], out_b[q]
        if len(db) < len(da):
            syms = [s for s in db if s in da]
        else:
            syms = [s for s in da if s in db]
        for sym in sorted(syms):
            for r in da[sym]:
                for s in db[sym]:
                    yield sym, (r, s)

    initial = [(p, q) for p in sorted(a.initial) for q in sorted(b.initial)]
    return Nfa.explore(a.alphabet, initial, successors, lambda k: k[0] in a.final and k[1] in b.final)


def union(a: Nfa, b: Nfa) -> Nfa:
    """Disjoint sum; at most n1 + n2 states."""
    _check_same(a, b, "union")
    n = a.num_states
    return Nfa(
        a.alphabet,
        n + b.num_states,
        list(a.transitions) + [(p + n, x, q + n) for p, x, q in b.transitions],
        list(a.initial) + [q + n for q in b.initial],
        list(a.final) + [q + n for q in b.final],
        list(a.epsilon) + [(p + n, q + n) for p, q in b.epsilon],
    )


def concat(a: Nfa, b: Nfa) -> Nfa:
    _check_same(a, b, "concat")
    n = a.num_states
    eps = list(a.epsilon) + [(p + n, q + n) for p, q in b.epsilon]
    eps += [(f, q + n) for f in a.final for q in b.initial]
    return Nfa(
        a.alphabet,
        n + b.num_states,
        list(a.transitions) + [(p + n, x, q + n) for p, x, q in b.transitions],
        a.initial,
        [q + n for q in b.final],
        eps,
    )


def star(a: Nfa) -> Nfa:
    """Kleene star with one fresh initial-and-final state."""
    n = a.num_states
    eps = list(a.epsilon) + [(n, q) for q in a.initial] + [(f, n) for f in a.final]
    return Nfa(a.alphabet, n + 1, a.transitions, {n}, {n}, eps)


# -------------------------
# Queries
# -------------------------
def accepts_ids(a: Nfa, ids: Sequence[int]) -> bool:
    current = epsilon_closure(a, a.initial)
    for sym in ids:
        nxt: set[int] = set()
        for p in current:
            nxt.update(a.out[p].get(sym, ()))
        if not nxt:
            return False
        current = epsilon_closure(a, nxt)
    return bool(current & a.final)


def accepts(a, word: WordLike) -> bool:
    """True iff some run of `a` on `word` ends in a final state."""
    from .dfa import Dfa

    if isinstance(a, Dfa):
        return a.accepts(word)
    return accepts_ids(a, a.alphabet.encode(word))


def shortest_ids(a: Nfa) -> Optional[tuple[int, ...]]:
    """Shortest accepted word, ties broken lexicographically by symbol id."""
    a = remove_epsilon(a)
    # groups of states reached by the same word, in shortlex order of the words
    seen = set(a.initial)
    queue: deque[tuple[tuple[int, ...], frozenset[int]]] = deque([((), frozenset(a.initial))])
    while queue:
        word, states = queue.popleft()
        if states & a.final:
            return word
        moves: dict[int, set[int]] = {}
        for p in states:
            for sym, targets in a.out[p].items():
                moves.setdefault(sym, set()).update(targets)
        for sym in sorted(moves):
            fresh = frozenset(moves[sym] - seen)
            if fresh:
                seen.update(fresh)
                queue.append((word + (sym,), fresh))
    return None


def is_empty(a) -> Optional[Word]:
    """None iff the language is empty, otherwise a shortest accepted word."""
    a = as_nfa(a)
    ids = shortest_ids(a)
    return None if ids is None else a.alphabet.decode(ids)


def words_up_to(a, max_len: int, length: Optional[int] = None) -> set[Word]:
    """Accepted words of length <= max_len (or exactly `length`), by subset simulation."""
    a = remove_epsilon(as_nfa(a))
    out: set[Word] = set()
    layer: list[tuple[tuple[int, ...], frozenset[int]]] = [((), frozenset(a.initial))]
    top = max_len if length is None else length
    for n in range(top + 1):
        for ids, states in layer:
            if states & a.final and (length is None or n == length):
                out.add(a.alphabet.decode(ids))
        if n == top:
            break
        nxt_layer = []
        for ids, states in layer:
            moves: dict[int, set[int]] = {}
            for p in states:
                for sym, targets in a.out[p].items():
                    moves.setdefault(sym, set()).update(targets)
            for sym in sorted(moves):
                nxt_layer.append((ids + (sym,), frozenset(moves[sym])))
        layer = nxt_layer
    return out


def as_nfa(x) -> Nfa:
    from .dfa import Dfa

    if isinstance(x, Dfa):
        return x.to_nfa()
    return x
