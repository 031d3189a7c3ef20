from __future__ import annotations

from functools import cached_property
from typing import Optional

from ..automata.alphabet import Alphabet, PairAlphabet, WordLike
from ..automata.dfa import Dfa, determinize, equivalent, minimize
from ..automata.nfa import Nfa, remove_epsilon, trim
from ..automata.transducer import Transducer, convolve, is_length_preserving
from ..errors import UsageError


class Framework:
    """
    Regular abstraction framework: constraint alphabet gamma, constraint
    language (Nfa over gamma) and a complete deterministic interpretation
    over gamma_# x sigma_#. A constraint word A is satisfied by a
    configuration c iff interp accepts convolve(A, c).

    length_uniform: a separator for two configurations of the same length,
    if one exists, can be taken of that length. True for every built-in.
    """

    def __init__(
        self,
        gamma: Alphabet,
        sigma: Alphabet,
        constraints: Nfa,
        interp: Dfa,
        name: str = "framework",
        length_uniform: Optional[bool] = None,
    ):
        pa = interp.alphabet
        if not isinstance(pa, PairAlphabet) or pa.left != gamma or pa.right != sigma:
            raise UsageError(f"interpretation of '{name}' must run over '{gamma.name}' x '{sigma.name}'")
        if constraints.alphabet != gamma:
            raise UsageError(f"constraint language of '{name}' must be over '{gamma.name}'")
        self.gamma = gamma
        self.sigma = sigma
        self.constraints = constraints
        self.interp = interp
        self.name = name
        self._length_uniform = length_uniform

    def __repr__(self) -> str:
        return f"Framework({self.name!r}, |gamma|={self.gamma.size}, interp_states={self.interp.num_states})"

    @property
    def pairs(self) -> PairAlphabet:
        return self.interp.alphabet  # type: ignore[return-value]

    @cached_property
    def relation(self) -> Transducer:
        """The interpretation as a transducer over valid convolutions only."""
        return Transducer(self.gamma, self.sigma, self.interp.to_nfa()).valid()

    @cached_property
    def constraints_dfa(self) -> Dfa:
        return minimize(self.constraints)

    @cached_property
    def all_constraints(self) -> bool:
        """True when the constraint language is all of gamma*."""
        return bool(equivalent(self.constraints_dfa, Nfa.universal(self.gamma)))

    @cached_property
    def length_uniform(self) -> bool:
        if self._length_uniform is not None:
            return self._length_uniform
        return is_length_preserving(self.relation)

    def in_constraints(self, a: WordLike) -> bool:
        return self.constraints_dfa.accepts(self.gamma.parse_word(a))

    def satisfies(self, a: WordLike, c: WordLike) -> bool:
        """c in V(A), without checking that A is a constraint."""
        return self.interp.accepts(convolve(self.gamma.parse_word(a), self.sigma.parse_word(c)))

    def interpret(self, a: WordLike) -> Nfa:
        """NFA over sigma for V(A), by fixing the constraint track to A."""
        word = self.gamma.parse_word(a)
        if not self.in_constraints(word):
            raise UsageError(f"{' '.join(word) or 'eps'} is not a constraint of '{self.name}'")
        ids = self.gamma.encode(word)
        n = len(ids)
        pa = self.pairs
        t = self.interp.table
        sigma_size = self.sigma.size

        # phase 0: both tracks live, 1: constraint ended, 2: configuration ended
        def successors(key):
            i, q, phase = key
            if phase in (0, 2) and i < n:
                yield None, (i + 1, t[q][pa.pair(ids[i], pa.rpad)], 2)
            if phase == 2:
                return
            for s in range(sigma_size):
                if phase == 0 and i < n:
                    yield s, (i + 1, t[q][pa.pair(ids[i], s)], 0)
                elif i == n:
                    yield s, (i, t[q][pa.pair(pa.lpad, s)], 1)

        result = Nfa.explore(
            self.sigma, [(0, self.interp.initial, 0)], successors, lambda k: k[0] == n and k[1] in self.interp.final
        )
        return trim(result)

    @staticmethod
    def from_transducer(
        gamma: Alphabet,
        sigma: Alphabet,
        constraints: Nfa,
        interp: Nfa,
        name: str = "file",
        length_uniform: Optional[bool] = None,
    ) -> "Framework":
        """Framework from a user-supplied interpretation; it must be syntactically deterministic."""
        if interp.epsilon or len(interp.initial) != 1:
            raise UsageError(f"interpretation of '{name}' must have one initial state and no epsilon moves")
        for p, targets in enumerate(interp.out):
            for sym, qs in targets.items():
                if len(qs) > 1:
                    raise UsageError(
                        f"interpretation of '{name}' is not deterministic at state {p} on {interp.alphabet.symbols[sym]}"
                    )
        return Framework(gamma, sigma, remove_epsilon(constraints), determinize(interp), name, length_uniform)

