"""
Lazy pipeline: an L* learner for the inductive constraints, driven by a
teacher that stops as soon as the current hypothesis already proves the
property.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from ..automata.alphabet import Alphabet, Word
from ..automata.dfa import Dfa, complement, equivalent, minimize
from ..automata.nfa import Nfa, intersect, is_empty, union
from ..errors import IterationLimitError, RtsError
from .instance import SafetyInstance, Verdict
from .invariants import abstract_safety_direct, inductive_dfa, is_inductive, non_inductive_nfa
from .separability import separate

logger = logging.getLogger(__name__)

DEFAULT_MAX_EQ = 10_000


# -------------------------
# Observation table
# -------------------------
class ObservationTable:
    """
    Rows are indexed by S and S.gamma, columns by E. S is prefix-closed and
    E suffix-closed; both start as {eps}.
    """

    def __init__(self, gamma: Alphabet, member: Callable[[Word], bool]):
        self.gamma = gamma
        self.member = member
        self.S: list[Word] = [()]
        self.E: list[Word] = [()]

    def row(self, u: Word) -> tuple[bool, ...]:
        return tuple(self.member(u + e) for e in self.E)

    def distinct_rows(self) -> int:
        return len({self.row(s) for s in self.S})

    def _extensions(self):
        for s in self.S:
            for a in self.gamma.symbols:
                yield s + (a,)

    def find_unclosed(self) -> Optional[Word]:
        rows = {self.row(s) for s in self.S}
        for t in self._extensions():
            if self.row(t) not in rows:
                return t
        return None

    def find_inconsistency(self) -> Optional[Word]:
        """A new suffix a.e separating two S-rows that agree now."""
        by_row: dict[tuple[bool, ...], Word] = {}
        for s in self.S:
            r = self.row(s)
            if r not in by_row:
                by_row[r] = s
                continue
            s0 = by_row[r]
            for a in self.gamma.symbols:
                for e in self.E:
                    if self.member(s0 + (a,) + e) != self.member(s + (a,) + e):
                        return (a,) + e
        return None

    def make_closed_and_consistent(self) -> None:
        while True:
            t = self.find_unclosed()
            if t is not None:
                self.S.append(t)
                continue
            e = self.find_inconsistency()
            if e is not None:
                self.E.append(e)
                continue
            return

    def add_counterexample(self, word: Word) -> None:
        for i in range(len(word) + 1):
            prefix = word[:i]
            if prefix not in self.S:
                self.S.append(prefix)

    def hypothesis(self) -> Dfa:
        reps: dict[tuple[bool, ...], Word] = {}
        for s in self.S:
            reps.setdefault(self.row(s), s)
        symbols = self.gamma.symbols
        return Dfa.explore(
            self.gamma,
            self.row(()),
            lambda r, a: self.row(reps[r] + (symbols[a],)),
            lambda r: r[0],
        )


# -------------------------
# Teacher answers
# -------------------------
@dataclass(frozen=True)
class NegativeCounterexample:
    word: Word


@dataclass(frozen=True)
class PositiveCounterexample:
    word: Word


@dataclass(frozen=True)
class EarlySafe:
    verdict: Verdict


@dataclass(frozen=True)
class AbstractionInsufficient:
    witness: tuple[Word, Word]
    verdict: Verdict


@dataclass(frozen=True)
class ExactMatch:
    pass


EqAnswer = Union[NegativeCounterexample, PositiveCounterexample, EarlySafe, AbstractionInsufficient, ExactMatch]


@dataclass
class QueryStats:
    membership: int = 0
    membership_cached: int = 0
    equivalence: int = 0
    negative: int = 0
    positive: int = 0
    separations: int = 0

    def as_dict(self) -> dict[str, int]:
        return dict(self.__dict__)


class Teacher:
    """
    Membership: is A inductive (false outside the constraint language).
    Equivalence: (1) H must not contain non-inductive words, (2) H proving
    the property ends the run, (3) otherwise the witness pair is separated
    by an inductive constraint missing from H, or it cannot be separated.
    With exact=True, (2) and (3) are replaced by comparison with Ind.
    """

    def __init__(
        self,
        inst: SafetyInstance,
        exact: bool = False,
        dimacs_dir: Optional[str] = None,
        run_id: str = "-",
    ):
        self.inst = inst
        self.exact = exact
        self.dimacs_dir = dimacs_dir
        self.run_id = run_id
        self.stats = QueryStats()
        self._memo: dict[Word, bool] = {}
        self._bad: Optional[Nfa] = None

    def membership(self, word: Word) -> bool:
        if word in self._memo:
            self.stats.membership_cached += 1
            return self._memo[word]
        self.stats.membership += 1
        fw = self.inst.framework
        answer = fw.in_constraints(word) and is_inductive(self.inst, word)
        self._memo[word] = answer
        logger.debug("[%s] membership %s -> %s", self.run_id, " ".join(word) or "eps", answer)
        return answer

    @property
    def bad_constraints(self) -> Nfa:
        """Words that are not inductive constraints: Ind-bar plus everything outside the constraint language."""
        if self._bad is None:
            nonind = non_inductive_nfa(self.inst, restrict=False)
            fw = self.inst.framework
            if fw.all_constraints:
                self._bad = nonind
            else:
                self._bad = union(nonind, complement(fw.constraints_dfa).to_nfa())
        return self._bad

    def equivalence(self, h: Dfa) -> EqAnswer:
        self.stats.equivalence += 1
        bad = is_empty(intersect(h.to_nfa(), self.bad_constraints))
        if bad is not None:
            self.stats.negative += 1
            logger.debug("[%s] equivalence: negative %s", self.run_id, " ".join(bad) or "eps")
            return NegativeCounterexample(bad)

        if self.exact:
            res = equivalent(h, inductive_dfa(self.inst))
            if res:
                return ExactMatch()
            self.stats.positive += 1
            logger.debug("[%s] equivalence: positive %s", self.run_id, " ".join(res.witness) or "eps")
            return PositiveCounterexample(res.witness)

        verdict = abstract_safety_direct(self.inst, ind_lang=h)
        if verdict.safe:
            logger.debug("[%s] equivalence: hypothesis proves %s", self.run_id, self.inst.prop)
            return EarlySafe(verdict)
        c, c2 = verdict.witness
        self.stats.separations += 1
        a = separate(self.inst, c, c2, dimacs_dir=self.dimacs_dir)
        if a is None:
            logger.debug("[%s] equivalence: %s / %s cannot be separated", self.run_id, " ".join(c), " ".join(c2))
            return AbstractionInsufficient((c, c2), verdict)
        if h.accepts(a):
            raise RtsError(f"separator {' '.join(a)} is already in the hypothesis")
        self.stats.positive += 1
        logger.debug("[%s] equivalence: positive %s separates %s / %s", self.run_id, " ".join(a), " ".join(c), " ".join(c2))
        return PositiveCounterexample(a)


# -------------------------
# Driver
# -------------------------
@dataclass
class LearnOutcome:
    verdict: Verdict
    hypothesis: Dfa
    stats: dict = field(default_factory=dict)


def learn(
    inst: SafetyInstance,
    exact: bool = False,
    max_eq: int = DEFAULT_MAX_EQ,
    dimacs_dir: Optional[str] = None,
    run_id: str = "-",
) -> LearnOutcome:
    t0 = time.perf_counter()
    teacher = Teacher(inst, exact=exact, dimacs_dir=dimacs_dir, run_id=run_id)
    table = ObservationTable(inst.gamma, teacher.membership)
    while True:
        table.make_closed_and_consistent()
        h = minimize(table.hypothesis())
        if teacher.stats.equivalence >= max_eq:
            raise IterationLimitError(f"no answer after {max_eq} equivalence queries (--max-eq)")
        answer = teacher.equivalence(h)
        if isinstance(answer, (NegativeCounterexample, PositiveCounterexample)):
            before = table.distinct_rows()
            table.add_counterexample(answer.word)
            table.make_closed_and_consistent()
            logger.debug("[%s] table rows %d -> %d", run_id, before, table.distinct_rows())
            continue

        stats = teacher.stats.as_dict()
        stats.update(prefixes=len(table.S), suffixes=len(table.E), wall_s=round(time.perf_counter() - t0, 3))
        if isinstance(answer, ExactMatch):
            verdict = abstract_safety_direct(inst, ind_lang=h)
        else:
            verdict = answer.verdict
        verdict = verdict.model_copy(update={"mode": "exact" if exact else "lazy", "stats": {**verdict.stats, **stats}})
        logger.info(
            "[%s] lazy: %s %s for %s after %d equivalence queries",
            run_id,
            inst.name,
            verdict.kind,
            inst.prop,
            teacher.stats.equivalence,
        )
        return LearnOutcome(verdict=verdict, hypothesis=h, stats=stats)


def learn_and_check(
    inst: SafetyInstance,
    exact: bool = False,
    max_eq: int = DEFAULT_MAX_EQ,
    dimacs_dir: Optional[str] = None,
    run_id: str = "-",
) -> Verdict:
    return learn(inst, exact=exact, max_eq=max_eq, dimacs_dir=dimacs_dir, run_id=run_id).verdict
