import pytest
from helpers import AB

from rtsverify.automata import Nfa, accepts, equivalent, intersect, is_empty, minimize
from rtsverify.errors import IterationLimitError, UnsupportedInstanceError
from rtsverify.frameworks import parse_framework
from rtsverify.verification.invariants import abstract_safety_direct, inductive_dfa, is_inductive, non_inductive_nfa
from rtsverify.verification.learner import (
    AbstractionInsufficient,
    NegativeCounterexample,
    ObservationTable,
    PositiveCounterexample,
    Teacher,
    learn,
    learn_and_check,
)
from rtsverify.verification.separability import brute_force_separate


class TestObservationTable:
    def test_learns_a_regular_language(self):
        # words over a, b ending in b
        target = Nfa(AB, 2, [(0, 0, 0), (0, 1, 0), (0, 1, 1)], {0}, {1})

        def member(w):
            return bool(w) and w[-1] == "b"

        table = ObservationTable(AB, member)
        for _ in range(10):
            table.make_closed_and_consistent()
            h = minimize(table.hypothesis())
            res = equivalent(h, target)
            if res:
                break
            table.add_counterexample(res.witness)
        assert equivalent(h, target)
        assert h.num_states == 2

    def test_closed_table_has_prefix_closed_rows(self):
        table = ObservationTable(AB, lambda w: len(w) % 2 == 0)
        table.make_closed_and_consistent()
        assert table.find_unclosed() is None
        assert table.find_inconsistency() is None
        assert all(s[:-1] in table.S for s in table.S if s)
        assert table.distinct_rows() == 2


class TestTeacher:
    def test_membership_is_ind_within_the_constraints(self, token):
        teacher = Teacher(token("views=1"))
        assert teacher.membership(("{t}", "{n}")) is False
        assert teacher.membership(("{n}", "{n}")) is is_inductive(token("views=1"), "{n} {n}")
        teacher.membership(("{n}", "{n}"))
        assert teacher.stats.membership_cached == 1

    def test_non_inductive_hypothesis_is_refuted(self, token_xor):
        teacher = Teacher(token_xor)
        answer = teacher.equivalence(minimize(Nfa.universal(token_xor.gamma)))
        assert isinstance(answer, NegativeCounterexample)
        assert not is_inductive(token_xor, answer.word)

    def test_empty_hypothesis_gets_a_separator(self, token_xor):
        teacher = Teacher(token_xor)
        answer = teacher.equivalence(minimize(Nfa.empty(token_xor.gamma)))
        assert isinstance(answer, PositiveCounterexample)
        fw = token_xor.framework
        assert is_inductive(token_xor, answer.word)
        assert fw.satisfies(answer.word, "t n")
        assert not fw.satisfies(answer.word, "t t")
        assert teacher.stats.separations == 1

    def test_full_ind_cannot_separate_for_disj(self, token_disj):
        teacher = Teacher(token_disj)
        answer = teacher.equivalence(inductive_dfa(token_disj))
        assert isinstance(answer, AbstractionInsufficient)
        assert answer.witness == (("t", "n", "n"), ("t", "n", "t"))


class TestLazy:
    def test_xor_is_proved_with_a_small_hypothesis(self, token_xor):
        outcome = learn(token_xor)
        verdict = outcome.verdict
        assert verdict.safe
        assert verdict.mode == "lazy"
        ind = inductive_dfa(token_xor)
        assert outcome.hypothesis.num_states <= ind.num_states
        # the certificate only holds inductive constraints and proves the property again
        assert is_empty(intersect(verdict.certificate.to_nfa(), non_inductive_nfa(token_xor, restrict=False))) is None
        assert abstract_safety_direct(token_xor, ind_lang=verdict.certificate).safe
        assert verdict.stats["equivalence"] >= 1
        assert set(verdict.sizes) == {"H", "PReach_H"}

    def test_disj_reports_an_unseparable_pair(self, token_disj):
        verdict = learn_and_check(token_disj)
        assert not verdict.safe
        c, c2 = verdict.witness
        assert len(c) == len(c2)
        assert accepts(token_disj.c_init, c)
        assert accepts(token_disj.c_unsafe, c2)
        assert brute_force_separate(token_disj, c, c2) is None

    def test_disj_no_token_is_safe(self, token):
        assert learn_and_check(token("disj=1", "no_token")).safe

    def test_equivalence_cap(self, token_xor):
        with pytest.raises(IterationLimitError, match="1 equivalence"):
            learn(token_xor, max_eq=1)

    def test_growth_needs_length_preservation(self, growth_parsed):
        inst = growth_parsed.instance(parse_framework("disj=1", growth_parsed.sigma))
        with pytest.raises(UnsupportedInstanceError, match="length-preserving"):
            learn(inst)


@pytest.mark.parametrize("spec", ["xor", "disj=1"])
def test_exact_mode_learns_ind(token, spec):
    inst = token(spec)
    outcome = learn(inst, exact=True)
    ind = inductive_dfa(inst)
    assert equivalent(outcome.hypothesis, ind)
    assert outcome.stats["equivalence"] <= ind.num_states
    assert outcome.verdict.mode == "exact"
    assert outcome.verdict.safe is (spec == "xor")
