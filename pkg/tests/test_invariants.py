import itertools
import re

import pytest

from rtsverify.automata import Nfa, accepts, equivalent, image, intersect, is_empty
from rtsverify.errors import UsageError
from rtsverify.frameworks import parse_framework
from rtsverify.hardness.generator import build_hardness_instance
from rtsverify.verification.instance import SafetyInstance, Verdict
from rtsverify.verification.invariants import (
    abstract_safety_direct,
    bound_non_inductive,
    inductive_dfa,
    is_inductive,
    non_inductive_nfa,
    not_preach_transducer,
    preach_transducer,
)
from rtsverify.verification.oracles import (
    brute_force_inductive,
    brute_force_not_preach,
    is_trivial,
    reach_unsafe,
    step_successors,
)

LETTER = {"{}": "e", "{t}": "t", "{n}": "n", "{t,n}": "b"}
DISJ_IND = re.compile(r"n+e*t*|n*e*t+")
DISJ_PREACH = re.compile(r"(tn|nn*t)[tn]*")


def one_token(sigma) -> Nfa:
    """n* t n*"""
    t, n = sigma.id("t"), sigma.id("n")
    return Nfa(sigma, 2, [(0, n, 0), (0, t, 1), (1, n, 1)], {0}, {1})


def reach_from_initial(inst, max_len):
    """(c, c') pairs with c initial and c' reachable from it, for |c| <= max_len."""
    pairs = set()
    for c in inst.sigma.words_up_to(max_len):
        if not accepts(inst.c_init, c):
            continue
        seen, frontier = {c}, [c]
        while frontier:
            frontier = [c2 for c1 in frontier for c2 in step_successors(inst, c1) if c2 not in seen]
            seen.update(frontier)
        pairs.update((c, c2) for c2 in seen)
    return pairs


@pytest.fixture(scope="module")
def xor_preach(token_xor):
    return preach_transducer(token_xor, inductive_dfa(token_xor))


@pytest.fixture(scope="module")
def disj_preach(token_disj):
    return preach_transducer(token_disj, inductive_dfa(token_disj))


# -------------------------
# Non-inductive constraints and Ind
# -------------------------
class TestInductiveConstraints:
    @pytest.mark.parametrize("spec", ["xor", "disj=1"])
    def test_membership_matches_brute_force(self, token, spec):
        inst = token(spec)
        ind = inductive_dfa(inst)
        for a in inst.gamma.words_up_to(5):
            expected = brute_force_inductive(inst, a)
            assert is_inductive(inst, a) is expected, a
            assert ind.accepts(a) is expected, a

    def test_xor_examples(self, token_xor):
        assert is_inductive(token_xor, "{t} {} {t,n} {n}")
        for k in range(1, 7):
            assert is_inductive(token_xor, ["{t}"] * k)
        assert not is_inductive(token_xor, "{t} {} {}")
        assert not accepts(non_inductive_nfa(token_xor), "{t} {t} {t}")

    @pytest.mark.parametrize("a", ["{t} {n}", "{t} {t}", "{t,n} {t,n}", "{n} {t} {n}"])
    def test_xor_ignores_longer_configurations(self, token_xor, a):
        assert is_inductive(token_xor, a) is brute_force_inductive(token_xor, a)

    def test_disj_nontrivial_inductive_pattern(self, token_disj):
        ind = inductive_dfa(token_disj)
        fw = token_disj.framework
        for length in range(1, 7):
            for a in fw.gamma.words(length):
                flat = "".join(LETTER[x] for x in a)
                expected = DISJ_IND.fullmatch(flat) is not None
                assert (ind.accepts(a) and not is_trivial(fw, a, length)) is expected, a

    def test_disj_examples(self, token_disj):
        assert is_inductive(token_disj, "{n} {n} {} {t}")
        assert is_inductive(token_disj, "{} {t} {}") is brute_force_inductive(token_disj, "{} {t} {}")

    def test_fused_and_literal_agree(self, token):
        for spec in ("xor", "disj=1"):
            inst = token(spec)
            assert equivalent(non_inductive_nfa(inst, fused=True), non_inductive_nfa(inst, fused=False))

    def test_ind_partitions_constraints(self, token):
        inst = token("views=1")
        fw = inst.framework
        ind = inductive_dfa(inst)
        nonind = non_inductive_nfa(inst)
        assert is_empty(intersect(ind.to_nfa(), nonind)) is None
        for a in fw.gamma.words_up_to(3):
            assert fw.in_constraints(a) == (ind.accepts(a) or accepts(nonind, a))

    def test_requires_a_constraint(self, token):
        with pytest.raises(UsageError, match="not a constraint"):
            is_inductive(token("views=1"), "{t} {n}")


@pytest.mark.parametrize("spec", ["xor", "disj=1", "disj=2", "views=1", "union(disj=1,xor)", "conv(xor,disj=1)"])
def test_non_inductive_size_bound(token, spec):
    inst = token(spec)
    assert non_inductive_nfa(inst).num_states <= bound_non_inductive(inst)
    assert non_inductive_nfa(inst, restrict=False).num_states <= bound_non_inductive(inst)


@pytest.mark.parametrize("spec", ["xor", "disj=1"])
def test_non_inductive_size_bound_with_growth(growth_parsed, spec):
    inst = growth_parsed.instance(parse_framework(spec, growth_parsed.sigma))
    assert non_inductive_nfa(inst, restrict=False).num_states <= bound_non_inductive(inst)


@pytest.mark.parametrize("fixture", ["write_once_tm", "accept_tm"])
def test_non_inductive_size_bound_on_hardness(request, fixture):
    inst = build_hardness_instance(request.getfixturevalue(fixture), "v2")
    assert non_inductive_nfa(inst, restrict=False).num_states <= bound_non_inductive(inst)


# -------------------------
# Potential reachability
# -------------------------
class TestPotentialReachability:
    def test_xor_reach_is_one_token(self, token_xor, xor_preach):
        reach = image(token_xor.c_init, xor_preach)
        assert equivalent(reach, one_token(token_xor.sigma))

    def test_disj_facts(self, token_disj, disj_preach):
        reach = image(token_disj.c_init, disj_preach)
        assert accepts(reach, "t n t")
        assert is_empty(intersect(reach, token_disj.select("no_token").c_unsafe)) is None
        for length in range(2, 9):
            got = {w for w in token_disj.sigma.words(length) if accepts(reach, w)}
            expected = {w for w in token_disj.sigma.words(length) if DISJ_PREACH.fullmatch("".join(w))}
            assert got == expected, length

    @pytest.mark.parametrize("spec", ["xor", "disj=1"])
    def test_not_preach_matches_brute_force(self, token, spec):
        inst = token(spec)
        ind = inductive_dfa(inst)
        separated = not_preach_transducer(inst, ind)
        for length in range(0, 5):
            for c, c2 in itertools.product(list(inst.sigma.words(length)), repeat=2):
                assert separated.relates(c, c2) is brute_force_not_preach(inst, ind, c, c2), (c, c2)

    def test_nothing_separates_without_constraints(self, token_xor):
        empty = not_preach_transducer(token_xor, Nfa.empty(token_xor.gamma))
        assert is_empty(empty.auto) is None

    def test_single_constraint_family_separates(self, token_xor):
        gamma = token_xor.gamma
        t = gamma.id("{t}")
        plus = Nfa(gamma, 2, [(0, t, 1), (1, t, 1)], {0}, {1})
        assert not_preach_transducer(token_xor, plus).relates("t n", "t t")

    @pytest.mark.parametrize("spec", ["xor", "disj=1"])
    def test_contains_reach(self, token, spec):
        inst = token(spec)
        preach = preach_transducer(inst, inductive_dfa(inst))
        for c, c2 in reach_from_initial(inst, 5):
            assert preach.relates(c, c2), (c, c2)

    def test_reflexive_and_transitive(self, token_disj, disj_preach):
        sigma = token_disj.sigma
        for c in sigma.words_up_to(4):
            assert disj_preach.relates(c, c)
        words = list(sigma.words(3))
        related = {(u, w) for u in words for w in words if disj_preach.relates(u, w)}
        for (u, v), (v2, w) in itertools.product(related, repeat=2):
            if v == v2:
                assert (u, w) in related

    def test_fewer_constraints_relate_more(self, token_xor, xor_preach):
        gamma = token_xor.gamma
        t = gamma.id("{t}")
        smaller = Nfa(gamma, 2, [(0, t, 1), (1, t, 1)], {0}, {1})
        coarse = preach_transducer(token_xor, smaller)
        for length in range(0, 4):
            for c, c2 in itertools.product(list(token_xor.sigma.words(length)), repeat=2):
                if xor_preach.relates(c, c2):
                    assert coarse.relates(c, c2)


# -------------------------
# Direct safety decision
# -------------------------
class TestDirectSafety:
    def test_xor_proves_one_token(self, token_xor):
        verdict = abstract_safety_direct(token_xor)
        assert verdict.safe
        assert verdict.kind == "Safe"
        assert set(verdict.sizes) == {"Ind", "PReach"}
        assert equivalent(verdict.certificate, inductive_dfa(token_xor))

    def test_disj_cannot_prove_one_token(self, token_disj, disj_preach):
        verdict = abstract_safety_direct(token_disj)
        assert not verdict.safe
        c, c2 = verdict.witness
        assert (c, c2) == (("t", "n", "n"), ("t", "n", "t"))
        assert accepts(token_disj.c_init, c)
        assert accepts(token_disj.c_unsafe, c2)
        assert disj_preach.relates(c, c2)

    def test_disj_proves_a_token_exists(self, token):
        verdict = abstract_safety_direct(token("disj=1", "no_token"))
        assert verdict.safe
        assert verdict.property == "no_token"

    def test_verdict_kind_and_dump(self):
        unsafe = Verdict(safe=False, property="p")
        assert unsafe.kind == "NotAbstractSafe"
        assert Verdict(safe=True).kind == "Safe"
        assert unsafe.model_dump()["property"] == "p"
        assert "certificate" not in unsafe.model_dump()

    def test_given_constraints(self, token_xor):
        verdict = abstract_safety_direct(token_xor, inductive_dfa(token_xor))
        assert verdict.safe
        assert set(verdict.sizes) == {"H", "PReach_H"}

    @pytest.mark.parametrize("spec", ["xor", "disj=1", "views=1"])
    def test_reachable_bad_state_is_never_safe(self, token_parsed, spec):
        sigma = token_parsed.sigma
        t, n = sigma.id("t"), sigma.id("n")
        # token at the right end
        at_end = Nfa(sigma, 2, [(0, t, 0), (0, n, 0), (0, t, 1)], {0}, {1})
        inst = SafetyInstance.build(
            sigma,
            token_parsed.delta,
            token_parsed.c_init,
            {"at_end": at_end},
            parse_framework(spec, sigma),
            name="token_at_end",
        )
        assert reach_unsafe(inst, 5, 10) is not None
        assert not abstract_safety_direct(inst).safe
