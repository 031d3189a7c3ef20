from helpers import AB, language, nfas, transducers
from hypothesis import given, settings

from rtsverify.automata import (
    Nfa,
    PairAlphabet,
    Transducer,
    complement_relation,
    compose,
    convolve,
    identity_on,
    image,
    inverse,
    is_length_preserving,
    preimage,
    project,
)
from rtsverify.automata.transducer import deconvolve, successors, valid_convolution_nfa
from rtsverify.verification.oracles import relation_pairs

MAX_LEN = 3


def test_convolve_pads_the_shorter_word():
    assert convolve(("a", "b"), ("a",)) == ("a/a", "b/_")
    assert convolve((), ("b",)) == ("_/b",)
    assert deconvolve(("a/a", "b/_")) == (("a", "b"), ("a",))


def test_valid_convolutions_are_pad_suffixed():
    pa = PairAlphabet(AB, AB)
    v = valid_convolution_nfa(pa)
    assert v.num_states == 3
    ok = Nfa.from_word(pa, ["a/b", "b/_", "a/_"])
    mixed = Nfa.from_word(pa, ["a/_", "_/b"])
    gap = Nfa.from_word(pa, ["a/_", "a/b"])
    assert language(ok, 3) <= language(v, 3)
    assert not language(mixed, 2) & language(v, 2)
    assert not language(gap, 2) & language(v, 2)


def test_from_pairs_relates_exactly_the_pairs():
    t = Transducer.from_pairs(AB, AB, [("a", "b b"), ("", "a")])
    assert relation_pairs(t, 2) == {(("a",), ("b", "b")), ((), ("a",))}
    assert not is_length_preserving(t)


class TestTokenPassing:
    def test_delta_moves_the_token(self, token_parsed):
        delta = token_parsed.delta
        assert delta.num_states == 3
        assert delta.relates("t n", "n t")
        assert successors(delta, "t n", 2) == {("n", "t")}
        assert successors(delta, "t", 1) == set()
        assert successors(delta, "n t n n", 4) == {("n", "n", "t", "n")}

    def test_image_of_initial_set(self, token_parsed):
        img = image(token_parsed.c_init, token_parsed.delta)
        assert language(img, 4) == {("n", "t"), ("n", "t", "n"), ("n", "t", "n", "n")}

    def test_length_preservation(self, token_parsed, growth_parsed):
        assert token_parsed.delta.length_preserving
        assert not growth_parsed.delta.valid().length_preserving
        assert growth_parsed.delta.relates("t n", "t")
        assert growth_parsed.delta.relates("t n", "t n n")


class TestRelationOperations:
    @settings(max_examples=60, deadline=None)
    @given(transducers(), transducers())
    def test_compose_joins_on_the_middle_track(self, t1, t2):
        r1, r2 = relation_pairs(t1, MAX_LEN), relation_pairs(t2, MAX_LEN)
        expected = {(u, w) for u, v in r1 for v2, w in r2 if v == v2}
        c = compose(t1, t2)
        assert relation_pairs(c, MAX_LEN) == expected
        assert c.num_states <= t1.num_states * t2.num_states

    @settings(max_examples=40, deadline=None)
    @given(transducers(length_preserving=False), transducers(length_preserving=False))
    def test_compose_general_is_sound(self, t1, t2):
        # middle words are bounded here, so only soundness of found pairs is checked exactly
        r1, r2 = relation_pairs(t1, MAX_LEN + 2), relation_pairs(t2, MAX_LEN + 2)
        bounded = {(u, w) for u, v in r1 for v2, w in r2 if v == v2 and len(u) <= MAX_LEN and len(w) <= MAX_LEN}
        c = compose(t1, t2)
        assert bounded <= relation_pairs(c, MAX_LEN)
        assert c.num_states <= (t1.num_states + 1) * (t2.num_states + 1)

    @given(transducers(length_preserving=False))
    def test_inverse_swaps_tracks(self, t):
        assert relation_pairs(inverse(t), MAX_LEN) == {(w, u) for u, w in relation_pairs(t, MAX_LEN)}

    @given(transducers())
    def test_project(self, t):
        pairs = relation_pairs(t, MAX_LEN)
        assert language(project(t, 1), MAX_LEN) == {u for u, _ in pairs}
        assert language(project(t, 2), MAX_LEN) == {w for _, w in pairs}

    @settings(deadline=None)
    @given(nfas(max_states=3), transducers())
    def test_image_and_preimage(self, c, t):
        pairs = relation_pairs(t, MAX_LEN)
        lang = language(c, MAX_LEN)
        assert language(image(c, t), MAX_LEN) == {w for u, w in pairs if u in lang}
        assert language(preimage(t, c), MAX_LEN) == {u for u, w in pairs if w in lang}

    @settings(deadline=None)
    @given(transducers(length_preserving=False))
    def test_complement_relation(self, t):
        every = {(u, w) for u in AB.words_up_to(MAX_LEN) for w in AB.words_up_to(MAX_LEN)}
        assert relation_pairs(complement_relation(t), MAX_LEN) == every - relation_pairs(t, MAX_LEN)

    @given(nfas(max_states=3))
    def test_identity_on(self, c):
        lang = language(c, MAX_LEN)
        assert relation_pairs(identity_on(c), MAX_LEN) == {(u, u) for u in lang}
