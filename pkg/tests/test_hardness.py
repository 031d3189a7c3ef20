import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rtsverify.automata import accepts
from rtsverify.automata.transducer import successors
from rtsverify.errors import ConfigurationError, ParseError, UsageError
from rtsverify.hardness.gadget import (
    GadgetConfiguration,
    initial_configuration,
    is_unsafe,
    oracle_successors,
    reach_unsafe_oracle,
    sample_run,
    semantics_oracle_step,
)
from rtsverify.hardness.generator import (
    build_hardness_instance,
    constraint_a1_single,
    constraint_a1_window,
    constraint_a2,
    pair_constraint,
    separator_candidate,
    v1_framework,
    v2_framework,
)
from rtsverify.hardness.tm import BLANK, SEP, first_primes, parse_tm
from rtsverify.verification.invariants import is_inductive

ACCEPT = """
state q0 initial
state qf final
tape B
trans q0 B -> qf B R
"""


@pytest.fixture(scope="module")
def write_once_inst(write_once_tm):
    return build_hardness_instance(write_once_tm, "v2")


# -------------------------
# Machines
# -------------------------
class TestMachineFiles:
    def test_bundled_machines(self, write_once_tm, accept_tm):
        assert write_once_tm.states == ("q0", "q1", "qf")
        assert write_once_tm.tape == ("B", "x")
        assert write_once_tm.transitions[("q0", "B")] == ("q1", "x", "R")
        assert accept_tm.accepts()
        assert not write_once_tm.accepts()

    def test_prime_constants(self, write_once_tm):
        assert first_primes(4) == (2, 3, 5, 7)
        assert write_once_tm.primes == (2, 3)
        assert write_once_tm.s == 5
        assert write_once_tm.m == 6
        assert write_once_tm.cells == (SEP, "q0", "q1", "qf", "B", "x", BLANK)

    @pytest.mark.parametrize(
        "text, match",
        [
            (ACCEPT.replace(" R\n", " X\n"), "move must be"),
            (ACCEPT + "foo bar\n", "unknown keyword"),
            (ACCEPT.replace("state qf final", "state qf"), "one initial and one final"),
            (ACCEPT + "trans qf B -> q0 B R\n", "cannot have transitions"),
            (ACCEPT + "trans q0 B -> q0 B R\n", "deterministic"),
            (ACCEPT + "trans q0 y -> q0 B R\n", "undeclared tape symbol"),
            (ACCEPT + "state q0\n", "declared twice"),
            (ACCEPT + "size x\n", "size"),
        ],
    )
    def test_parse_errors(self, text, match):
        with pytest.raises(ParseError, match=match):
            parse_tm(text)

    def test_parse_error_has_line(self):
        with pytest.raises(ParseError) as info:
            parse_tm(ACCEPT + "foo\n")
        assert info.value.line == 6

    @pytest.mark.parametrize(
        "text, match",
        [(ACCEPT + "size 3\n", "machine size 3"), (ACCEPT.replace("tape B", "tape B a/b"), "invalid machine symbol")],
    )
    def test_configuration_errors(self, text, match):
        with pytest.raises(ConfigurationError, match=match):
            parse_tm(text)


class TestLocalSuccessor:
    @pytest.mark.parametrize("fixture", ["write_once_tm", "accept_tm"])
    def test_encoded_run_matches_machine_steps(self, request, fixture):
        tm = request.getfixturevalue(fixture)
        confs = tm.run(2)
        assert tm.alpha(3 * tm.m) == sum(confs, ())

    def test_windows(self, write_once_tm):
        tm = write_once_tm
        assert tm.delta((SEP, "q0", "B", "B")) == "x"
        assert tm.delta(("q0", "B", "B", "B")) == "q1"
        assert tm.delta(("B", "B", SEP, "x")) == "B"
        assert tm.delta(("x", "q1", "B", "B")) == "q1"
        assert tm.delta(("B", SEP, "x", "q1")) == SEP
        assert tm.delta((SEP, "q0", BLANK, "B")) == BLANK

    def test_table_covers_every_window(self, write_once_tm):
        assert len(write_once_tm.delta_table) == len(write_once_tm.cells) ** 4


# -------------------------
# Marking system
# -------------------------
class TestGadget:
    def test_words_read_back(self, write_once_tm):
        u = initial_configuration(write_once_tm, 6)
        assert u.word()[:6] == ("0", "0", "0", "0", "0", "#^0")
        assert GadgetConfiguration.from_word(write_once_tm, u.word()) == u
        with pytest.raises(UsageError):
            GadgetConfiguration.from_word(write_once_tm, ("0", "1"))

    def test_oracle_step_kinds(self, write_once_tm):
        u = initial_configuration(write_once_tm, 8)
        v = semantics_oracle_step(write_once_tm, u, "mark", 1)
        assert v.prime == (0, 1, 0, 0, 0)
        assert v.marks == (1, 0, 1, 0, 1, 0, 1, 0)
        assert semantics_oracle_step(write_once_tm, u, "init") is None
        with pytest.raises(UsageError, match="unknown transition kind"):
            semantics_oracle_step(write_once_tm, u, "jump")

    def test_sample_run_writes_the_encoded_run(self, write_once_tm):
        tm = write_once_tm
        steps = sample_run(tm, 10)
        assert len(steps) == 1 + 8 * 3
        assert [label for label, _ in steps[:4]] == ["start", "mark(2,0)", "mark(3,2)", "init"]
        assert [label for label, _ in steps[16:19]] == ["mark(2,1)", "mark(3,1)", "write"]
        last = steps[-1][1]
        assert last.cells == tm.alpha(10)
        assert last.cells == (SEP, "q0", "B", "B", "B", "B", SEP, "x", "q1", "B")
        for label, u in steps:
            if label in ("init", "write"):
                assert not any(u.prime)
                assert not any(u.marks)

    def test_sample_run_replays_through_the_transducers(self, write_once_tm, write_once_inst):
        delta = write_once_inst.delta
        steps = sample_run(write_once_tm, 10)
        for (_, u), (label, v) in zip(steps, steps[1:]):
            assert delta.relates(u.word(), v.word()), label

    def test_transducers_agree_with_the_oracle(self, write_once_tm, write_once_inst):
        tm = write_once_tm
        configs = [u for _, u in sample_run(tm, 8)]
        for u in configs:
            expected = {v.word() for v in oracle_successors(tm, u)}
            assert successors(write_once_inst.delta, u.word(), len(u)) == expected

    def test_sample_run_in_any_target_order(self, write_once_tm, write_once_inst):
        tm = write_once_tm
        steps = sample_run(tm, 10, targets=[3, 6, 2, 4, 5, 8, 7])
        assert len(steps) == 1 + 7 * 3
        labels = [label for label, _ in steps]
        assert labels[1:4] == ["mark(2,1)", "mark(3,0)", "init"]
        assert labels[16:] == ["mark(2,0)", "mark(3,2)", "write", "mark(2,1)", "mark(3,1)", "write"]
        assert steps[3][1].cells == (SEP, "q0", BLANK, "B") + (BLANK,) * 6
        assert steps[18][1].cells == (SEP, "q0", "B", "B", "B", "B", SEP, BLANK, "q1", BLANK)
        last = steps[-1][1]
        assert last.cells == (SEP, "q0", "B", "B", "B", "B", SEP, "x", "q1", BLANK)
        assert last.cells[:9] == tm.alpha(10)[:9]
        for (_, u), (label, v) in zip(steps, steps[1:]):
            assert write_once_inst.delta.relates(u.word(), v.word()), label

    @settings(max_examples=60, deadline=None)
    @given(data=st.data())
    def test_transducers_agree_with_the_oracle_anywhere(self, write_once_tm, write_once_inst, data):
        tm = write_once_tm
        length = data.draw(st.integers(2, 10))
        bits = st.integers(0, 1)
        u = GadgetConfiguration(
            tuple(data.draw(st.lists(bits, min_size=tm.s, max_size=tm.s))),
            tuple(data.draw(st.lists(bits, min_size=length, max_size=length))),
            tuple(data.draw(st.lists(st.sampled_from(tm.cells), min_size=length, max_size=length))),
        )
        expected = {v.word() for v in oracle_successors(tm, u)}
        assert successors(write_once_inst.delta, u.word(), len(u)) == expected

    def test_accepting_machine_reaches_the_unsafe_set(self, accept_tm):
        inst = build_hardness_instance(accept_tm, "v2")
        path = reach_unsafe_oracle(accept_tm, 9)
        assert path is not None
        assert accepts(inst.c_init, path[0].word())
        assert accepts(inst.c_unsafe, path[-1].word())
        assert is_unsafe(accept_tm, path[-1])
        for u, v in zip(path, path[1:]):
            assert inst.delta.relates(u.word(), v.word())


# -------------------------
# Instance and constraints
# -------------------------
class TestGenerator:
    def test_instance_shape(self, write_once_tm, write_once_inst):
        inst = write_once_inst
        assert inst.name == "hardness-write_once"
        assert inst.framework.name == "hard-v2"
        assert inst.delta.length_preserving
        assert inst.prop == "accept"
        u = initial_configuration(write_once_tm, 7)
        assert accepts(inst.c_init, u.word())

    def test_unknown_framework_choice(self, write_once_tm):
        with pytest.raises(UsageError, match="unknown hardness framework"):
            build_hardness_instance(write_once_tm, "v3")

    @pytest.mark.parametrize("i", range(5))
    @pytest.mark.parametrize("length", [7, 9])
    def test_marking_constraints_are_inductive(self, write_once_tm, write_once_inst, i, length):
        a = constraint_a2(write_once_tm, i, length)
        assert len(a) == write_once_tm.s + length
        assert is_inductive(write_once_inst, a)

    def test_marking_constraint_levels(self, write_once_tm):
        a = constraint_a2(write_once_tm, 2, 8)
        assert a[:5] == ("1", "0", "0", "0", "1")
        # k = 2 agrees with 2 modulo both primes, the other even k modulo 2 only
        assert a[5:] == ("1", "0", "2", "0", "1", "0", "1", "0")

    def test_pair_constraint(self):
        assert pair_constraint(("a", "b"), ("0", "1")) == ("a|0", "b|1")
        with pytest.raises(UsageError):
            pair_constraint(("a",), ())


class TestSeparatorCandidate:
    def _unsafe(self, tm, cells):
        return GadgetConfiguration((0,) * tm.s, (0,) * len(cells), tuple(cells)).word()

    def test_single_position(self, write_once_tm):
        tm = write_once_tm
        u = initial_configuration(tm, 8).word()
        v = self._unsafe(tm, [SEP, "q0", "qf", "B", "B", "B", SEP, "x"])
        a1, a2 = separator_candidate(tm, u, v)
        assert a1 == constraint_a1_single(tm, 2, "B", 8)
        assert a2 == constraint_a2(tm, 2, 8)
        v1, v2 = v1_framework(tm), v2_framework(tm)
        assert v1.satisfies(a1, u) and not v1.satisfies(a1, v)
        assert v2.satisfies(a2, u) and v2.satisfies(a2, v)

    def test_window_position(self, write_once_tm):
        tm = write_once_tm
        u = initial_configuration(tm, 8).word()
        v = self._unsafe(tm, [SEP, "q0", "B", "B", "B", "B", SEP, "qf"])
        a1, a2 = separator_candidate(tm, u, v)
        assert a1 == constraint_a1_window(tm, 0, (SEP, "q0", "B", "B"), "x", 8)
        assert a1[-1] == "x"
        assert a2 == constraint_a2(tm, 7, 8)
        v1 = v1_framework(tm)
        assert v1.satisfies(a1, u) and not v1.satisfies(a1, v)

    def test_following_the_run(self, accept_tm):
        tm = accept_tm
        u = initial_configuration(tm, 9).word()
        v = self._unsafe(tm, tm.alpha(9))
        assert separator_candidate(tm, u, v) is None

    def test_requires_an_unsafe_configuration(self, write_once_tm):
        u = initial_configuration(write_once_tm, 8).word()
        with pytest.raises(UsageError, match="not an unsafe"):
            separator_candidate(write_once_tm, u, u)
