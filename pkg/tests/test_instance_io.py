import pytest

from rtsverify.automata import Alphabet, equivalent
from rtsverify.errors import ParseError, UsageError
from rtsverify.frameworks import parse_framework
from rtsverify.tools.instance_io import (
    format_framework,
    format_instance,
    parse_instance,
    parse_instance_text,
    read_framework,
    read_instance_file,
    write_instance,
)

SMALL = """\
# one token moving right
alphabet:
  symbols t n
transducer delta:
  states 1
  initial 0
  final 0
  trans 0 t/t 0
nfa init:
  states 1
  initial 0
  final 0
nfa unsafe:
  states 1
  initial 0
"""


def same_language(a, b):
    return bool(equivalent(a, b))


class TestBundledModels:
    def test_token_passing(self, token_parsed):
        assert token_parsed.name == "token_passing"
        assert token_parsed.sigma.symbols == ("t", "n")
        assert list(token_parsed.properties) == ["two_tokens", "no_token"]
        assert token_parsed.framework is None
        assert token_parsed.delta.auto.num_states == 3
        assert token_parsed.delta.length_preserving

    def test_growth_is_not_length_preserving(self, growth_parsed):
        assert not growth_parsed.delta.length_preserving

    def test_instance_needs_a_framework(self, token_parsed):
        with pytest.raises(UsageError, match="no framework"):
            token_parsed.instance()

    def test_parse_instance_with_override(self, token_file, sigma):
        inst = parse_instance(token_file, parse_framework("xor", sigma))
        assert inst.framework.name == "xor"
        assert inst.prop == "two_tokens"

    def test_missing_file(self, tmp_path):
        with pytest.raises(UsageError, match="cannot read instance file"):
            read_instance_file(tmp_path / "absent.rts")


@pytest.mark.parametrize("spec", ["xor", "disj=1", "views=1", "union(disj=1,xor)"])
def test_written_instances_read_back(token, spec, tmp_path):
    inst = token(spec)
    path = write_instance(inst, tmp_path / "out" / "token.rts")
    back = read_instance_file(path)
    assert back.sigma == inst.sigma
    assert same_language(back.delta.auto, inst.delta.auto)
    assert same_language(back.c_init, inst.c_init)
    assert list(back.properties) == list(inst.properties)
    for prop, nfa in inst.properties.items():
        assert same_language(back.properties[prop], nfa)
    fw = back.framework
    assert fw.name == spec
    assert fw.gamma.symbols == inst.gamma.symbols
    assert fw.length_uniform == inst.framework.length_uniform
    assert same_language(fw.constraints, inst.framework.constraints)
    assert same_language(fw.interp, inst.framework.interp)


def test_instance_text_without_framework(token_xor):
    text = format_instance(token_xor, with_framework=False)
    assert "framework" not in text
    assert parse_instance_text(text).framework is None


class TestFrameworkSections:
    def test_read_framework(self, tmp_path, sigma, token_disj):
        path = tmp_path / "disj.rts"
        path.write_text(format_framework(token_disj.framework), encoding="utf-8")
        fw = read_framework(path, sigma)
        assert fw.name == "disj=1"
        assert fw.satisfies("{t} {}", "t n")
        assert not fw.satisfies("{n} {}", "t n")

    def test_file_without_framework(self, token_file, sigma):
        with pytest.raises(ParseError, match="no framework"):
            read_framework(token_file, sigma)

    def test_alphabet_must_agree(self, tmp_path, token_xor):
        path = tmp_path / "xor.rts"
        path.write_text("alphabet:\n  symbols a b\n" + format_framework(token_xor.framework), encoding="utf-8")
        with pytest.raises(UsageError, match="alphabet mismatch"):
            read_framework(path, token_xor.sigma)

    def test_framework_without_interp(self, sigma):
        text = "framework f:\n  symbols A\nnfa constraints:\n  states 1\n  initial 0\n  final 0\n"
        with pytest.raises(ParseError, match="no 'interp' section"):
            parse_instance_text(text, sigma=sigma)

    def test_constraints_need_a_framework_header(self):
        text = SMALL + "nfa constraints:\n  states 1\n"
        with pytest.raises(ParseError, match="must follow the framework"):
            parse_instance_text(text)


class TestParseErrors:
    @pytest.mark.parametrize(
        "old, new, match, line",
        [
            ("trans 0 t/t 0", "trans 0 x/t 0", "unknown symbol 'x'", 8),
            ("trans 0 t/t 0", "trans 0 tt 0", "not of the form a/b", 8),
            ("trans 0 t/t 0", "trans 0 t/t 3", "state 3 outside 0..0", 8),
            ("trans 0 t/t 0", "trans 0 t/t", "expected 'trans", 8),
            ("trans 0 t/t 0", "jump 0 0", "unknown keyword 'jump'", 8),
            ("  states 1\n  initial 0\n  final 0\n  trans", "  states x\n  initial 0\n  final 0\n  trans", "integer", 5),
            ("nfa unsafe:", "nfa bogus:", "unknown section", 13),
            ("# one token moving right", "symbols t", "before any section header", 1),
        ],
    )
    def test_reports_the_line(self, old, new, match, line):
        text = SMALL.replace(old, new, 1)
        with pytest.raises(ParseError, match=match) as info:
            parse_instance_text(text)
        assert info.value.line == line

    def test_missing_sections(self):
        text = SMALL.split("nfa init:")[0]
        with pytest.raises(ParseError, match="missing section"):
            parse_instance_text(text)

    def test_missing_alphabet(self):
        with pytest.raises(ParseError, match="missing 'alphabet:'"):
            parse_instance_text(SMALL.replace("alphabet:\n  symbols t n\n", ""))

    def test_duplicate_property(self):
        text = SMALL.replace("nfa unsafe:", "nfa unsafe p:") + "nfa unsafe p:\n  states 1\n"
        with pytest.raises(ParseError, match="defined twice"):
            parse_instance_text(text)

    def test_default_property_name(self):
        parsed = parse_instance_text(SMALL, sigma=Alphabet(["t", "n"], name="sigma"))
        assert list(parsed.properties) == ["unsafe"]
