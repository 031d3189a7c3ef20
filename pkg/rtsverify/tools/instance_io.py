"""
Instance files.

    # comment (whole line)
    alphabet:
      symbols t n
    transducer delta:
      states 3
      initial 0
      final 2
      trans 0 n/n 0
    nfa init:
      ...
    nfa unsafe two_tokens:
      ...
    framework <name>:
      symbols <gamma symbols>
      length_uniform yes
    nfa constraints:
      ...
    transducer interp:
      ...

Automaton bodies are 'states <n>', 'initial <q>...', 'final <q>...',
'trans <p> <label> <q>' and 'eps <p> <q>'. Transducer labels are a/b with
'_' as pad. Several 'nfa unsafe <name>:' sections give several properties.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from ..automata.alphabet import PAD, Alphabet, PairAlphabet
from ..automata.nfa import Nfa, trim
from ..automata.transducer import Transducer
from ..errors import ParseError, UsageError, alphabet_mismatch
from ..frameworks.framework import Framework
from ..verification.instance import SafetyInstance

logger = logging.getLogger(__name__)

SYMBOLS_PER_LINE = 16
DEFAULT_PROPERTY = "unsafe"

PathLike = Union[str, Path]


@dataclass
class _Body:
    kind: str  # "nfa" | "transducer"
    line: int
    states: Optional[int] = None
    initial: list[int] = field(default_factory=list)
    final: list[int] = field(default_factory=list)
    trans: list[tuple[int, str, int, int]] = field(default_factory=list)
    eps: list[tuple[int, int, int]] = field(default_factory=list)


@dataclass
class _FrameworkHeader:
    name: str
    line: int
    symbols: list[str] = field(default_factory=list)
    length_uniform: Optional[bool] = None


@dataclass
class InstanceFile:
    """The parsed sections of one instance file."""

    sigma: Alphabet
    delta: Transducer
    c_init: Nfa
    properties: dict[str, Nfa]
    framework: Optional[Framework] = None
    name: str = "instance"

    def instance(self, framework: Optional[Framework] = None) -> SafetyInstance:
        fw = framework or self.framework
        if fw is None:
            raise UsageError(f"instance '{self.name}' has no framework: section; pass a framework spec")
        return SafetyInstance.build(self.sigma, self.delta, self.c_init, self.properties, fw, name=self.name)


# -------------------------
# Parsing
# -------------------------
_HEADERS = ("alphabet", "transducer", "nfa", "framework")


def _header(line: str) -> Optional[tuple[str, ...]]:
    if not line.endswith(":"):
        return None
    words = line[:-1].split()
    if not words or words[0] not in _HEADERS:
        return None
    return tuple(words)


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {tok!r}", lineno) from None


def _body_line(body: _Body, words: list[str], lineno: int) -> None:
    head, rest = words[0], words[1:]
    if head == "states":
        if len(rest) != 1:
            raise ParseError("expected 'states <n>'", lineno)
        if body.states is not None:
            raise ParseError("'states' given twice", lineno)
        body.states = _int(rest[0], lineno, "state count")
        if body.states < 0:
            raise ParseError(f"negative state count {body.states}", lineno)
    elif head == "initial":
        body.initial.extend(_int(t, lineno, "initial state") for t in rest)
    elif head == "final":
        body.final.extend(_int(t, lineno, "final state") for t in rest)
    elif head == "trans":
        if len(rest) != 3:
            raise ParseError(f"expected 'trans <p> <label> <q>', got {' '.join(words)!r}", lineno)
        body.trans.append((_int(rest[0], lineno, "source state"), rest[1], _int(rest[2], lineno, "target state"), lineno))
    elif head == "eps":
        if len(rest) != 2:
            raise ParseError("expected 'eps <p> <q>'", lineno)
        body.eps.append((_int(rest[0], lineno, "source state"), _int(rest[1], lineno, "target state"), lineno))
    else:
        raise ParseError(f"unknown keyword {head!r} in {body.kind} section", lineno)


def _pair_label(pa: PairAlphabet, label: str, lineno: int) -> int:
    # sigma symbols never contain '/', so the last one splits the label
    a, sep, b = label.rpartition("/")
    if not sep or not a:
        raise ParseError(f"transducer label {label!r} is not of the form a/b", lineno)
    for sym, side in ((a, pa.left), (b, pa.right)):
        if sym != PAD and sym not in side:
            raise ParseError(f"unknown symbol {sym!r} (alphabet '{side.name}')", lineno)
    try:
        return pa.letter(a, b)
    except UsageError as e:
        raise ParseError(str(e), lineno) from None


def _build(body: _Body, alphabet: Alphabet) -> Nfa:
    if body.states is None:
        raise ParseError(f"{body.kind} section has no 'states' line", body.line)
    n = body.states

    def check(q: int, lineno: int) -> int:
        if not 0 <= q < n:
            raise ParseError(f"state {q} outside 0..{n - 1}", lineno)
        return q

    for q in body.initial + body.final:
        check(q, body.line)
    transitions = []
    for p, label, q, lineno in body.trans:
        if isinstance(alphabet, PairAlphabet):
            sym = _pair_label(alphabet, label, lineno)
        elif label in alphabet:
            sym = alphabet.id(label)
        else:
            raise ParseError(f"unknown symbol {label!r} (alphabet '{alphabet.name}')", lineno)
        transitions.append((check(p, lineno), sym, check(q, lineno)))
    eps = [(check(p, lineno), check(q, lineno)) for p, q, lineno in body.eps]
    return Nfa(alphabet, n, transitions, body.initial, body.final, eps)


def parse_instance_text(text: str, name: str = "instance", sigma: Optional[Alphabet] = None) -> InstanceFile:
    """
    Parse the sections of an instance file. With `sigma` given, the
    alphabet: section may be omitted (framework-only files) and must
    agree with it when present.
    """
    symbols: Optional[list[str]] = None
    alphabet_line = 0
    bodies: dict[str, _Body] = {}
    unsafe: dict[str, _Body] = {}
    fw_header: Optional[_FrameworkHeader] = None
    current: Union[None, str, _Body, _FrameworkHeader] = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head = _header(line)
        if head is not None:
            kind, args = head[0], head[1:]
            if kind == "alphabet":
                if args or symbols is not None:
                    raise ParseError("expected a single 'alphabet:' section", lineno)
                symbols, alphabet_line, current = [], lineno, "alphabet"
            elif kind == "framework":
                if fw_header is not None or len(args) > 1:
                    raise ParseError("expected a single 'framework [<name>]:' section", lineno)
                fw_header = _FrameworkHeader(args[0] if args else name, lineno)
                current = fw_header
            else:
                if not args:
                    raise ParseError(f"'{kind}' section needs a role, e.g. '{kind} init:'", lineno)
                role, extra = args[0], args[1:]
                allowed = {"transducer": ("delta", "interp"), "nfa": ("init", "unsafe", "constraints")}[kind]
                if role not in allowed:
                    raise ParseError(f"unknown section '{kind} {role}'; expected one of {allowed}", lineno)
                if role in ("constraints", "interp") and fw_header is None:
                    raise ParseError(f"'{kind} {role}:' must follow the framework: section", lineno)
                body = _Body(kind, lineno)
                if role == "unsafe":
                    if len(extra) > 1:
                        raise ParseError("expected 'nfa unsafe [<name>]:'", lineno)
                    prop = extra[0] if extra else DEFAULT_PROPERTY
                    if prop in unsafe:
                        raise ParseError(f"property {prop!r} defined twice", lineno)
                    unsafe[prop] = body
                else:
                    if extra:
                        raise ParseError(f"'{kind} {role}:' takes no name", lineno)
                    if role in bodies:
                        raise ParseError(f"section '{kind} {role}' defined twice", lineno)
                    bodies[role] = body
                current = body
            continue

        words = line.split()
        if current is None:
            raise ParseError(f"{line!r} appears before any section header", lineno)
        if current == "alphabet":
            if words[0] != "symbols":
                raise ParseError(f"expected 'symbols ...' in alphabet section, got {words[0]!r}", lineno)
            symbols.extend(words[1:])
        elif isinstance(current, _FrameworkHeader):
            if words[0] == "symbols":
                current.symbols.extend(words[1:])
            elif words[0] == "length_uniform" and len(words) == 2 and words[1] in ("yes", "no"):
                current.length_uniform = words[1] == "yes"
            else:
                raise ParseError(f"expected 'symbols ...' or 'length_uniform yes|no', got {line!r}", lineno)
        else:
            _body_line(current, words, lineno)

    if symbols is not None:
        try:
            declared = Alphabet(symbols, name="sigma")
        except UsageError as e:
            raise ParseError(str(e), alphabet_line) from None
        if sigma is not None and declared != sigma:
            raise alphabet_mismatch(declared, sigma, f"instance file '{name}'")
        sigma = declared
    if sigma is None:
        raise ParseError("missing 'alphabet:' section")

    framework = None
    if fw_header is not None:
        framework = _build_framework(fw_header, bodies, sigma)
    if "delta" not in bodies or "init" not in bodies or not unsafe:
        if framework is not None and not unsafe and not bodies.keys() - {"constraints", "interp"}:
            # framework-only file
            return InstanceFile(sigma, Transducer.empty(sigma, sigma), Nfa.empty(sigma), {}, framework, name)
        missing = [s for s, ok in (("transducer delta:", "delta" in bodies), ("nfa init:", "init" in bodies),
                                   ("nfa unsafe:", bool(unsafe))) if not ok]
        raise ParseError(f"missing section(s): {', '.join(missing)}")

    delta_nfa = _build(bodies["delta"], PairAlphabet(sigma, sigma))
    inst = InstanceFile(
        sigma=sigma,
        delta=Transducer(sigma, sigma, delta_nfa),
        c_init=_build(bodies["init"], sigma),
        properties={prop: _build(body, sigma) for prop, body in unsafe.items()},
        framework=framework,
        name=name,
    )
    logger.debug(
        "parsed %s: |sigma|=%d, |delta|=%d, properties %s, framework %s",
        name,
        sigma.size,
        delta_nfa.num_states,
        list(inst.properties),
        framework.name if framework else "-",
    )
    return inst


def _build_framework(header: _FrameworkHeader, bodies: dict[str, _Body], sigma: Alphabet) -> Framework:
    if not header.symbols:
        raise ParseError(f"framework '{header.name}' declares no constraint symbols", header.line)
    for role in ("constraints", "interp"):
        if role not in bodies:
            raise ParseError(f"framework '{header.name}' has no '{role}' section", header.line)
    try:
        # derived alphabets use '{', '|' and ':' in their names
        gamma = Alphabet(header.symbols, name=f"gamma({header.name})", validate=False)
    except UsageError as e:
        raise ParseError(str(e), header.line) from None
    constraints = _build(bodies["constraints"], gamma)
    interp = _build(bodies["interp"], PairAlphabet(gamma, sigma))
    try:
        return Framework.from_transducer(gamma, sigma, constraints, interp, header.name, header.length_uniform)
    except UsageError as e:
        raise ParseError(str(e), bodies["interp"].line) from None


def read_instance_file(path: PathLike) -> InstanceFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read instance file {path}: {e.strerror}") from None
    return parse_instance_text(text, name=path.stem)


def parse_instance(path: PathLike, framework: Optional[Framework] = None) -> SafetyInstance:
    """Instance from a file; `framework` overrides the file's framework: section."""
    return read_instance_file(path).instance(framework)


def read_framework(path: PathLike, sigma: Alphabet) -> Framework:
    """The framework: section of a file, interpreted over sigma."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read framework file {path}: {e.strerror}") from None
    parsed = parse_instance_text(text, name=path.stem, sigma=sigma)
    if parsed.framework is None:
        raise ParseError(f"{path} has no framework: section")
    return parsed.framework


# -------------------------
# Writing
# -------------------------
def _symbol_lines(symbols: tuple[str, ...]) -> list[str]:
    return [
        "  symbols " + " ".join(symbols[i : i + SYMBOLS_PER_LINE]) for i in range(0, len(symbols), SYMBOLS_PER_LINE)
    ]


def _format_body(header: str, a: Nfa) -> list[str]:
    lines = [f"{header}:", f"  states {a.num_states}"]
    if a.initial:
        lines.append("  initial " + " ".join(map(str, sorted(a.initial))))
    if a.final:
        lines.append("  final " + " ".join(map(str, sorted(a.final))))
    names = a.alphabet.symbols
    lines.extend(f"  trans {p} {names[sym]} {q}" for p, sym, q in sorted(a.transitions))
    lines.extend(f"  eps {p} {q}" for p, q in sorted(a.epsilon))
    return lines


def format_framework(fw: Framework) -> str:
    lines = [f"framework {fw.name}:"]
    lines.extend(_symbol_lines(fw.gamma.symbols))
    lines.append(f"  length_uniform {'yes' if fw.length_uniform else 'no'}")
    lines.extend(_format_body("nfa constraints", fw.constraints))
    # transitions into the sink are implied; the reader determinizes again
    lines.extend(_format_body("transducer interp", trim(fw.interp.to_nfa())))
    return "\n".join(lines) + "\n"


def format_instance(inst: SafetyInstance, with_framework: bool = True) -> str:
    lines = [f"# {inst.name}", "alphabet:"]
    lines.extend(_symbol_lines(inst.sigma.symbols))
    lines.extend(_format_body("transducer delta", inst.delta.auto))
    lines.extend(_format_body("nfa init", inst.c_init))
    for prop, nfa in inst.properties.items():
        lines.extend(_format_body(f"nfa unsafe {prop}", nfa))
    text = "\n".join(lines) + "\n"
    if with_framework:
        text += format_framework(inst.framework)
    return text


def write_instance(inst: SafetyInstance, path: PathLike, with_framework: bool = True) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_instance(inst, with_framework), encoding="utf-8")
    logger.info("wrote instance %s to %s", inst.name, path)
    return path
