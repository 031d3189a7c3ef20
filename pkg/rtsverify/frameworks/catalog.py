from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, List, Optional, Type

from ..automata.alphabet import Alphabet
from ..errors import UsageError
from .builtin import convolution_framework, disjunctive_framework, union_framework, views_framework, xor_framework
from .framework import Framework


# -------------------------
# Framework kinds
# -------------------------
class FrameworkKind:
    # Catalog metadata (defaults)
    TYPE = "base"
    LABEL = "Framework"
    GRAMMAR = ""
    DESCRIPTION = ""
    COMBINATOR = False

    def build(self, sigma: Alphabet, arg: Optional[str], children: List[Framework], base_dir: Path) -> Framework:
        raise NotImplementedError


def _int_arg(kind: str, arg: Optional[str]) -> int:
    try:
        value = int(arg or "")
    except ValueError:
        raise UsageError(f"framework '{kind}' expects an integer, e.g. {kind}=1; got {arg!r}") from None
    if value < 1:
        raise UsageError(f"framework '{kind}' expects a positive integer, got {value}")
    return value


class DisjunctiveKind(FrameworkKind):
    TYPE = "disj"
    LABEL = "Disjunctive (positive CNF)"
    GRAMMAR = "disj=<b>"
    DESCRIPTION = "b clauses, each a set of symbols per position; a configuration must hit every clause."

    def build(self, sigma, arg, children, base_dir):
        return disjunctive_framework(sigma, _int_arg(self.TYPE, arg))


class XorKind(FrameworkKind):
    TYPE = "xor"
    LABEL = "Exactly-one (XOR)"
    GRAMMAR = "xor"
    DESCRIPTION = "One set of symbols per position; exactly one position may match."

    def build(self, sigma, arg, children, base_dir):
        if arg is not None:
            raise UsageError("framework 'xor' takes no argument")
        return xor_framework(sigma)


class ViewsKind(FrameworkKind):
    TYPE = "views"
    LABEL = "Forbidden views"
    GRAMMAR = "views=<k>"
    DESCRIPTION = "A set of scattered subwords of length <= k that must not occur."

    def build(self, sigma, arg, children, base_dir):
        return views_framework(sigma, _int_arg(self.TYPE, arg))


class UnionKind(FrameworkKind):
    TYPE = "union"
    LABEL = "Union"
    GRAMMAR = "union(<spec>,<spec>)"
    DESCRIPTION = "Constraints of either framework, tagged 1: and 2:."
    COMBINATOR = True

    def build(self, sigma, arg, children, base_dir):
        return union_framework(*children)


class ConvKind(FrameworkKind):
    TYPE = "conv"
    LABEL = "Convolution"
    GRAMMAR = "conv(<spec>,<spec>)"
    DESCRIPTION = "Equal-length pairs of constraints, interpreted as a conjunction."
    COMBINATOR = True

    def build(self, sigma, arg, children, base_dir):
        return convolution_framework(*children)


class FileKind(FrameworkKind):
    TYPE = "file"
    LABEL = "From file"
    GRAMMAR = "file=<path>"
    DESCRIPTION = "The framework: section of an instance file."

    def build(self, sigma, arg, children, base_dir):
        from ..tools.instance_io import read_framework

        if not arg:
            raise UsageError("framework 'file' needs a path, e.g. file=models/token_passing.rts")
        path = Path(arg)
        if not path.is_absolute():
            path = base_dir / path
        return read_framework(path, sigma)


@dataclass(frozen=True)
class FrameworkKindSpec:
    type: str
    label: str
    grammar: str
    description: str
    combinator: bool


def _iter_all_subclasses(cls: Type) -> List[Type]:
    out: List[Type] = []
    stack = list(cls.__subclasses__())
    while stack:
        c = stack.pop()
        out.append(c)
        stack.extend(c.__subclasses__())
    return out


def _kinds() -> Dict[str, Type[FrameworkKind]]:
    return {cls.TYPE: cls for cls in _iter_all_subclasses(FrameworkKind) if cls.TYPE not in ("base", "")}


def generate_framework_catalog() -> Dict:
    specs = [
        FrameworkKindSpec(
            type=cls.TYPE,
            label=cls.LABEL,
            grammar=cls.GRAMMAR,
            description=cls.DESCRIPTION,
            combinator=cls.COMBINATOR,
        )
        for cls in _kinds().values()
    ]
    specs.sort(key=lambda s: s.type)
    return {
        "version": 1,
        "framework_kinds": [asdict(s) for s in specs],
    }


# -------------------------
# Spec strings
# -------------------------
def _split_top_level(text: str) -> List[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise UsageError(f"unbalanced ')' in framework spec {text!r}")
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth != 0:
        raise UsageError(f"unbalanced '(' in framework spec {text!r}")
    parts.append(text[start:])
    return [p.strip() for p in parts]


def parse_framework(spec: str, sigma: Alphabet, base_dir: Optional[Path] = None) -> Framework:
    """
    Build a framework from a spec string such as 'xor', 'disj=2',
    'union(disj=1,xor)' or 'file=models/token_passing.rts'.
    """
    text = spec.strip()
    base_dir = base_dir or Path.cwd()
    kinds = _kinds()
    if "(" in text and not text.startswith("file="):
        if not text.endswith(")"):
            raise UsageError(f"framework spec {spec!r} must end with ')'")
        head, inner = text[: text.index("(")].strip(), text[text.index("(") + 1 : -1]
        kind = kinds.get(head)
        if kind is None or not kind.COMBINATOR:
            raise UsageError(f"unknown framework combinator {head!r}; known: union, conv")
        args = _split_top_level(inner)
        if len(args) != 2 or not all(args):
            raise UsageError(f"{head}(...) takes exactly two framework specs, got {len(args)}")
        children = [parse_framework(a, sigma, base_dir) for a in args]
        return kind().build(sigma, None, children, base_dir)
    head, sep, arg = text.partition("=")
    kind = kinds.get(head.strip())
    if kind is None or kind.COMBINATOR:
        known = ", ".join(sorted(k.GRAMMAR for k in kinds.values()))
        raise UsageError(f"unknown framework spec {spec!r}; known: {known}")
    return kind().build(sigma, arg.strip() if sep else None, [], base_dir)
