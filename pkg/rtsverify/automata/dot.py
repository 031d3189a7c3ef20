from __future__ import annotations

from collections import defaultdict
from pathlib import Path
from typing import Union

from .dfa import Dfa
from .nfa import Nfa
from .transducer import Transducer


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(a: Union[Nfa, Dfa, Transducer], name: str = "A") -> str:
    """Graphviz text; parallel edges are merged into one comma-separated label."""
    if isinstance(a, Transducer):
        a = a.auto
    if isinstance(a, Dfa):
        edges = [(p, sym, q) for p, row in enumerate(a.table) for sym, q in enumerate(row)]
        initial = {a.initial}
        eps: list[tuple[int, int]] = []
    else:
        edges = sorted(a.transitions)
        initial = set(a.initial)
        eps = sorted(a.epsilon)
    labels: dict[tuple[int, int], list[str]] = defaultdict(list)
    for p, sym, q in edges:
        labels[(p, q)].append(a.alphabet.symbols[sym])
    for p, q in eps:
        labels[(p, q)].append("eps")

    lines = [f"digraph {_quote(name)} {{", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for q in range(a.num_states):
        shape = "doublecircle" if q in a.final else "circle"
        lines.append(f"  {q} [shape={shape}];")
    for q in sorted(initial):
        lines.append(f"  __start -> {q};")
    for (p, q), syms in sorted(labels.items()):
        lines.append(f"  {p} -> {q} [label={_quote(','.join(syms))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_dot(a: Union[Nfa, Dfa, Transducer], path: Union[str, Path], name: str = "A") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_dot(a, name), encoding="utf-8")
    return path
