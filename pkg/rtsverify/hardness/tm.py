"""
Deterministic Turing machines for the hardness generator: the machine file
format, the local successor map on 4-symbol windows and the encoded run.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Optional, Union

from ..errors import ConfigurationError, ParseError

logger = logging.getLogger(__name__)

SEP = "#"
BLANK = "[]"
MOVES = ("L", "R", "S")
MIN_SIZE = 2
MAX_SIZE = 2

Transition = tuple[str, str, str]  # (next state, written symbol, move)

_BAD_NAME = re.compile(r"[\s/|^_]")


def first_primes(n: int) -> tuple[int, ...]:
    out: list[int] = []
    k = 2
    while len(out) < n:
        if all(k % p for p in out):
            out.append(k)
        k += 1
    return tuple(out)


@dataclass(frozen=True)
class TmSpec:
    """
    A machine with states, a tape alphabet whose first symbol is the blank,
    and a partial transition function; missing entries leave the
    configuration unchanged, and so does the final state.
    """

    states: tuple[str, ...]
    initial: str
    final: str
    tape: tuple[str, ...]
    transitions: dict[tuple[str, str], Transition] = field(default_factory=dict)
    size: int = 2
    name: str = "tm"

    def __post_init__(self):
        if not MIN_SIZE <= self.size <= MAX_SIZE:
            raise ConfigurationError(
                f"machine size {self.size} is outside {MIN_SIZE}..{MAX_SIZE}; larger sizes give unusable automata"
            )
        names = list(self.states) + list(self.tape)
        if len(set(names)) != len(names):
            raise ConfigurationError(f"states and tape symbols of '{self.name}' must be distinct")
        for s in names:
            if s in (SEP, BLANK) or _BAD_NAME.search(s):
                raise ConfigurationError(f"invalid machine symbol {s!r}")
        if self.initial not in self.states or self.final not in self.states:
            raise ConfigurationError(f"initial and final state of '{self.name}' must be declared states")
        if not self.tape:
            raise ConfigurationError(f"machine '{self.name}' needs at least the blank tape symbol")
        for (q, a), (q2, w, d) in self.transitions.items():
            if q == self.final:
                raise ConfigurationError(f"final state {q} of '{self.name}' has an outgoing transition")
            if q not in self.states or q2 not in self.states or a not in self.tape or w not in self.tape:
                raise ConfigurationError(f"transition {q} {a} -> {q2} {w} {d} uses undeclared symbols")
            if d not in MOVES:
                raise ConfigurationError(f"move {d!r} is not one of {MOVES}")

    # -------------------------
    # Derived constants
    # -------------------------
    @property
    def blank(self) -> str:
        return self.tape[0]

    @cached_property
    def primes(self) -> tuple[int, ...]:
        return first_primes(self.size)

    @property
    def s(self) -> int:
        return sum(self.primes)

    @property
    def m(self) -> int:
        return math.prod(self.primes)

    @cached_property
    def symbols(self) -> tuple[str, ...]:
        """The run alphabet: separator, states, tape symbols."""
        return (SEP,) + self.states + self.tape

    @cached_property
    def cells(self) -> tuple[str, ...]:
        """Run alphabet plus the unwritten cell."""
        return self.symbols + (BLANK,)

    def is_state(self, x: str) -> bool:
        return x in self.states

    # -------------------------
    # Local successor map
    # -------------------------
    def _move(self, q: str, a: str) -> Optional[Transition]:
        if q == self.final:
            return None
        return self.transitions.get((q, a))

    def delta(self, window: tuple[str, ...]) -> str:
        """
        Symbol at the position of window[1] one configuration later.
        Windows holding an unwritten cell map to it; moves across a border
        become stays.
        """
        x1, x2, x3, x4 = window
        if BLANK in window:
            return BLANK
        if x2 == SEP:
            return SEP
        if self.is_state(x2):
            t = self._move(x2, x3)
            if t is None:
                return x2
            q2, w, d = t
            if d == "R":
                return q2 if x4 == SEP else w
            if d == "L":
                return q2 if x1 == SEP else x1
            return q2
        if self.is_state(x1):
            t = self._move(x1, x2)
            if t is None:
                return x2
            q2, w, d = t
            if d == "R" and x3 != SEP:
                return q2
            return w
        if self.is_state(x3):
            t = self._move(x3, x4)
            if t is not None and t[2] == "L":
                return t[0]
        return x2

    @cached_property
    def delta_table(self) -> tuple[str, ...]:
        """delta over every window of cells, in product order of self.cells."""
        k = len(self.cells)
        out = []
        for idx in range(k**4):
            digits = []
            for _ in range(4):
                idx, r = divmod(idx, k)
                digits.append(self.cells[r])
            out.append(self.delta(tuple(reversed(digits))))
        return tuple(out)

    # -------------------------
    # Runs
    # -------------------------
    def initial_configuration(self) -> tuple[str, ...]:
        return (SEP, self.initial) + (self.blank,) * (self.m - 2)

    def alpha(self, length: int) -> tuple[str, ...]:
        """The first `length` symbols of the encoded run."""
        m = self.m
        out = list(self.initial_configuration()[:length])
        while len(out) < length:
            p = len(out)
            out.append(SEP if p == m else self.delta(tuple(out[p - m - 1 : p - m + 3])))
        return tuple(out)

    def step_configuration(self, conf: tuple[str, ...]) -> tuple[str, ...]:
        """One machine step on an encoded configuration '# tape-with-state'."""
        body = list(conf[1:])
        i = next(k for k, x in enumerate(body) if self.is_state(x))
        q = body[i]
        if i + 1 >= len(body):
            return conf
        t = self._move(q, body[i + 1])
        if t is None:
            return conf
        q2, w, d = t
        if d == "R" and i + 2 < len(body):
            body[i], body[i + 1] = w, q2
        elif d == "L" and i > 0:
            body[i - 1], body[i], body[i + 1] = q2, body[i - 1], w
        else:
            body[i], body[i + 1] = q2, w
        return (SEP,) + tuple(body)

    def run(self, steps: int) -> list[tuple[str, ...]]:
        confs = [self.initial_configuration()]
        for _ in range(steps):
            confs.append(self.step_configuration(confs[-1]))
        return confs

    def accepts(self) -> bool:
        """Does the run on the bounded tape reach the final state?"""
        seen = set()
        conf = self.initial_configuration()
        while conf not in seen:
            if self.final in conf:
                return True
            seen.add(conf)
            conf = self.step_configuration(conf)
        return False


# -------------------------
# Machine files
# -------------------------
def parse_tm(text: str, name: str = "tm") -> TmSpec:
    """
    Lines: 'state <q> [initial] [final]', 'tape <a> <b> ...' (first symbol
    is the blank), 'trans <q> <a> -> <q2> <b> <L|R|S>', 'size <n>'.
    '#' starts a comment.
    """
    states: list[str] = []
    initial: Optional[str] = None
    final: Optional[str] = None
    tape: list[str] = []
    trans: dict[tuple[str, str], Transition] = {}
    size = 2
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "state":
            if not rest or any(flag not in ("initial", "final") for flag in rest[1:]):
                raise ParseError(f"expected 'state <name> [initial] [final]', got {line!r}", lineno)
            q = rest[0]
            if q in states:
                raise ParseError(f"state {q} declared twice", lineno)
            states.append(q)
            if "initial" in rest[1:]:
                if initial is not None:
                    raise ParseError(f"second initial state {q}", lineno)
                initial = q
            if "final" in rest[1:]:
                if final is not None:
                    raise ParseError(f"second final state {q}", lineno)
                final = q
        elif head == "tape":
            if not rest:
                raise ParseError("'tape' needs at least the blank symbol", lineno)
            tape.extend(rest)
        elif head == "trans":
            if len(rest) != 6 or rest[2] != "->":
                raise ParseError(f"expected 'trans <q> <a> -> <q2> <b> <L|R|S>', got {line!r}", lineno)
            q, a, _, q2, w, d = rest
            if (q, a) in trans:
                raise ParseError(f"second transition for ({q}, {a}); machines must be deterministic", lineno)
            if q == final:
                raise ParseError(f"final state {q} cannot have transitions", lineno)
            for sym, known, what in ((q, states, "state"), (q2, states, "state"), (a, tape, "tape symbol"),
                                     (w, tape, "tape symbol")):
                if sym not in known:
                    raise ParseError(f"undeclared {what} {sym!r}", lineno)
            if d not in MOVES:
                raise ParseError(f"move must be one of {', '.join(MOVES)}, got {d!r}", lineno)
            trans[(q, a)] = (q2, w, d)
        elif head == "size":
            if len(rest) != 1 or not rest[0].isdigit():
                raise ParseError(f"expected 'size <n>', got {line!r}", lineno)
            size = int(rest[0])
        else:
            raise ParseError(f"unknown keyword {head!r}", lineno)
    if initial is None or final is None:
        raise ParseError("machine needs one initial and one final state")
    spec = TmSpec(tuple(states), initial, final, tuple(tape), trans, size, name)
    logger.debug("machine %s: %d states, %d tape symbols, %d transitions", name, len(states), len(tape), len(trans))
    return spec


def read_tm(path: Union[str, Path]) -> TmSpec:
    path = Path(path)
    return parse_tm(path.read_text(encoding="utf-8"), name=path.stem)
