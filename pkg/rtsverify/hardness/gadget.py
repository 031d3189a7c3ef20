"""
Configurations of the prime-marking system and a direct implementation of
its three transition kinds. The transducers in generator.py are checked
against these functions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Iterator, Optional

from ..automata.alphabet import Word
from ..errors import ConfigurationError, UsageError
from .tm import BLANK, SEP, TmSpec

BITS = ("0", "1")
DEFAULT_MAX_CONFIGS = 200_000


def cell_letter(sym: str, bit: int) -> str:
    return f"{sym}^{bit}"


def split_cell(letter: str) -> tuple[str, int]:
    sym, sep, bit = letter.rpartition("^")
    if not sep or bit not in BITS:
        raise UsageError(f"{letter!r} is not a tape-part letter")
    return sym, int(bit)


@dataclass(frozen=True)
class GadgetConfiguration:
    """Prime part (s bits) and tape part (mark bit and cell per position; mark 0 means marked)."""

    prime: tuple[int, ...]
    marks: tuple[int, ...]
    cells: tuple[str, ...]

    def word(self) -> Word:
        return tuple(str(b) for b in self.prime) + tuple(cell_letter(c, b) for c, b in zip(self.cells, self.marks))

    @staticmethod
    def from_word(tm: TmSpec, word: Word) -> "GadgetConfiguration":
        s = tm.s
        if len(word) < s or any(x not in BITS for x in word[:s]):
            raise UsageError(f"{' '.join(word) or 'eps'} does not start with a prime part of {s} bits")
        cells, marks = [], []
        for letter in word[s:]:
            sym, bit = split_cell(letter)
            if sym not in tm.cells:
                raise UsageError(f"unknown cell symbol {sym!r}")
            cells.append(sym)
            marks.append(bit)
        return GadgetConfiguration(tuple(int(x) for x in word[:s]), tuple(marks), tuple(cells))

    def __len__(self) -> int:
        return len(self.prime) + len(self.cells)

    def blocks(self, tm: TmSpec) -> list[tuple[int, ...]]:
        out, start = [], 0
        for p in tm.primes:
            out.append(self.prime[start : start + p])
            start += p
        return out

    def selected(self, tm: TmSpec) -> int:
        """Index (1-based) of the largest prime with a bit set; 0 if none."""
        j = 0
        for k, block in enumerate(self.blocks(tm), start=1):
            if any(block):
                j = k
        return j

    def in_good(self, tm: TmSpec) -> bool:
        return all(sum(block) == 1 for block in self.blocks(tm))

    def marked(self, p: int) -> bool:
        return self.marks[p] == 0

    def next_marked(self, p: int) -> Optional[int]:
        return next((k for k in range(p + 1, len(self.marks)) if self.marks[k] == 0), None)

    def reset_with(self, target: int, sym: str) -> "GadgetConfiguration":
        """Prime part cleared, everything marked, `sym` written at target if that cell is unwritten."""
        cells = list(self.cells)
        if cells[target] == BLANK:
            cells[target] = sym
        return GadgetConfiguration((0,) * len(self.prime), (0,) * len(self.marks), tuple(cells))


def initial_configuration(tm: TmSpec, length: int) -> GadgetConfiguration:
    """The initial configuration with a tape part of the given length."""
    if length < 2:
        raise UsageError(f"tape part must hold at least 2 cells, got {length}")
    cells = (SEP, tm.initial) + (BLANK,) * (length - 2)
    return GadgetConfiguration((0,) * tm.s, (0,) * length, cells)


def is_unsafe(tm: TmSpec, u: GadgetConfiguration) -> bool:
    return (
        not any(u.prime)
        and not any(u.marks)
        and BLANK not in u.cells
        and tm.final in u.cells
    )


# -------------------------
# Transition kinds
# -------------------------
def mark_step(tm: TmSpec, u: GadgetConfiguration, r: int) -> Optional[GadgetConfiguration]:
    """Select the next prime, set its bit r and unmark every position not congruent to r."""
    j = u.selected(tm) + 1
    if j > tm.size:
        return None
    p = tm.primes[j - 1]
    if not 0 <= r < p:
        return None
    prime = list(u.prime)
    prime[sum(tm.primes[: j - 1]) + r] = 1
    marks = tuple(b if k % p == r else 1 for k, b in enumerate(u.marks))
    return replace(u, prime=tuple(prime), marks=marks)


def write_step(tm: TmSpec, u: GadgetConfiguration, center: int) -> Optional[GadgetConfiguration]:
    """
    Read the window around a marked position and write its successor symbol
    to the next marked position.
    """
    if not u.in_good(tm) or center < 1 or center + 2 >= len(u.cells) or not u.marked(center):
        return None
    target = u.next_marked(center)
    if target is None:
        return None
    y = tm.delta(u.cells[center - 1 : center + 3])
    return u.reset_with(target, y)


def init_step(tm: TmSpec, u: GadgetConfiguration) -> Optional[GadgetConfiguration]:
    """Write '#' or the blank to the first marked position after position 0."""
    if not u.in_good(tm) or not u.cells:
        return None
    target = u.next_marked(0)
    if target is None:
        return None
    return u.reset_with(target, SEP if u.marked(0) else tm.blank)


def semantics_oracle_step(
    tm: TmSpec, u: GadgetConfiguration, kind: str, choice: Optional[int] = None
) -> Optional[GadgetConfiguration]:
    """mark takes the remainder, write the window center; init takes no choice."""
    if kind == "mark":
        return None if choice is None else mark_step(tm, u, choice)
    if kind == "write":
        return None if choice is None else write_step(tm, u, choice)
    if kind == "init":
        return init_step(tm, u)
    raise UsageError(f"unknown transition kind {kind!r}; expected mark, write or init")


def oracle_successors(tm: TmSpec, u: GadgetConfiguration) -> set[GadgetConfiguration]:
    out: set[GadgetConfiguration] = set()
    j = u.selected(tm) + 1
    if j <= tm.size:
        for r in range(tm.primes[j - 1]):
            out.add(mark_step(tm, u, r))
    for center in range(1, len(u.cells)):
        v = write_step(tm, u, center)
        if v is not None:
            out.add(v)
    v = init_step(tm, u)
    if v is not None:
        out.add(v)
    return out


# -------------------------
# Runs
# -------------------------
def sample_run(
    tm: TmSpec, length: int, targets: Optional[list[int]] = None
) -> list[tuple[str, GadgetConfiguration]]:
    """
    Fill the tape part position by position: for each target, mark it with
    one remainder per prime, then init (targets up to m) or write (from the
    position m to the left). Targets default to 2..length-1 in order.
    """
    m = tm.m
    u = initial_configuration(tm, length)
    steps: list[tuple[str, GadgetConfiguration]] = [("start", u)]
    for t in targets if targets is not None else range(2, length):
        for p in tm.primes:
            u = mark_step(tm, u, t % p)
            steps.append((f"mark({p},{t % p})", u))
        nxt = init_step(tm, u) if t <= m else write_step(tm, u, t - m)
        if nxt is None:
            raise UsageError(f"position {t} cannot be written from {' '.join(u.word())}")
        u = nxt
        steps.append(("init" if t <= m else "write", u))
    return steps


def _walk(tm: TmSpec, length: int, max_configs: int) -> Iterator[tuple[GadgetConfiguration, dict]]:
    start = initial_configuration(tm, length)
    parent: dict[GadgetConfiguration, Optional[GadgetConfiguration]] = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        yield u, parent
        for v in sorted(oracle_successors(tm, u), key=lambda g: g.word()):
            if v not in parent:
                if len(parent) >= max_configs:
                    raise ConfigurationError(f"more than {max_configs} reachable configurations")
                parent[v] = u
                queue.append(v)


def reach_unsafe_oracle(
    tm: TmSpec, length: int, max_configs: int = DEFAULT_MAX_CONFIGS
) -> Optional[list[GadgetConfiguration]]:
    """Shortest path from the initial configuration of the given tape length to an unsafe one."""
    for u, parent in _walk(tm, length, max_configs):
        if is_unsafe(tm, u):
            path = [u]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
    return None
