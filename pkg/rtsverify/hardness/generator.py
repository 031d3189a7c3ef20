"""
Instance generator for the prime-marking construction: from a small Turing
machine, an RTS whose abstract safety is equivalent to the machine not
accepting on its bounded tape, with the matching two-part framework.
"""

from __future__ import annotations

import logging
from typing import Callable, Hashable, Iterable, Optional

from ..automata.alphabet import Alphabet, PairAlphabet, Word, WordLike
from ..automata.dfa import Dfa
from ..automata.nfa import Nfa, trim, union
from ..automata.transducer import Transducer
from ..errors import UsageError
from ..frameworks.builtin import convolution_framework
from ..frameworks.framework import Framework
from ..verification.instance import SafetyInstance
from .gadget import BITS, GadgetConfiguration, cell_letter, is_unsafe
from .tm import BLANK, SEP, TmSpec

logger = logging.getLogger(__name__)

FRAMEWORK_CHOICES = ("full", "v2")
WINDOW = 4


class _Letters:
    """Decoded view of the configuration alphabet."""

    def __init__(self, tm: TmSpec):
        self.tm = tm
        names = list(BITS) + [cell_letter(c, b) for c in tm.cells for b in (0, 1)]
        self.sigma = Alphabet(names, name=f"cfg({tm.name})")
        self.bit: dict[int, int] = {self.sigma.id(b): int(b) for b in BITS}
        self.cell: dict[int, tuple[str, int]] = {
            self.sigma.id(cell_letter(c, b)): (c, b) for c in tm.cells for b in (0, 1)
        }

    def bit_id(self, b: int) -> int:
        return self.sigma.id(BITS[b])

    def cell_id(self, sym: str, b: int) -> int:
        return self.sigma.id(cell_letter(sym, b))


def hardness_sigma(tm: TmSpec) -> Alphabet:
    return _Letters(tm).sigma


def _prime_positions(tm: TmSpec) -> list[tuple[int, int, int]]:
    """(block, offset, block length) per prime-part position, blocks 1-based."""
    out = []
    for j, p in enumerate(tm.primes, start=1):
        out += [(j, off, p) for off in range(p)]
    return out


def _relation(
    letters: _Letters,
    initial: Iterable[Hashable],
    move: Callable[[Hashable, int], Iterable[tuple[int, Hashable]]],
    is_final: Callable[[Hashable], bool],
) -> Transducer:
    """Length-preserving transducer from move(key, input letter) -> (output letter, key) pairs."""
    sigma = letters.sigma
    pa = PairAlphabet(sigma, sigma)

    def successors(key):
        for a in range(sigma.size):
            for out, nxt in move(key, a):
                yield pa.pair(a, out), nxt

    return Transducer(sigma, sigma, trim(Nfa.explore(pa, list(initial), successors, is_final)))


# -------------------------
# Transitions
# -------------------------
def mark_transducer(tm: TmSpec) -> Transducer:
    """
    Guess j and r up front. Keys ('P', pos, j, r, seen) read the prime part,
    seen recording a set bit in block j-1; keys ('T', k mod p_j, j, r) copy
    the tape part, unmarking positions not congruent to r.
    """
    L = _Letters(tm)
    s = tm.s
    positions = _prime_positions(tm)

    def move(key, a):
        if key[0] == "P":
            _, pos, j, r, seen = key
            b = L.bit.get(a)
            if b is None:
                return
            blk, off, _ = positions[pos]
            if blk < j - 1:
                out = b
            elif blk == j - 1:
                out, seen = b, seen or b == 1
            elif blk == j:
                if b:
                    return
                out = int(off == r)
            else:
                if b:
                    return
                out = 0
            if pos + 1 == s:
                if seen:
                    yield L.bit_id(out), ("T", 0, j, r)
            else:
                yield L.bit_id(out), ("P", pos + 1, j, r, seen)
            return
        _, k, j, r = key
        cell = L.cell.get(a)
        if cell is None:
            return
        sym, b = cell
        p = tm.primes[j - 1]
        yield L.cell_id(sym, b if k == r else 1), ("T", (k + 1) % p, j, r)

    initial = [("P", 0, j, r, j == 1) for j, p in enumerate(tm.primes, start=1) for r in range(p)]
    return _relation(L, initial, move, lambda key: key[0] == "T")


def _gated(L: _Letters, after: Hashable, key, a):
    """Prime part in C_good, rewritten to zeros; ('G', pos, ones) keys."""
    _, pos, ones = key
    b = L.bit.get(a)
    if b is None:
        return
    ones += b
    if ones > 1:
        return
    _, off, p = _prime_positions(L.tm)[pos]
    if off == p - 1:
        if ones != 1:
            return
        ones = 0
    yield L.bit_id(0), (after if pos + 1 == L.tm.s else ("G", pos + 1, ones))


def _write_back(L: _Letters, key, a):
    """('S', y) scans unmarked cells and writes y at the first marked one if unwritten; ('C',) copies."""
    cell = L.cell.get(a)
    if cell is None:
        return
    sym, b = cell
    if key[0] == "C" or b == 1:
        yield L.cell_id(sym, 0), key
    else:
        yield L.cell_id(key[1] if sym == BLANK else sym, 0), ("C",)


def write_transducer(tm: TmSpec) -> Transducer:
    """
    ('B',) copies cells before the window; ('W', k, res, found) has read k
    window cells, res the interned residual of the window successor table
    and found whether a marked cell follows the center inside the window.
    """
    L = _Letters(tm)
    table = tm.delta_table
    index = {c: i for i, c in enumerate(tm.cells)}
    k_cells = len(tm.cells)
    residuals: dict[tuple[str, ...], int] = {}
    by_id: list[tuple[str, ...]] = []

    def intern(t: tuple[str, ...]) -> int:
        if t not in residuals:
            residuals[t] = len(by_id)
            by_id.append(t)
        return residuals[t]

    def child(res: Optional[int], sym: str) -> tuple[str, ...]:
        parent = table if res is None else by_id[res]
        width = len(parent) // k_cells
        i = index[sym]
        return parent[i * width : (i + 1) * width]

    def move(key, a):
        if key[0] == "G":
            yield from _gated(L, ("B",), key, a)
            return
        if key[0] in ("S", "C"):
            yield from _write_back(L, key, a)
            return
        cell = L.cell.get(a)
        if cell is None:
            return
        sym, b = cell
        out = L.cell_id(sym, 0)
        if key[0] == "B":
            yield out, key
            yield out, ("W", 1, intern(child(None, sym)), False)
            return
        _, k, res, found = key
        k += 1
        if k == 2 and b != 0:
            return
        if k >= 3:
            found = found or b == 0
        rest = child(res, sym)
        if k < WINDOW:
            yield out, ("W", k, intern(rest), found)
        else:
            yield out, (("C",) if found else ("S", rest[0]))

    return _relation(L, [("G", 0, 0)], move, lambda key: key == ("C",))


def init_transducer(tm: TmSpec) -> Transducer:
    """Position 0 decides between '#' (marked) and the blank, written at the next marked cell."""
    L = _Letters(tm)

    def move(key, a):
        if key[0] == "G":
            yield from _gated(L, ("I",), key, a)
            return
        if key[0] == "I":
            cell = L.cell.get(a)
            if cell is None:
                return
            sym, b = cell
            yield L.cell_id(sym, 0), ("S", SEP if b == 0 else tm.blank)
            return
        yield from _write_back(L, key, a)

    return _relation(L, [("G", 0, 0)], move, lambda key: key == ("C",))


def hardness_delta(tm: TmSpec) -> Transducer:
    parts = [mark_transducer(tm), write_transducer(tm), init_transducer(tm)]
    auto = parts[0].auto
    for t in parts[1:]:
        auto = union(auto, t.auto)
    sigma = parts[0].left
    logger.debug("hardness transitions for %s: %s states", tm.name, "+".join(str(t.num_states) for t in parts))
    return Transducer(sigma, sigma, auto)


# -------------------------
# Initial and unsafe sets
# -------------------------
def initial_set(tm: TmSpec) -> Nfa:
    """0^s #^0 q0^0 ([]^0)*"""
    L = _Letters(tm)
    s = tm.s
    zero = L.bit_id(0)
    trans = [(i, zero, i + 1) for i in range(s)]
    trans += [
        (s, L.cell_id(SEP, 0), s + 1),
        (s + 1, L.cell_id(tm.initial, 0), s + 2),
        (s + 2, L.cell_id(BLANK, 0), s + 2),
    ]
    return Nfa(L.sigma, s + 3, trans, {0}, {s + 2})


def unsafe_set(tm: TmSpec) -> Nfa:
    """0^s, then marked written cells with the final state somewhere."""
    L = _Letters(tm)
    s = tm.s
    zero = L.bit_id(0)
    trans = [(i, zero, i + 1) for i in range(s)]
    for sym in tm.symbols:
        trans += [(s, L.cell_id(sym, 0), s), (s + 1, L.cell_id(sym, 0), s + 1)]
    trans.append((s, L.cell_id(tm.final, 0), s + 1))
    return Nfa(L.sigma, s + 2, trans, {0}, {s + 1})


# -------------------------
# Frameworks
# -------------------------
def v1_framework(tm: TmSpec) -> Framework:
    """
    Constraints []^s []* (x1 x2 x3 x4 []* y + y) []* over cells. The window
    form holds unless the configuration shows exactly x under the window
    (exempt when it shows another written window); the single form and a
    non-exempt window form need y or [] under y.
    """
    L = _Letters(tm)
    s = tm.s
    gamma = Alphabet(tm.cells, name=f"cells({tm.name})")
    pa = PairAlphabet(gamma, L.sigma)
    blank_g = gamma.id(BLANK)
    run_syms = [gamma.id(x) for x in tm.symbols]

    # constraint language
    pre, a1, a4, yz, z = s, s + 1, s + 4, s + 5, s + 6
    trans = [(i, blank_g, i + 1) for i in range(s)] + [(pre, blank_g, pre), (a4, blank_g, a4)]
    trans += [(yz, blank_g, yz), (z, blank_g, z)]
    for g in run_syms:
        trans += [(pre, g, a1), (pre, g, yz), (a1, g, a1 + 1), (a1 + 1, g, a1 + 2), (a1 + 2, g, a4), (a4, g, z)]
    constraints = Nfa(gamma, s + 7, trans, {0}, {yz, z})

    def ok(sym: str, g: str) -> bool:
        return sym in (g, BLANK)

    def step(key, k):
        i, j = pa.split(k)
        if i == pa.lpad or j == pa.rpad:
            return None
        g = gamma.symbols[i]
        if key[0] == "P":
            if g != BLANK or j not in L.bit:
                return None
            return ("T0",) if key[1] + 1 == s else ("P", key[1] + 1)
        cell = L.cell.get(j)
        if cell is None:
            return None
        sym = cell[0]
        tag = key[0]
        if tag == "T0":
            if g == BLANK:
                return key
            return ("R", 1, sym == g, sym == BLANK, ok(sym, g))
        if tag == "R":
            _, cnt, match, blank, first_ok = key
            if g == BLANK:
                if cnt == 1:
                    return ("Z", first_ok)
                if cnt == WINDOW:
                    return ("G", not blank and not match)
                return None
            if cnt < WINDOW:
                return ("R", cnt + 1, match and sym == g, blank or sym == BLANK, False)
            exempt = not blank and not match
            return ("Z", exempt or ok(sym, g))
        if tag == "G":
            return key if g == BLANK else ("Z", key[1] or ok(sym, g))
        return key if g == BLANK else None

    def is_final(key) -> bool:
        return key == ("Z", True) or (key[0] == "R" and key[1] == 1 and key[4])

    interp = Dfa.explore(pa, ("P", 0), step, is_final)
    return Framework(gamma, L.sigma, constraints, interp, "hard-v1", length_uniform=True)


def v2_framework(tm: TmSpec) -> Framework:
    """
    Constraints {0,1}^s [0,n]*. With J the largest selected prime of the
    configuration: if it differs from the constraint within the first J
    blocks, no position carrying n may be marked; otherwise exactly the
    positions carrying a value >= J are marked.
    """
    L = _Letters(tm)
    s, n = tm.s, tm.size
    gamma = Alphabet([str(d) for d in range(n + 1)], name=f"levels{n}")
    pa = PairAlphabet(gamma, L.sigma)
    positions = _prime_positions(tm)

    trans = [(i, d, i + 1) for i in range(s) for d in (0, 1)]
    trans += [(s, d, s) for d in range(n + 1)]
    constraints = Nfa(gamma, s + 1, trans, {0}, {s})

    def step(key, k):
        d, j = pa.split(k)
        if d == pa.lpad or j == pa.rpad:
            return None
        if key[0] == "P":
            _, pos, sel, diff, pending, cur_diff, cur_one = key
            b = L.bit.get(j)
            if b is None or d > 1:
                return None
            cur_diff = cur_diff or d != b
            cur_one = cur_one or b == 1
            blk, off, p = positions[pos]
            if off == p - 1:
                if cur_one:
                    diff, pending, sel = diff or pending or cur_diff, False, blk
                else:
                    pending = pending or cur_diff
                cur_diff = cur_one = False
            if pos + 1 == s:
                return ("D",) if diff else ("E", sel)
            return ("P", pos + 1, sel, diff, pending, cur_diff, cur_one)
        cell = L.cell.get(j)
        if cell is None:
            return None
        marked = cell[1] == 0
        if key[0] == "D":
            return None if d == n and marked else key
        return key if (d >= key[1]) == marked else None

    interp = Dfa.explore(pa, ("P", 0, 0, False, False, False, False), step, lambda key: key[0] in ("D", "E"))
    return Framework(gamma, L.sigma, constraints, interp, "hard-v2", length_uniform=True)


def hardness_framework(tm: TmSpec) -> Framework:
    return convolution_framework(v1_framework(tm), v2_framework(tm))


def build_hardness_instance(tm: TmSpec, framework: str = "full") -> SafetyInstance:
    """framework 'full' is the two-part convolution, 'v2' the marking part alone."""
    if framework not in FRAMEWORK_CHOICES:
        raise UsageError(f"unknown hardness framework {framework!r}; expected one of {FRAMEWORK_CHOICES}")
    fw = hardness_framework(tm) if framework == "full" else v2_framework(tm)
    inst = SafetyInstance.build(
        hardness_sigma(tm),
        hardness_delta(tm),
        initial_set(tm),
        {"accept": unsafe_set(tm)},
        fw,
        name=f"hardness-{tm.name}",
    )
    logger.info(
        "hardness instance %s: |Delta|=%d, |V|=%d, framework %s",
        inst.name,
        inst.delta.num_states,
        fw.interp.num_states,
        fw.name,
    )
    return inst


# -------------------------
# Constraints
# -------------------------
def constraint_a2(tm: TmSpec, i: int, length: int) -> Word:
    """
    Prime part with bit (i mod p_j) set in every block, then per tape
    position k the number of leading primes modulo which k agrees with i.
    """
    bits: list[str] = []
    for p in tm.primes:
        bits += ["1" if off == i % p else "0" for off in range(p)]
    levels = []
    for k in range(length):
        level = 0
        for p in tm.primes:
            if k % p != i % p:
                break
            level += 1
        levels.append(str(level))
    return tuple(bits + levels)


def constraint_a1_single(tm: TmSpec, pos: int, y: str, length: int) -> Word:
    return (BLANK,) * (tm.s + pos) + (y,) + (BLANK,) * (length - pos - 1)


def constraint_a1_window(tm: TmSpec, start: int, window: Word, y: str, length: int) -> Word:
    """Window at tape positions start..start+3, y at start+m+1."""
    gap = tm.m - (WINDOW - 1)
    rest = length - start - WINDOW - gap - 1
    if rest < 0:
        raise UsageError(f"window at {start} does not fit a tape part of length {length}")
    return (BLANK,) * (tm.s + start) + tuple(window) + (BLANK,) * gap + (y,) + (BLANK,) * rest


def pair_constraint(a1: Word, a2: Word) -> Word:
    """Letters of the two-part framework for equal-length parts."""
    if len(a1) != len(a2):
        raise UsageError(f"constraint parts differ in length: {len(a1)} and {len(a2)}")
    return tuple(f"{x}|{y}" for x, y in zip(a1, a2))


def separator_candidate(tm: TmSpec, u: WordLike, v: WordLike) -> Optional[tuple[Word, Word]]:
    """
    For u initial and v unsafe of equal length: the constraint pair built
    from the first tape position where v leaves the machine's run, or None
    when v follows it. The caller checks the result.
    """
    sigma = hardness_sigma(tm)
    uw, vw = sigma.parse_word(u), sigma.parse_word(v)
    if len(uw) != len(vw):
        raise UsageError(f"configurations differ in length: {len(uw)} and {len(vw)}")
    gv = GadgetConfiguration.from_word(tm, vw)
    if not is_unsafe(tm, gv):
        raise UsageError(f"{' '.join(vw)} is not an unsafe configuration")
    cells = gv.cells
    length = len(cells)
    m = tm.m
    head = tm.alpha(m) + (SEP,)
    for p in range(length):
        if p <= m:
            if cells[p] != head[p]:
                return constraint_a1_single(tm, p, head[p], length), constraint_a2(tm, p, length)
            continue
        window = cells[p - m - 1 : p - m + 3]
        y = tm.delta(window)
        if cells[p] != y:
            return constraint_a1_window(tm, p - m - 1, window, y, length), constraint_a2(tm, p, length)
    return None
