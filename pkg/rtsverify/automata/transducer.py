from __future__ import annotations

from functools import cached_property
from typing import Iterable, Optional, Sequence

from ..errors import UsageError, alphabet_mismatch
from .alphabet import PAD, Alphabet, PairAlphabet, Word, WordLike
from .dfa import complement, determinize
from .nfa import Nfa, accepts, intersect, remove_epsilon, trim, words_up_to


class Transducer:
    """
    Binary relation recognised by an NFA over left_# x right_# (see
    PairAlphabet). The relation is the set of pairs whose convolution is
    accepted; values built by the operations below only accept valid
    convolutions. Use valid() to normalise an automaton read from elsewhere.
    """

    def __init__(self, left: Alphabet, right: Alphabet, auto: Nfa):
        if not isinstance(auto.alphabet, PairAlphabet) or auto.alphabet.left != left or auto.alphabet.right != right:
            raise UsageError(
                f"transducer automaton must run over '{left.name}' x '{right.name}', got '{auto.alphabet.name}'"
            )
        self.left = left
        self.right = right
        self.auto = auto

    @property
    def pairs(self) -> PairAlphabet:
        return self.auto.alphabet  # type: ignore[return-value]

    @property
    def num_states(self) -> int:
        return self.auto.num_states

    @cached_property
    def length_preserving(self) -> bool:
        return is_length_preserving(self)

    def __repr__(self) -> str:
        return f"Transducer({self.left.name}x{self.right.name}, states={self.auto.num_states})"

    def relates(self, u: WordLike, w: WordLike) -> bool:
        return accepts(self.auto, convolve(self.left.parse_word(u), self.right.parse_word(w)))

    def valid(self) -> "Transducer":
        """Restrict to valid convolutions (pad-suffix form on both tracks)."""
        return Transducer(self.left, self.right, trim(intersect(self.auto, valid_convolution_nfa(self.pairs))))

    @staticmethod
    def from_pairs(left: Alphabet, right: Alphabet, pairs: Iterable[tuple[WordLike, WordLike]]) -> "Transducer":
        """Finite relation, as a trie over convolutions."""
        pa = PairAlphabet(left, right)
        words = [convolve(left.parse_word(u), right.parse_word(w)) for u, w in pairs]
        return Transducer(left, right, Nfa.from_words(pa, words))

    @staticmethod
    def empty(left: Alphabet, right: Alphabet) -> "Transducer":
        return Transducer(left, right, Nfa.empty(PairAlphabet(left, right)))


def convolve(u: Sequence[str], w: Sequence[str]) -> Word:
    """Left-aligned overlay of u and w, the shorter padded with '_'; letters named 'a/b'."""
    u, w = tuple(u), tuple(w)
    n = max(len(u), len(w))
    return tuple(f"{u[i] if i < len(u) else PAD}/{w[i] if i < len(w) else PAD}" for i in range(n))


def deconvolve(letters: Sequence[str]) -> tuple[Word, Word]:
    left: list[str] = []
    right: list[str] = []
    for letter in letters:
        a, b = letter.split("/")
        if a != PAD:
            left.append(a)
        if b != PAD:
            right.append(b)
    return tuple(left), tuple(right)


def valid_convolution_nfa(pa: PairAlphabet) -> Nfa:
    """
    Three states: both tracks live, left track ended, right track ended.
    All final; (#,#) is not a letter of the pair alphabet.
    """
    trans = []
    for k in range(pa.size):
        i, j = pa.split(k)
        if i == pa.lpad:
            trans += [(0, k, 1), (1, k, 1)]
        elif j == pa.rpad:
            trans += [(0, k, 2), (2, k, 2)]
        else:
            trans.append((0, k, 0))
    return Nfa(pa, 3, trans, {0}, {0, 1, 2})


def is_length_preserving(t: Transducer) -> bool:
    pa = t.pairs
    return not any(pa.is_padded(k) for _, k, _ in trim(t.auto).transitions)


def inverse(t: Transducer) -> Transducer:
    pa = t.pairs
    sw = pa.swapped()
    trans = []
    for p, k, q in t.auto.transitions:
        i, j = pa.split(k)
        trans.append((p, sw.pair(j, i), q))
    a = t.auto
    return Transducer(t.right, t.left, Nfa(sw, a.num_states, trans, a.initial, a.final, a.epsilon))


def compose(t1: Transducer, t2: Transducer) -> Transducer:
    """
    Join R(t1) ; R(t2) by a product over triples (x, y, z) synchronised on the
    middle track y. Besides the joint mode there is one mode per exhausted
    side: ("L", p2) after t1 accepted and stopped, ("R", p1) after t2 did.
    Output letters (#,#) become epsilon moves.
    """
    if t1.right != t2.left:
        raise alphabet_mismatch(t1.right, t2.left, "compose")
    a1, a2 = remove_epsilon(t1.auto), remove_epsilon(t2.auto)
    pa1, pa2 = t1.pairs, t2.pairs
    out = PairAlphabet(t1.left, t2.right)
    out1, out2 = a1.out, a2.out
    f1, f2 = a1.final, a2.final
    bpad = pa1.rpad

    def emit(x: int, z: int) -> Optional[int]:
        if x == out.lpad and z == out.rpad:
            return None
        return out.pair(x, z)

    def successors(key):
        mode = key[0]
        if mode == "J":
            _, p1, p2 = key
            for k1, targets1 in out1[p1].items():
                x, y = pa1.split(k1)
                for k2, targets2 in out2[p2].items():
                    y2, z = pa2.split(k2)
                    if y2 != y:
                        continue
                    sym = emit(x, z)
                    for q1 in targets1:
                        for q2 in targets2:
                            yield sym, ("J", q1, q2)
            if p1 in f1:
                for k2, targets2 in out2[p2].items():
                    y2, z = pa2.split(k2)
                    if y2 == bpad:
                        for q2 in targets2:
                            yield out.pair(out.lpad, z), ("L", q2)
            if p2 in f2:
                for k1, targets1 in out1[p1].items():
                    x, y = pa1.split(k1)
                    if y == bpad:
                        for q1 in targets1:
                            yield out.pair(x, out.rpad), ("R", q1)
        elif mode == "L":
            p2 = key[1]
            for k2, targets2 in out2[p2].items():
                y2, z = pa2.split(k2)
                if y2 == bpad:
                    for q2 in targets2:
                        yield out.pair(out.lpad, z), ("L", q2)
        else:
            p1 = key[1]
            for k1, targets1 in out1[p1].items():
                x, y = pa1.split(k1)
                if y == bpad:
                    for q1 in targets1:
                        yield out.pair(x, out.rpad), ("R", q1)

    def is_final(key) -> bool:
        if key[0] == "J":
            return key[1] in f1 and key[2] in f2
        if key[0] == "L":
            return key[1] in f2
        return key[1] in f1

    initial = [("J", p1, p2) for p1 in sorted(a1.initial) for p2 in sorted(a2.initial)]
    return Transducer(t1.left, t2.right, trim(Nfa.explore(out, initial, successors, is_final)))


def project(t: Transducer, track: int = 1) -> Nfa:
    """Keep one track; pad letters on it become epsilon moves."""
    if track not in (1, 2):
        raise UsageError(f"track must be 1 or 2, got {track}")
    pa = t.pairs
    target = t.left if track == 1 else t.right
    pad = pa.lpad if track == 1 else pa.rpad
    trans = []
    eps = list(t.auto.epsilon)
    for p, k, q in t.auto.transitions:
        sym = pa.split(k)[track - 1]
        if sym == pad:
            eps.append((p, q))
        else:
            trans.append((p, sym, q))
    a = t.auto
    return trim(Nfa(target, a.num_states, trans, a.initial, a.final, eps))


def image(c: Nfa, t: Transducer) -> Nfa:
    """Post-image {w | (u,w) in R(t), u in L(c)} by a direct product."""
    if c.alphabet != t.left:
        raise alphabet_mismatch(c.alphabet, t.left, "image")
    c = remove_epsilon(c)
    a = remove_epsilon(t.auto)
    pa = t.pairs
    cout, tout = c.out, a.out

    def successors(key):
        qc, qt, ended = key
        for k, targets in tout[qt].items():
            x, y = pa.split(k)
            sym = None if y == pa.rpad else y
            if x == pa.lpad:
                if ended or qc in c.final:
                    for r in targets:
                        yield sym, (qc, r, True)
            elif not ended:
                for qc2 in cout[qc].get(x, ()):
                    for r in targets:
                        yield sym, (qc2, r, False)

    initial = [(qc, qt, False) for qc in sorted(c.initial) for qt in sorted(a.initial)]
    result = Nfa.explore(
        t.right, initial, successors, lambda k: k[1] in a.final and (k[2] or k[0] in c.final)
    )
    return trim(result)


def preimage(t: Transducer, c: Nfa) -> Nfa:
    """{u | (u,w) in R(t), w in L(c)}."""
    return image(c, inverse(t))


def identity_on(lang: Nfa) -> Transducer:
    lang = remove_epsilon(lang)
    pa = PairAlphabet(lang.alphabet, lang.alphabet)
    trans = [(p, pa.pair(a, a), q) for p, a, q in lang.transitions]
    return Transducer(lang.alphabet, lang.alphabet, Nfa(pa, lang.num_states, trans, lang.initial, lang.final))


def complement_relation(t: Transducer) -> Transducer:
    """All valid convolutions not accepted by t."""
    comp = complement(determinize(t.auto)).to_nfa()
    return Transducer(t.left, t.right, trim(intersect(comp, valid_convolution_nfa(t.pairs))))


def successors(t: Transducer, word: WordLike, max_len: int) -> set[Word]:
    """Words w with (word, w) in R(t) and |w| <= max_len."""
    return words_up_to(image(Nfa.from_word(t.left, word), t), max_len)
