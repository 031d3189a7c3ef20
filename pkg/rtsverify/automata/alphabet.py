from __future__ import annotations

from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence, Union

from ..errors import UsageError
from ..tools.check_tools import CheckTools

PAD = "_"

Word = tuple[str, ...]
WordLike = Union[str, Sequence[str]]


class Alphabet:
    """
    Ordered set of symbol names interned to dense ids 0..size-1.
    Two alphabets are equal when their symbol tuples are equal; the name is
    only used in messages.
    """

    def __init__(self, symbols: Iterable[str], name: str = "alphabet", validate: bool = True):
        self.symbols: tuple[str, ...] = tuple(symbols)
        self.name = name
        CheckTools.reject_duplicates(self.symbols)
        if validate:
            for s in self.symbols:
                CheckTools.reject_bad_symbol(s)

    @cached_property
    def index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.symbols)}

    @property
    def size(self) -> int:
        return len(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __contains__(self, sym: object) -> bool:
        return sym in self.index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r}, {list(self.symbols)})"

    def id(self, sym: str) -> int:
        try:
            return self.index[sym]
        except KeyError:
            raise UsageError(f"unknown symbol {sym!r} for alphabet '{self.name}' {list(self.symbols)}") from None

    def encode(self, word: WordLike) -> tuple[int, ...]:
        return tuple(self.id(s) for s in self.parse_word(word))

    def decode(self, ids: Iterable[int]) -> Word:
        return tuple(self.symbols[i] for i in ids)

    def parse_word(self, word: WordLike) -> Word:
        """
        Accepts a sequence of symbol names or a string. Strings are split on
        whitespace when they contain any, read character-wise when every symbol
        is a single character, or taken as one symbol otherwise.
        """
        if not isinstance(word, str):
            return tuple(word)
        text = word.strip()
        if not text:
            return ()
        if any(ch.isspace() for ch in text):
            return tuple(text.split())
        if text in self.index:
            return (text,)
        if all(len(s) == 1 for s in self.symbols):
            return tuple(text)
        raise UsageError(f"cannot split word {word!r} over alphabet '{self.name}'; separate symbols by spaces")

    def words(self, length: int) -> Iterator[Word]:
        """All words of the given length in lexicographic id order."""
        for w in product(self.symbols, repeat=length):
            yield tuple(w)

    def words_up_to(self, max_len: int) -> Iterator[Word]:
        for n in range(max_len + 1):
            yield from self.words(n)


class PairAlphabet(Alphabet):
    """
    Letters of convolutions: pairs over left_# x right_# without the
    all-pad letter. Pair (i, j) has id i*(|right|+1)+j, where id |left|
    (resp. |right|) stands for the pad on that track.
    """

    def __init__(self, left: Alphabet, right: Alphabet):
        self.left = left
        self.right = right
        self.lpad = left.size
        self.rpad = right.size
        self.width = right.size + 1
        lnames = list(left.symbols) + [PAD]
        rnames = list(right.symbols) + [PAD]
        names = [f"{a}/{b}" for a in lnames for b in rnames][:-1]
        super().__init__(names, name=f"{left.name}x{right.name}", validate=False)

    def pair(self, i: int, j: int) -> int:
        return i * self.width + j

    def split(self, k: int) -> tuple[int, int]:
        return divmod(k, self.width)

    def is_padded(self, k: int) -> bool:
        i, j = divmod(k, self.width)
        return i == self.lpad or j == self.rpad

    def swapped(self) -> "PairAlphabet":
        return PairAlphabet(self.right, self.left)

    def letter(self, a: str, b: str) -> int:
        i = self.lpad if a == PAD else self.left.id(a)
        j = self.rpad if b == PAD else self.right.id(b)
        if i == self.lpad and j == self.rpad:
            raise UsageError("the letter _/_ is not part of any convolution")
        return self.pair(i, j)


class PowersetAlphabet(Alphabet):
    """2^Σ; letter k is the subset whose bitmask is k, named like {t,n}."""

    def __init__(self, base: Alphabet):
        self.base = base
        names = []
        for mask in range(1 << base.size):
            members = [base.symbols[i] for i in range(base.size) if mask >> i & 1]
            names.append("{" + ",".join(members) + "}")
        super().__init__(names, name=f"2^{base.name}", validate=False)

    def contains(self, letter: int, sym: int) -> bool:
        return bool(letter >> sym & 1)


class ProductAlphabet(Alphabet):
    """Γ1 x ... x Γk for convolution frameworks, letters named a|b."""

    def __init__(self, parts: Sequence[Alphabet]):
        self.parts = tuple(parts)
        self.sizes = tuple(p.size for p in self.parts)
        names = ["|".join(combo) for combo in product(*(p.symbols for p in self.parts))]
        super().__init__(names, name="x".join(p.name for p in self.parts), validate=False)

    def combine(self, ids: Sequence[int]) -> int:
        k = 0
        for i, size in zip(ids, self.sizes):
            k = k * size + i
        return k

    def components(self, k: int) -> tuple[int, ...]:
        out = []
        for size in reversed(self.sizes):
            k, r = divmod(k, size)
            out.append(r)
        return tuple(reversed(out))


class TaggedAlphabet(Alphabet):
    """Disjoint union of two alphabets; symbols tagged '1:' / '2:'."""

    def __init__(self, first: Alphabet, second: Alphabet):
        self.first = first
        self.second = second
        names = [f"1:{s}" for s in first.symbols] + [f"2:{s}" for s in second.symbols]
        super().__init__(names, name=f"{first.name}+{second.name}", validate=False)

    def side(self, k: int) -> tuple[int, int]:
        if k < self.first.size:
            return 1, k
        return 2, k - self.first.size
