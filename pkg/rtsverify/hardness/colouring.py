"""
Graph colouring as a separability instance: configurations are edge
encodings plus the all-zero word, every edge steps to every edge, and a
constraint is a colouring satisfied by the edges it colours properly.
"""

from __future__ import annotations

import itertools
import logging
from typing import Iterable, Optional

from ..automata.alphabet import Alphabet, PairAlphabet, Word
from ..automata.dfa import Dfa
from ..automata.nfa import Nfa
from ..automata.transducer import Transducer
from ..errors import UsageError
from ..frameworks.framework import Framework
from ..verification.instance import SafetyInstance

logger = logging.getLogger(__name__)

COLOURS = ("R", "G", "B")
Edge = tuple[int, int]


def _check_graph(num_vertices: int, edges: Iterable[Edge]) -> list[Edge]:
    out: list[Edge] = []
    for a, b in edges:
        if not (1 <= a <= num_vertices and 1 <= b <= num_vertices) or a == b:
            raise UsageError(f"edge ({a}, {b}) is not an edge between distinct vertices of 1..{num_vertices}")
        e = (min(a, b), max(a, b))
        if e not in out:
            out.append(e)
    if not out:
        raise UsageError("graph needs at least one edge")
    return out


def edge_word(num_vertices: int, edge: Edge) -> Word:
    return tuple("1" if v in edge else "0" for v in range(1, num_vertices + 1))


def colouring_framework(sigma: Alphabet) -> Framework:
    """A colouring satisfies a word with exactly two 1s at differently coloured positions."""
    gamma = Alphabet(COLOURS, name="colours")
    pa = PairAlphabet(gamma, sigma)
    one = sigma.id("1")

    def step(key, k):
        i, j = pa.split(k)
        if i == pa.lpad or j == pa.rpad:
            return None
        if j != one:
            return key
        if key == ("none",):
            return ("one", i)
        if key[0] == "one":
            return ("two", key[1] != i)
        return None

    interp = Dfa.explore(pa, ("none",), step, lambda key: key == ("two", True))
    return Framework(gamma, sigma, Nfa.universal(gamma), interp, "colourings", length_uniform=True)


def colouring_instance(num_vertices: int, edges: Iterable[Edge], name: str = "colouring") -> SafetyInstance:
    """
    Initial set: the first edge; unsafe set: the all-zero word. The zero
    word is separable from the edge iff the graph is 3-colourable.
    """
    edges = _check_graph(num_vertices, edges)
    sigma = Alphabet(["0", "1"], name="bits")
    words = [edge_word(num_vertices, e) for e in edges]
    delta = Transducer.from_pairs(sigma, sigma, itertools.product(words, words))
    inst = SafetyInstance.build(
        sigma,
        delta,
        Nfa.from_word(sigma, words[0]),
        {"zero": Nfa.from_word(sigma, ("0",) * num_vertices)},
        colouring_framework(sigma),
        name=name,
    )
    logger.debug("colouring instance %s: %d vertices, %d edges", name, num_vertices, len(edges))
    return inst


def is_proper(colouring: Word, edges: Iterable[Edge]) -> bool:
    return all(colouring[a - 1] != colouring[b - 1] for a, b in edges)


def brute_force_colouring(num_vertices: int, edges: Iterable[Edge]) -> Optional[Word]:
    edges = _check_graph(num_vertices, edges)
    for c in itertools.product(COLOURS, repeat=num_vertices):
        if is_proper(c, edges):
            return c
    return None
