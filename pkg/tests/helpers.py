"""Hypothesis strategies and brute-force language helpers shared by the test modules."""

from hypothesis import strategies as st

from rtsverify.automata import Alphabet, Nfa, PairAlphabet, Transducer, accepts

AB = Alphabet(["a", "b"], name="ab")


@st.composite
def nfas(draw, alphabet=AB, max_states=4, epsilon=True):
    n = draw(st.integers(1, max_states))
    state = st.integers(0, n - 1)
    trans = draw(st.lists(st.tuples(state, st.integers(0, alphabet.size - 1), state), max_size=3 * n))
    initial = draw(st.sets(state, min_size=1, max_size=2))
    final = draw(st.sets(state, max_size=n))
    eps = draw(st.lists(st.tuples(state, state), max_size=2)) if epsilon else []
    return Nfa(alphabet, n, trans, initial, final, eps)


@st.composite
def transducers(draw, left=AB, right=AB, max_states=3, length_preserving=True):
    pa = PairAlphabet(left, right)
    letters = [k for k in range(pa.size) if not (length_preserving and pa.is_padded(k))]
    n = draw(st.integers(1, max_states))
    state = st.integers(0, n - 1)
    trans = draw(st.lists(st.tuples(state, st.sampled_from(letters), state), max_size=4 * n))
    initial = draw(st.sets(state, min_size=1, max_size=1))
    final = draw(st.sets(state, min_size=1, max_size=n))
    return Transducer(left, right, Nfa(pa, n, trans, initial, final)).valid()


@st.composite
def words(draw, alphabet=AB, max_len=4):
    return tuple(draw(st.lists(st.sampled_from(alphabet.symbols), max_size=max_len)))


def language(a, max_len):
    """Accepted words of length <= max_len, by plain membership."""
    return {w for w in a.alphabet.words_up_to(max_len) if accepts(a, w)}


def shortlex(alphabet, ws):
    return min(ws, key=lambda w: (len(w), alphabet.encode(w)))
