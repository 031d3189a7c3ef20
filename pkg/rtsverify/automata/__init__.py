from .alphabet import PAD, Alphabet, PairAlphabet, PowersetAlphabet, ProductAlphabet, TaggedAlphabet
from .dfa import Dfa, EquivalenceResult, complement, determinize, equivalent, minimize, sizes
from .nfa import Nfa, accepts, intersect, is_empty, trim, union
from .transducer import (
    Transducer,
    complement_relation,
    compose,
    convolve,
    identity_on,
    image,
    inverse,
    is_length_preserving,
    preimage,
    project,
)
