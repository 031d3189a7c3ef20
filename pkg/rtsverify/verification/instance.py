from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..automata.alphabet import Alphabet, Word
from ..automata.dfa import Dfa
from ..automata.nfa import Nfa, remove_epsilon
from ..automata.transducer import Transducer
from ..errors import UsageError, alphabet_mismatch
from ..frameworks.framework import Framework


@dataclass(frozen=True, eq=False)
class SafetyInstance:
    """
    A regular transition system with its initial set, one active unsafe set
    and the framework used to abstract it. `properties` holds every named
    unsafe set; `c_unsafe` is the one selected by `prop`.
    """

    sigma: Alphabet
    delta: Transducer
    c_init: Nfa
    properties: dict[str, Nfa]
    framework: Framework
    prop: str = ""
    name: str = "instance"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.delta.left != self.sigma or self.delta.right != self.sigma:
            raise alphabet_mismatch(self.delta.left, self.sigma, "transition relation")
        if self.c_init.alphabet != self.sigma:
            raise alphabet_mismatch(self.c_init.alphabet, self.sigma, "initial set")
        if self.framework.sigma != self.sigma:
            raise alphabet_mismatch(self.framework.sigma, self.sigma, "framework")
        if not self.properties:
            raise UsageError(f"instance '{self.name}' has no unsafe set")
        for key, nfa in self.properties.items():
            if nfa.alphabet != self.sigma:
                raise alphabet_mismatch(nfa.alphabet, self.sigma, f"unsafe set '{key}'")
        if not self.prop:
            object.__setattr__(self, "prop", next(iter(self.properties)))
        if self.prop not in self.properties:
            raise UsageError(f"unknown property {self.prop!r}; instance '{self.name}' has {list(self.properties)}")

    @staticmethod
    def build(
        sigma: Alphabet,
        delta: Transducer,
        c_init: Nfa,
        c_unsafe,
        framework: Framework,
        name: str = "instance",
    ) -> "SafetyInstance":
        """Normalise the parts (valid convolutions, no epsilon moves) and wrap them."""
        props = c_unsafe if isinstance(c_unsafe, dict) else {"unsafe": c_unsafe}
        return SafetyInstance(
            sigma=sigma,
            delta=delta.valid(),
            c_init=remove_epsilon(c_init),
            properties={k: remove_epsilon(v) for k, v in props.items()},
            framework=framework,
            name=name,
        )

    @property
    def c_unsafe(self) -> Nfa:
        return self.properties[self.prop]

    @property
    def gamma(self) -> Alphabet:
        return self.framework.gamma

    def select(self, prop: str) -> "SafetyInstance":
        """Same system with another unsafe set; derived automata that do not depend on it are shared."""
        other = replace(self, prop=prop)
        for key in ("nonind", "nonind_full", "ind"):
            if key in self._cache:
                other._cache[key] = self._cache[key]
        return other

    def with_framework(self, framework: Framework) -> "SafetyInstance":
        return SafetyInstance(
            sigma=self.sigma,
            delta=self.delta,
            c_init=self.c_init,
            properties=self.properties,
            framework=framework,
            prop=self.prop,
            name=self.name,
        )


# -------------------------
# Results
# -------------------------
class AutomatonSize(BaseModel):
    model_config = ConfigDict(extra="forbid")
    trim: int
    complete: int


class Verdict(BaseModel):
    """Outcome of one AbstractSafety check for one property."""

    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)

    # declared before the `property` field, which shadows the builtin in this body
    @property
    def kind(self) -> str:
        return "Safe" if self.safe else "NotAbstractSafe"

    safe: bool
    mode: str = "direct"
    property: str = "unsafe"
    framework: str = ""
    witness: Optional[tuple[Word, Word]] = None
    certificate: Optional[Dfa] = Field(default=None, exclude=True)
    sizes: dict[str, AutomatonSize] = Field(default_factory=dict)
    stats: dict[str, Any] = Field(default_factory=dict)
