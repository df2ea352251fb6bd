#!/usr/bin/env python3
"""
Presets for seqlab
Shipped numeration systems and sequences

Systems: base2, base3, base10, fibonacci (Zeckendorf), phi2, ex41 (the
Bertrand system U(n+1) = 3U(n) + 1, which is not a Parry system and is given
by an explicit DFA for its language).

Sequences: thue_morse, fib_sum_digits, cantor, ex41, champernowne,
periodic:<pattern>, constant (or constant:<bit>).
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from src.automata import Dfa, Dfao, ProductAutomaton, build_a_beta, build_l_beta_dfa, product
from src.beta_systems import BetaSpec, LinearRecurrence, build_recurrence
from src.morphic import (
    BINARY_ALPHABET,
    DEFAULT_MAX_LETTERS,
    MorphicSpec,
    Morphism,
    SequencePrefix,
    automatic_prefix,
    fixed_point_prefix,
    product_morphic_spec,
)
from src.numeration import DEFAULT_PROBE_DEPTH, PositionalSystem
from src.utils import CapacityExceeded, SeqlabError

logger = logging.getLogger(__name__)

PARRY_SYSTEMS: Dict[str, str] = {
    "base2": "(1)",
    "base3": "(2)",
    "base10": "(9)",
    "fibonacci": "(10)",
    "phi2": "2(1)",
}

CANTOR_MORPHISM = Morphism({"a": "aba", "b": "bbb"})
THUE_MORSE_MORPHISM = Morphism({0: (0, 1), 1: (1, 0)})


class UnknownPreset(SeqlabError):
    """Raised when a preset name is not known."""

    pass


@dataclass(frozen=True, eq=False)
class NumerationPreset:
    """
    A positional system together with the DFA of its numeration language.

    Attributes:
        name (str): Preset name
        system (PositionalSystem): rep/val over U
        language_dfa (Dfa): DFA accepting L_U (no leading zeros)
        beta (BetaSpec | None): Expansion of 1 for Parry systems
        padded_dfa (Dfa | None): A_beta, accepting 0*L_U, for Parry systems
    """

    name: str
    system: PositionalSystem
    language_dfa: Dfa
    beta: Optional[BetaSpec] = None
    padded_dfa: Optional[Dfa] = None

    @property
    def recurrence(self) -> LinearRecurrence:
        return self.system.recurrence


@dataclass(frozen=True, eq=False)
class SequencePreset:
    """
    A named binary sequence.

    Automatic sequences carry their numeration preset and DFAO; their long
    prefixes are produced through the morphic presentation of the product
    automaton. Other sequences carry a direct generator.
    """

    name: str
    numeration: Optional[NumerationPreset] = None
    dfao: Optional[Dfao] = None
    generator: Optional[Callable[[int], SequencePrefix]] = field(default=None, repr=False)

    @property
    def is_automatic(self) -> bool:
        return self.dfao is not None

    def product(self) -> ProductAutomaton:
        if not self.is_automatic:
            raise UnknownPreset(f"Sequence {self.name} is not automatic")
        return product(self.numeration.language_dfa, self.dfao)

    def morphic_spec(self) -> MorphicSpec:
        return product_morphic_spec(self.product(), name=self.name)

    def prefix(self, length: int, max_letters: int = DEFAULT_MAX_LETTERS) -> SequencePrefix:
        if self.is_automatic:
            prefix = fixed_point_prefix(self.morphic_spec(), length, max_letters)
        else:
            if length > max_letters:
                raise CapacityExceeded(f"Requested {length} symbols, capacity is {max_letters}")
            prefix = self.generator(length)
        logger.debug(f"Generated {length} symbols of {self.name}")
        return SequencePrefix(prefix.indices, prefix.alphabet, provenance=f"{self.name} N={length}")

    def automatic_prefix(self, length: int) -> SequencePrefix:
        """Direct s(n) = tau(run(rep(n))), used to cross-check the morphic route."""
        if not self.is_automatic:
            raise UnknownPreset(f"Sequence {self.name} is not automatic")
        return automatic_prefix(self.dfao, self.numeration.system, length)


def _parity_dfao(alphabet: Tuple[int, ...]) -> Dfao:
    """Sum of digits mod 2: letter 1 toggles, every other letter loops."""
    transitions = {}
    for state in (0, 1):
        for letter in alphabet:
            transitions[(state, letter)] = 1 - state if letter == 1 else state
    return Dfao((0, 1), alphabet, 0, transitions, {0: 0, 1: 1})


def sum_of_digits_dfao() -> Dfao:
    """Two-state DFAO for the parity of the number of 1s over {0, 1}."""
    return _parity_dfao((0, 1))


def cantor_dfao() -> Dfao:
    """Base-3 DFAO: output 1 once a digit 1 has been read."""
    transitions = {("a", 0): "a", ("a", 1): "b", ("a", 2): "a"}
    transitions.update({("b", letter): "b" for letter in (0, 1, 2)})
    return Dfao(("a", "b"), (0, 1, 2), "a", transitions, {"a": 0, "b": 1})


def ex41_language_dfa() -> Dfa:
    """L_U for U(n+1) = 3U(n) + 1: the empty word, (1|2)(0|1|2)*(30*)? and 30*."""
    transitions = {
        ("a0'", 1): "a0",
        ("a0'", 2): "a0",
        ("a0'", 3): "a1",
        ("a0", 0): "a0",
        ("a0", 1): "a0",
        ("a0", 2): "a0",
        ("a0", 3): "a1",
        ("a1", 0): "a1",
    }
    states = ("a0'", "a0", "a1")
    return Dfa(states, (0, 1, 2, 3), "a0'", transitions, frozenset(states))


def ex41_dfao() -> Dfao:
    """Generates tau(x) for the fixed point x of a -> aaab, b -> b (output 1 once 3 is read)."""
    transitions = {("a", letter): "a" for letter in (0, 1, 2)}
    transitions[("a", 3)] = "b"
    transitions.update({("b", letter): "b" for letter in (0, 1, 2, 3)})
    return Dfao(("a", "b"), (0, 1, 2, 3), "a", transitions, {"a": 0, "b": 1})


@lru_cache(maxsize=None)
def _parry_preset(name: str, probe_depth: int) -> NumerationPreset:
    beta = BetaSpec.parse(PARRY_SYSTEMS[name])
    system = PositionalSystem(build_recurrence(beta), probe_depth=probe_depth, name=name)
    padded = build_a_beta(beta)
    return NumerationPreset(
        name=name,
        system=system,
        language_dfa=build_l_beta_dfa(padded),
        beta=beta,
        padded_dfa=padded,
    )


@lru_cache(maxsize=None)
def _ex41_preset(probe_depth: int) -> NumerationPreset:
    system = PositionalSystem(LinearRecurrence.from_affine(3, 1), probe_depth=probe_depth, name="ex41")
    return NumerationPreset(name="ex41", system=system, language_dfa=ex41_language_dfa())


def system_names() -> Tuple[str, ...]:
    return tuple(PARRY_SYSTEMS) + ("ex41",)


def get_system(name: str, probe_depth: int = DEFAULT_PROBE_DEPTH) -> NumerationPreset:
    """Numeration preset by name."""
    if name in PARRY_SYSTEMS:
        return _parry_preset(name, probe_depth)
    if name == "ex41":
        return _ex41_preset(probe_depth)
    raise UnknownPreset(f"Unknown system preset {name!r}; choose from {', '.join(system_names())}")


def champernowne_prefix(length: int) -> SequencePrefix:
    """0 1 10 11 100 101 ...: binary representations of 0, 1, 2, ... concatenated."""
    bits = []
    n = 0
    while len(bits) < length:
        bits.extend(int(c) for c in format(n, "b"))
        n += 1
    return SequencePrefix(np.array(bits[:length], dtype=np.int64), BINARY_ALPHABET, "champernowne")


def periodic_prefix(pattern: str, length: int) -> SequencePrefix:
    """Pattern repeated; letters are the bits 0 and 1."""
    if not pattern or set(pattern) - {"0", "1"}:
        raise UnknownPreset(f"Periodic pattern must be a non-empty word over 0/1, got {pattern!r}")
    period = np.array([int(c) for c in pattern], dtype=np.int64)
    return SequencePrefix(np.resize(period, length), BINARY_ALPHABET, f"periodic:{pattern}")


def constant_prefix(bit: int, length: int) -> SequencePrefix:
    return SequencePrefix(np.full(length, bit, dtype=np.int64), BINARY_ALPHABET, f"constant:{bit}")


def sequence_names() -> Tuple[str, ...]:
    return ("thue_morse", "fib_sum_digits", "cantor", "ex41", "champernowne", "periodic:<pattern>", "constant")


def get_sequence(name: str, probe_depth: int = DEFAULT_PROBE_DEPTH) -> SequencePreset:
    """Sequence preset by name."""
    if name == "thue_morse":
        return SequencePreset(name, get_system("base2", probe_depth), sum_of_digits_dfao())
    if name == "fib_sum_digits":
        return SequencePreset(name, get_system("fibonacci", probe_depth), sum_of_digits_dfao())
    if name == "cantor":
        return SequencePreset(name, get_system("base3", probe_depth), cantor_dfao())
    if name == "ex41":
        return SequencePreset(name, get_system("ex41", probe_depth), ex41_dfao())
    if name == "champernowne":
        return SequencePreset(name, generator=champernowne_prefix)
    if name.startswith("periodic:"):
        pattern = name.split(":", 1)[1]
        periodic_prefix(pattern, 0)
        return SequencePreset(name, generator=lambda length: periodic_prefix(pattern, length))
    if name == "constant" or name.startswith("constant:"):
        text = name.split(":", 1)[1] if ":" in name else "0"
        if text not in ("0", "1"):
            raise UnknownPreset(f"Constant sequence must be 0 or 1, got {text!r}")
        return SequencePreset(name, generator=lambda length: constant_prefix(int(text), length))
    raise UnknownPreset(f"Unknown sequence preset {name!r}; choose from {', '.join(sequence_names())}")
