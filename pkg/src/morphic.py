#!/usr/bin/env python3
"""
Morphic sequences for seqlab
Morphisms, fixed points, and the morphic presentation of automatic sequences

A sequence prefix is produced either morphically, as g(f^omega(a)) expanded
lazily with a work queue, or automatically, as s(n) = tau(run(rep(n))). The
product construction turns a numeration DFA and a binary DFAO into a morphism
phi and an erasing coding nu with s = nu(phi^omega(alpha)).
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.automata import Dfao, LetterOutOfAlphabet, ProductAutomaton, iter_language, run
from src.numeration import PositionalSystem
from src.utils import CapacityExceeded, SeqlabError, format_word

logger = logging.getLogger(__name__)

HEAD_LETTER = "α"
BINARY_ALPHABET = (0, 1)
DEFAULT_MAX_LETTERS = 2**26


class MorphismError(SeqlabError):
    """Base class for morphism errors."""

    pass


class NotProlongable(MorphismError):
    """Raised when f(a) does not start with a, or f(a) = a."""

    pass


class FiniteImage(MorphismError):
    """Raised when the generated sequence is finite and shorter than requested."""

    pass


class NonBinaryOutput(MorphismError):
    """Raised when a DFAO output is not in {0, 1}."""

    pass


class Morphism:
    """
    Morphism given by the images of its domain letters.

    Example:
        >>> cantor = Morphism({"a": "aba", "b": "bbb"})
        >>> cantor.apply("ab")  # ('a', 'b', 'a', 'b', 'b', 'b')

    Attributes:
        images (dict): letter -> tuple of letters, in domain order
    """

    def __init__(self, images: Dict[Hashable, Iterable[Hashable]]):
        if not images:
            raise MorphismError("A morphism needs at least one letter")
        self.images: Dict[Hashable, Tuple[Hashable, ...]] = {
            letter: tuple(image) for letter, image in images.items()
        }

    @property
    def domain(self) -> Tuple[Hashable, ...]:
        return tuple(self.images)

    @property
    def is_coding(self) -> bool:
        return all(len(image) == 1 for image in self.images.values())

    def is_endomorphism(self) -> bool:
        letters = set(self.images)
        return all(set(image) <= letters for image in self.images.values())

    def apply(self, word: Iterable[Hashable]) -> Tuple[Hashable, ...]:
        produced: List[Hashable] = []
        for letter in word:
            try:
                produced.extend(self.images[letter])
            except KeyError:
                raise LetterOutOfAlphabet(f"Letter {letter!r} is not in the morphism domain") from None
        return tuple(produced)

    def compose(self, inner: "Morphism") -> "Morphism":
        """self o inner: x -> self(inner(x))."""
        return Morphism({letter: self.apply(image) for letter, image in inner.images.items()})

    def iterate(self, word: Iterable[Hashable], times: int) -> Tuple[Hashable, ...]:
        result = tuple(word)
        for _ in range(times):
            result = self.apply(result)
        return result

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return self.images == other.images

    __hash__ = None

    def __repr__(self) -> str:
        shown = ", ".join(f"{letter}->{format_word(image)}" for letter, image in self.images.items())
        return f"Morphism({shown})"


def apply(morphism: Morphism, word: Iterable[Hashable]) -> Tuple[Hashable, ...]:
    return morphism.apply(word)


@dataclass(frozen=True, eq=False)
class MorphicSpec:
    """
    Morphic sequence g(f^omega(a)).

    Attributes:
        morphism (Morphism): Self-morphism f, prolongable on seed
        seed: Start letter a
        coding (Morphism | None): g; None means the identity. Letters may be erased.
        output_alphabet (tuple | None): Alphabet of the produced prefix
        name (str): Provenance tag
    """

    morphism: Morphism
    seed: Hashable
    coding: Optional[Morphism] = None
    output_alphabet: Optional[Tuple[Hashable, ...]] = None
    name: str = "morphic"

    def __post_init__(self):
        if self.seed not in self.morphism.images:
            raise MorphismError(f"Seed {self.seed!r} is not in the morphism domain")
        if not self.morphism.is_endomorphism():
            raise MorphismError("The morphism must map its domain into itself")
        if self.coding is not None:
            missing = [letter for letter in self.morphism.domain if letter not in self.coding.images]
            if missing:
                raise MorphismError(f"Coding has no image for {missing}")

    def check_prolongable(self) -> None:
        image = self.morphism.images[self.seed]
        if not image or image[0] != self.seed:
            raise NotProlongable(f"f({self.seed}) = {format_word(image)} does not start with {self.seed}")
        if len(image) == 1:
            raise NotProlongable(f"f({self.seed}) = {self.seed}, the fixed point is a single letter")

    def default_alphabet(self) -> Tuple[Hashable, ...]:
        if self.output_alphabet is not None:
            return tuple(self.output_alphabet)
        coding = self.coding
        letters: List[Hashable] = []
        for letter in self.morphism.domain:
            for symbol in (coding.images[letter] if coding else (letter,)):
                if symbol not in letters:
                    letters.append(symbol)
        if set(letters) <= set(BINARY_ALPHABET):
            return BINARY_ALPHABET
        return tuple(letters)


class SequencePrefix:
    """
    Immutable prefix s(0..N-1) stored as alphabet indices in a numpy array.

    For binary sequences the indices are the bits themselves, which is what
    every measure consumes.

    Attributes:
        alphabet (tuple): Letters, index i stands for alphabet[i]
        provenance (str): Generator and parameters
    """

    def __init__(self, indices: np.ndarray, alphabet: Sequence[Hashable], provenance: str = ""):
        alphabet = tuple(alphabet)
        if not alphabet:
            raise ValueError("Alphabet must be non-empty")
        array = np.asarray(indices)
        if array.ndim != 1:
            raise ValueError("Prefix indices must be one-dimensional")
        if array.size and (array.min() < 0 or array.max() >= len(alphabet)):
            raise ValueError("Prefix indices must address the alphabet")
        array = array.astype(np.min_scalar_type(max(len(alphabet) - 1, 1)), copy=True)
        array.setflags(write=False)
        self._indices = array
        self.alphabet = alphabet
        self.provenance = provenance

    @classmethod
    def from_letters(
        cls,
        letters: Iterable[Hashable],
        alphabet: Optional[Sequence[Hashable]] = None,
        provenance: str = "",
    ) -> "SequencePrefix":
        letters = list(letters)
        if alphabet is None:
            present = set(letters)
            if present <= set(BINARY_ALPHABET):
                alphabet = BINARY_ALPHABET
            else:
                alphabet = tuple(sorted(present, key=str))
        position = {letter: i for i, letter in enumerate(alphabet)}
        try:
            indices = np.fromiter((position[letter] for letter in letters), dtype=np.int64, count=len(letters))
        except KeyError as e:
            raise ValueError(f"Letter {e.args[0]!r} is not in the alphabet {tuple(alphabet)}") from None
        return cls(indices, alphabet, provenance)

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    @property
    def is_binary(self) -> bool:
        return len(self.alphabet) <= 2

    @property
    def bits(self) -> np.ndarray:
        """Indices as int64 bits; only meaningful for binary prefixes."""
        if not self.is_binary:
            raise NonBinaryOutput(f"Sequence over {self.alphabet} is not binary")
        return self._indices.astype(np.int64)

    @property
    def signs(self) -> np.ndarray:
        """(-1)^s(n) as int64."""
        return 1 - 2 * self.bits

    def letters(self) -> Tuple[Hashable, ...]:
        return tuple(self.alphabet[i] for i in self._indices.tolist())

    def to_text(self) -> str:
        return "".join(str(letter) for letter in self.letters())

    def head(self, count: int) -> "SequencePrefix":
        if count > len(self):
            raise CapacityExceeded(f"Prefix has {len(self)} symbols, {count} requested")
        return SequencePrefix(self._indices[:count], self.alphabet, self.provenance)

    def flipped(self) -> "SequencePrefix":
        """Binary complement."""
        return SequencePrefix(1 - self.bits, BINARY_ALPHABET, f"complement of {self.provenance}")

    def __len__(self) -> int:
        return int(self._indices.size)

    def __getitem__(self, n: int) -> Hashable:
        return self.alphabet[int(self._indices[n])]

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, SequencePrefix):
            return NotImplemented
        return self.letters() == other.letters()

    __hash__ = None

    def __repr__(self) -> str:
        return f"SequencePrefix(len={len(self)}, alphabet={self.alphabet}, provenance={self.provenance!r})"


def iter_fixed_point(
    morphism: Morphism, seed: Hashable, max_letters: int = DEFAULT_MAX_LETTERS
) -> Iterator[Hashable]:
    """
    Letters of f^omega(seed), produced lazily.

    The word is extended with f(word[i]) for i = 1, 2, ... which keeps it a
    prefix of the fixed point; the iteration ends when the fixed point is
    finite.

    Raises:
        CapacityExceeded: If more than max_letters letters would be held
    """
    word = list(morphism.images[seed])
    emitted = 0
    cursor = 1
    while True:
        while emitted < len(word):
            yield word[emitted]
            emitted += 1
        if cursor >= len(word):
            return
        word.extend(morphism.images[word[cursor]])
        cursor += 1
        if len(word) > max_letters:
            raise CapacityExceeded(f"Fixed point expansion exceeded {max_letters} letters")


def fixed_point_prefix(
    spec: MorphicSpec, length: int, max_letters: int = DEFAULT_MAX_LETTERS
) -> SequencePrefix:
    """
    First length letters of g(f^omega(a)); erased letters do not count.

    Raises:
        NotProlongable: If f is not prolongable on the seed
        FiniteImage: If the sequence ends before length letters
        CapacityExceeded: If the expansion needs more than max_letters letters
    """
    if length < 0:
        raise ValueError(f"length must be non-negative, got {length}")
    spec.check_prolongable()

    coding = spec.coding
    produced: List[Hashable] = []
    if length:
        for letter in iter_fixed_point(spec.morphism, spec.seed, max_letters):
            if coding is None:
                produced.append(letter)
            else:
                produced.extend(coding.images[letter])
            if len(produced) >= length:
                break

    if len(produced) < length:
        raise FiniteImage(f"Sequence {spec.name} is finite with {len(produced)} letters")

    prefix = SequencePrefix.from_letters(
        produced[:length], spec.default_alphabet(), provenance=f"{spec.name} N={length}"
    )
    logger.debug(f"Generated {length} letters of {spec.name} morphically")
    return prefix


def _check_binary(outputs: Iterable[Any]) -> None:
    extra = sorted(set(outputs) - set(BINARY_ALPHABET), key=str)
    if extra:
        raise NonBinaryOutput(f"DFAO outputs {extra} are not binary")


def build_phi_nu(p: ProductAutomaton) -> Tuple[Morphism, Morphism]:
    """
    Morphism phi and erasing coding nu with s = nu(phi^omega(alpha)).

    phi(alpha) = alpha (a0, r0) and phi((q, r)) lists Delta((q, r), c) over the
    letters c in alphabet order, missing transitions contributing nothing.
    nu erases alpha and maps (q, r) to tau(r).
    """
    _check_binary(p.output.values())
    if HEAD_LETTER in p.states:
        raise MorphismError(f"Head letter {HEAD_LETTER!r} collides with a product state")

    phi_images: Dict[Hashable, Tuple[Hashable, ...]] = {HEAD_LETTER: (HEAD_LETTER, p.initial)}
    for state in p.states:
        phi_images[state] = tuple(
            target
            for target in (p.step(state, letter) for letter in p.alphabet)
            if target is not None
        )

    nu_images: Dict[Hashable, Tuple[Hashable, ...]] = {HEAD_LETTER: ()}
    for state in p.states:
        nu_images[state] = (p.output[state],)

    return Morphism(phi_images), Morphism(nu_images)


def product_morphic_spec(
    p: ProductAutomaton,
    phi: Optional[Morphism] = None,
    nu: Optional[Morphism] = None,
    name: str = "product",
) -> MorphicSpec:
    """MorphicSpec of nu(phi^omega(alpha)) for a product automaton."""
    if phi is None or nu is None:
        built_phi, built_nu = build_phi_nu(p)
        phi = phi or built_phi
        nu = nu or built_nu
    return MorphicSpec(phi, HEAD_LETTER, nu, output_alphabet=BINARY_ALPHABET, name=name)


def automatic_prefix(
    dfao: Dfao, system: PositionalSystem, length: int, max_prefix: Optional[int] = None
) -> SequencePrefix:
    """s(n) = tau(run(dfao, rep(n))) for n < length."""
    if max_prefix is not None and length > max_prefix:
        raise CapacityExceeded(f"Requested {length} symbols, capacity is {max_prefix}")

    outputs = [run(dfao, system.rep(n)).output for n in range(length)]
    alphabet = BINARY_ALPHABET if set(dfao.output.values()) <= set(BINARY_ALPHABET) else None
    return SequencePrefix.from_letters(outputs, alphabet, provenance=f"automatic {system.name} N={length}")


@dataclass(frozen=True)
class CrossCheck:
    """Outcome of cross_check_morphic_vs_automatic; index is None when ok."""

    ok: bool
    index: Optional[int] = None
    kind: Optional[str] = None
    length: int = 0


def cross_check_morphic_vs_automatic(
    p: ProductAutomaton,
    system: PositionalSystem,
    length: int,
    phi: Optional[Morphism] = None,
    nu: Optional[Morphism] = None,
    max_letters: int = DEFAULT_MAX_LETTERS,
) -> CrossCheck:
    """
    Compare nu(phi^omega(alpha)) with the automatic sequence on length symbols.

    Also checks that letter n+1 of phi^omega(alpha) is the state reached by
    the n-th word of the language in genealogical order. phi and nu default
    to build_phi_nu(p); passing others runs the comparison on them.
    """
    built_phi, built_nu = build_phi_nu(p)
    phi = phi or built_phi
    nu = nu or built_nu

    raw: List[Hashable] = []
    if length:
        for letter in iter_fixed_point(phi, HEAD_LETTER, max_letters):
            raw.append(letter)
            if len(raw) > length:
                break

    words = iter_language(p.dfa)
    for n in range(length):
        expected = run(p, next(words)).state
        if n + 1 >= len(raw) or raw[n + 1] != expected:
            logger.warning(f"Fixed point letter {n + 1} differs from the state of word {n}")
            return CrossCheck(ok=False, index=n, kind="state", length=length)

    morphic = fixed_point_prefix(
        MorphicSpec(phi, HEAD_LETTER, nu, output_alphabet=BINARY_ALPHABET, name="morphic"),
        length,
        max_letters,
    )
    automatic = automatic_prefix(p.dfao, system, length)
    differing = np.flatnonzero(morphic.indices != automatic.indices)
    if differing.size:
        index = int(differing[0])
        logger.warning(f"Morphic and automatic sequences differ at index {index}")
        return CrossCheck(ok=False, index=index, kind="output", length=length)

    logger.info(f"Morphic and automatic constructions agree on {length} symbols")
    return CrossCheck(ok=True, length=length)
