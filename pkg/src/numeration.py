#!/usr/bin/env python3
"""
Numeration for seqlab
Greedy positional representations and genealogical enumeration

PositionalSystem implements rep/val over a linear numeration sequence U.
GenealogicalIndex implements the abstract numeration system of a regular
language: n is represented by the (n+1)-st accepted word in radix order.
"""

import bisect
import logging
import threading
from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

from src.beta_systems import LinearRecurrence
from src.utils import CapacityExceeded, SeqlabError, format_word

if TYPE_CHECKING:
    from src.automata import Dfa

logger = logging.getLogger(__name__)

DEFAULT_PROBE_DEPTH = 64
DEFAULT_MAX_WORDS = 2**22
COUNT_METHODS = ("table", "enumerate")


class DigitOutOfRange(SeqlabError):
    """Raised when a digit word uses a digit outside the system's alphabet."""

    pass


class FiniteLanguage(SeqlabError):
    """Raised when a finite language has fewer words than requested."""

    pass


class NotInLanguage(SeqlabError):
    """Raised when a word is not accepted by the indexed automaton."""

    pass


@dataclass(frozen=True)
class BertrandCheck:
    """Outcome of is_bertrand_up_to; counterexample is None when ok."""

    ok: bool
    counterexample: Optional[Tuple[int, ...]] = None
    max_len: int = 0


class PositionalSystem:
    """
    Positional numeration system built on a linear recurrence.

    Features:
    - Greedy representation rep(n) and valuation val(w) on unbounded integers
    - Digit alphabet derived from the largest ratio U(i+1)/U(i) on a probe window
    - Value cache that grows on demand (extension is serialised by a lock)

    Example:
        >>> zeckendorf = PositionalSystem(build_recurrence(BetaSpec((), (1, 0))))
        >>> zeckendorf.rep(6)  # (1, 0, 0, 1)
        >>> zeckendorf.val((1, 0, 0, 1))  # 6

    Attributes:
        recurrence (LinearRecurrence): Defining recurrence of U
        name (str): Display name
        digit_alphabet (tuple): (0, 1, ..., max_digit)
    """

    def __init__(
        self,
        recurrence: LinearRecurrence,
        probe_depth: int = DEFAULT_PROBE_DEPTH,
        name: str = "",
    ):
        if probe_depth < 1:
            raise ValueError(f"probe_depth must be >= 1, got {probe_depth}")

        self.recurrence = recurrence
        self.name = name or "custom"
        self._lock = threading.Lock()
        self._values: List[int] = recurrence.values(max(probe_depth + 2, recurrence.order))

        max_digit = 0
        for i in range(probe_depth + 1):
            upper, lower = self._values[i + 1], self._values[i]
            if upper <= lower:
                raise SeqlabError(f"U is not increasing at index {i + 1} in system {self.name}")
            max_digit = max(max_digit, -(-upper // lower) - 1)

        self.max_digit = max_digit
        self.digit_alphabet: Tuple[int, ...] = tuple(range(max_digit + 1))
        logger.debug(f"System {self.name}: digit alphabet 0..{max_digit}")

    def _ensure(self, count: int) -> None:
        if len(self._values) >= count:
            return
        with self._lock:
            self.recurrence.extend(self._values, count)

    def value(self, i: int) -> int:
        """U(i)."""
        self._ensure(i + 1)
        return self._values[i]

    def values(self, count: int) -> List[int]:
        """U(0), ..., U(count-1)."""
        self._ensure(count)
        return self._values[:count]

    def _check_digits(self, word: Sequence[int]) -> None:
        for digit in word:
            if isinstance(digit, bool) or not isinstance(digit, int) or not 0 <= digit <= self.max_digit:
                raise DigitOutOfRange(
                    f"Digit {digit!r} outside alphabet 0..{self.max_digit} of system {self.name}"
                )

    def rep(self, n: int) -> Tuple[int, ...]:
        """Greedy representation of n, most significant digit first; rep(0) is empty."""
        if n < 0:
            raise ValueError(f"n must be non-negative, got {n}")
        if n == 0:
            return ()

        while self._values[-1] <= n:
            self._ensure(len(self._values) * 2)
        top = bisect.bisect_right(self._values, n) - 1

        digits = []
        remainder = n
        for i in range(top, -1, -1):
            digit, remainder = divmod(remainder, self._values[i])
            digits.append(digit)
        return tuple(digits)

    def val(self, word: Sequence[int]) -> int:
        """Sum of c_i U(i); any word over the digit alphabet, leading zeros included."""
        word = tuple(word)
        self._check_digits(word)
        self._ensure(len(word))
        size = len(word)
        return sum(digit * self._values[size - 1 - i] for i, digit in enumerate(word))

    def is_greedy(self, word: Sequence[int]) -> bool:
        """True iff word is rep(n) for some n (the empty word represents 0)."""
        word = tuple(word)
        self._check_digits(word)
        if word and word[0] == 0:
            return False
        return self.rep(self.val(word)) == word

    def greedy_words_of_length(self, length: int) -> Iterator[Tuple[int, ...]]:
        """Words of L_U with the given length: rep(n) for n in [U(length-1), U(length))."""
        if length == 0:
            yield ()
            return
        for n in range(self.value(length - 1), self.value(length)):
            yield self.rep(n)

    def __repr__(self) -> str:
        return f"PositionalSystem(name={self.name!r}, order={self.recurrence.order})"


def rep(system: PositionalSystem, n: int) -> Tuple[int, ...]:
    return system.rep(n)


def val(system: PositionalSystem, word: Sequence[int]) -> int:
    return system.val(word)


def is_greedy(system: PositionalSystem, word: Sequence[int]) -> bool:
    return system.is_greedy(word)


def _enumerate_padded_greedy(system: PositionalSystem, length: int) -> int:
    """
    Count length-n words of 0*L_U by depth-first enumeration.

    Digits are chosen least significant first: c_{n-1}...c_0 is greedy (with
    leading zeros) iff c_j U(j) + ... + c_0 U(0) < U(j+1) for every j.
    The last level is counted directly instead of being expanded.
    """
    if length == 0:
        return 1
    values = system.values(length + 1)
    total = 0
    stack = [(0, 0)]
    while stack:
        position, partial = stack.pop()
        bound = values[position + 1]
        weight = values[position]
        options = min(system.max_digit, (bound - 1 - partial) // weight) + 1
        if position == length - 1:
            total += options
            continue
        for digit in range(options):
            stack.append((position + 1, partial + digit * weight))
    return total


def count_words_with_leading_zeros(
    system: PositionalSystem, length: int, method: str = "table", max_words: int = DEFAULT_MAX_WORDS
) -> int:
    """
    Number of length-n words of 0*L_U.

    The counting law gives U(n) for Parry systems and for every system whose
    greedy language is described by the suffix inequalities; "table" returns
    U(n) directly, "enumerate" counts the words one by one.

    Raises:
        CapacityExceeded: If enumeration would visit more than max_words words
    """
    if length < 0:
        raise ValueError(f"length must be non-negative, got {length}")
    if method not in COUNT_METHODS:
        raise ValueError(f"method must be one of {COUNT_METHODS}, got: {method}")
    if method == "table":
        return system.value(length)
    if system.value(length) > max_words:
        raise CapacityExceeded(
            f"Enumerating length-{length} words of {system.name} visits {system.value(length)} words "
            f"(limit {max_words})"
        )
    count = _enumerate_padded_greedy(system, length)
    logger.debug(f"Enumerated {count} padded greedy words of length {length} in {system.name}")
    return count


def is_bertrand_up_to(
    system: PositionalSystem, max_len: int, max_words: int = DEFAULT_MAX_WORDS
) -> BertrandCheck:
    """
    Check w in L_U <=> w0 in L_U for all nonempty words of length <= max_len.

    Words with a leading zero are never greedy, and neither are their
    extensions, so only greedy words and greedy words ending in 0 need to be
    compared. The first counterexample in genealogical order is returned.

    Raises:
        CapacityExceeded: If more than max_words greedy words would be listed
    """
    if max_len < 1:
        return BertrandCheck(ok=True, max_len=max_len)
    if system.value(max_len + 1) > max_words:
        raise CapacityExceeded(
            f"Bertrand check up to length {max_len} needs {system.value(max_len + 1)} words "
            f"(limit {max_words})"
        )

    current = set(system.greedy_words_of_length(1))
    for length in range(1, max_len + 1):
        following = set(system.greedy_words_of_length(length + 1))
        with_zero = {word[:-1] for word in following if word[-1] == 0}
        broken = current.symmetric_difference(with_zero)
        if broken:
            counterexample = min(broken)
            logger.info(
                f"System {system.name} is not Bertrand: "
                f"counterexample {format_word(counterexample)}"
            )
            return BertrandCheck(ok=False, counterexample=counterexample, max_len=max_len)
        current = following

    return BertrandCheck(ok=True, max_len=max_len)


class GenealogicalIndex:
    """
    Radix-order indexing of the language of a DFA.

    Path counts per state and length are tabulated lazily as unbounded
    integers; the table only grows and extension is serialised.

    Example:
        >>> idx = GenealogicalIndex(a_star_b_star)
        >>> idx.nth_word(5)  # ('b', 'b')
        >>> idx.word_index(('a', 'a', 'a'))  # 6
    """

    def __init__(self, dfa: "Dfa"):
        self.dfa = dfa
        self._lock = threading.Lock()
        self._counts: List[Dict[Hashable, int]] = [
            {q: (1 if q in dfa.finals else 0) for q in dfa.states}
        ]
        self.is_infinite = self._has_useful_cycle()

    def _has_useful_cycle(self) -> bool:
        dfa = self.dfa
        reachable = {dfa.initial}
        frontier = [dfa.initial]
        while frontier:
            q = frontier.pop()
            for a in dfa.alphabet:
                r = dfa.step(q, a)
                if r is not None and r not in reachable:
                    reachable.add(r)
                    frontier.append(r)

        coreachable = set(dfa.finals)
        changed = True
        while changed:
            changed = False
            for (q, _), r in dfa.transitions.items():
                if r in coreachable and q not in coreachable:
                    coreachable.add(q)
                    changed = True

        useful = reachable & coreachable
        colour: Dict[Hashable, int] = {}
        for root in useful:
            if root in colour:
                continue
            colour[root] = 1
            stack = [(root, iter(dfa.alphabet))]
            while stack:
                q, letters = stack[-1]
                advanced = False
                for a in letters:
                    r = dfa.step(q, a)
                    if r is None or r not in useful:
                        continue
                    if colour.get(r) == 1:
                        return True
                    if r not in colour:
                        colour[r] = 1
                        stack.append((r, iter(dfa.alphabet)))
                        advanced = True
                        break
                if not advanced:
                    colour[q] = 2
                    stack.pop()
        return False

    def count(self, state: Hashable, length: int) -> int:
        """Number of words of the given length accepted from state."""
        if len(self._counts) <= length:
            with self._lock:
                while len(self._counts) <= length:
                    previous = self._counts[-1]
                    self._counts.append(
                        {
                            q: sum(
                                previous[r]
                                for r in (self.dfa.step(q, a) for a in self.dfa.alphabet)
                                if r is not None
                            )
                            for q in self.dfa.states
                        }
                    )
        return self._counts[length][state]

    def nth_word(self, n: int) -> Tuple[Hashable, ...]:
        """The (n+1)-st accepted word in genealogical order."""
        if n < 0:
            raise ValueError(f"n must be non-negative, got {n}")

        dfa = self.dfa
        length = 0
        remaining = n
        while True:
            bucket = self.count(dfa.initial, length)
            if remaining < bucket:
                break
            remaining -= bucket
            length += 1
            if not self.is_infinite and length > len(dfa.states):
                raise FiniteLanguage(f"The language has fewer than {n + 1} words")

        word = []
        state = dfa.initial
        for position in range(length):
            rest = length - position - 1
            for letter in dfa.alphabet:
                target = dfa.step(state, letter)
                if target is None:
                    continue
                bucket = self.count(target, rest)
                if remaining < bucket:
                    word.append(letter)
                    state = target
                    break
                remaining -= bucket
        return tuple(word)

    def word_index(self, word: Sequence[Hashable]) -> int:
        """Inverse of nth_word."""
        dfa = self.dfa
        word = tuple(word)
        if any(letter not in dfa.alphabet for letter in word):
            raise NotInLanguage(f"Word {format_word(word)} uses letters outside the alphabet")

        index = sum(self.count(dfa.initial, length) for length in range(len(word)))
        state = dfa.initial
        for position, letter in enumerate(word):
            rest = len(word) - position - 1
            for smaller in dfa.alphabet:
                if smaller == letter:
                    break
                target = dfa.step(state, smaller)
                if target is not None:
                    index += self.count(target, rest)
            state = dfa.step(state, letter)
            if state is None:
                raise NotInLanguage(f"Word {format_word(word)} is not accepted")

        if state not in dfa.finals:
            raise NotInLanguage(f"Word {format_word(word)} is not accepted")
        return index


def nth_word_genealogical(index: GenealogicalIndex, n: int) -> Tuple[Hashable, ...]:
    return index.nth_word(n)


def word_index_genealogical(index: GenealogicalIndex, word: Sequence[Hashable]) -> int:
    return index.word_index(word)
