#!/usr/bin/env python3
"""
Beta Systems for seqlab
Parry numbers presented by their digit expansions of 1

A Parry number beta is never handled as a real number here. It is given
combinatorially by the eventually periodic word d_beta(1) (or its quasi-greedy
variant d*_beta(1)), from which the canonical numeration sequence U_beta and
its linear recurrence are derived with exact integer arithmetic.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from src.utils import SeqlabError, format_word, parse_word

logger = logging.getLogger(__name__)

DEFAULT_RATIO_TOLERANCE = 1e-9
FLOAT_DIGIT_SLACK = 1e-12


class ParryValidationError(SeqlabError):
    """Raised when a digit word is not the expansion of 1 of a Parry number."""

    pass


class NotAdmissible(ParryValidationError):
    """
    Raised when some shift of the expansion is lexicographically larger
    than the expansion itself.

    Attributes:
        position (int): Shift amount of the first violating suffix
    """

    def __init__(self, position: int, message: str = ""):
        self.position = position
        super().__init__(message or f"Shift by {position} dominates the expansion")


class EmptyPeriod(ParryValidationError):
    """Raised when the periodic part of the expansion is empty."""

    pass


class LeadingZero(ParryValidationError):
    """Raised when the first digit t(1) is zero."""

    pass


class InvalidDigit(ParryValidationError):
    """Raised when a digit is not a non-negative integer."""

    pass


class LastDigitZero(SeqlabError):
    """Raised when a terminating expansion ends with the digit 0."""

    pass


class InvalidRecurrence(SeqlabError):
    """Raised when a recurrence cannot define a positional numeration system."""

    pass


class NonConvergent(SeqlabError):
    """Raised when consecutive ratio estimates disagree beyond tolerance."""

    pass


class OutOfRange(SeqlabError):
    """Raised when float_greedy_expansion gets a base or value outside its domain."""

    pass


def _check_digits(digits: Sequence[int]) -> Tuple[int, ...]:
    for digit in digits:
        if isinstance(digit, bool) or not isinstance(digit, int) or digit < 0:
            raise InvalidDigit(f"Digits must be non-negative integers, got: {digit!r}")
    return tuple(digits)


def _primitive_root(word: Tuple[int, ...]) -> Tuple[int, ...]:
    size = len(word)
    for p in range(1, size + 1):
        if size % p == 0 and word[:p] * (size // p) == word:
            return word[:p]
    return word


@dataclass(frozen=True)
class BetaSpec:
    """
    Eventually periodic expansion of 1: preperiod (period)^omega.

    A terminating greedy expansion d_beta(1) = t(1)...t(m) is stored with the
    period (0,); use quasi_greedy() to obtain d*_beta(1). The constructor
    normalises (m, k) to be minimal: the period is made primitive and rotated
    into the preperiod while the last digits agree.

    Example:
        >>> BetaSpec((), (1, 0))          # golden ratio, d* = (10)^omega
        >>> BetaSpec((2,), (1,))          # phi^2, d = d* = 21^omega
        >>> BetaSpec.terminating((1, 1))  # golden ratio, d = 11
        >>> BetaSpec.parse("2(1)")

    Attributes:
        preperiod (tuple): t(1)...t(m)
        period (tuple): t(m+1)...t(m+k)
    """

    preperiod: Tuple[int, ...]
    period: Tuple[int, ...]

    def __post_init__(self):
        preperiod = _check_digits(self.preperiod)
        period = _check_digits(self.period)
        if not period:
            raise EmptyPeriod("The periodic part of the expansion must be non-empty")

        period = _primitive_root(period)
        while preperiod and preperiod[-1] == period[-1]:
            period = (preperiod[-1],) + period[:-1]
            preperiod = preperiod[:-1]

        object.__setattr__(self, "preperiod", preperiod)
        object.__setattr__(self, "period", period)

    @classmethod
    def terminating(cls, greedy: Sequence[int]) -> "BetaSpec":
        """Spec for a terminating greedy expansion t(1)...t(m) 0^omega."""
        greedy = _check_digits(greedy)
        if not greedy:
            raise InvalidDigit("A terminating expansion needs at least one digit")
        if greedy[-1] == 0:
            raise LastDigitZero(f"Last digit of {format_word(greedy)} is zero")
        return cls(greedy, (0,))

    @classmethod
    def parse(cls, text: str) -> "BetaSpec":
        """
        Parse the notation 'pre(per)'.

        Examples:
            >>> BetaSpec.parse("(10)")   # (10)^omega
            >>> BetaSpec.parse("2(1)")   # 21^omega
            >>> BetaSpec.parse("11")     # terminating 11
            >>> BetaSpec.parse("(10,)")  # single digit ten, repeated
        """
        text = text.strip()
        if "(" not in text:
            return cls.terminating(parse_word(text))
        if not text.endswith(")") or text.count("(") != 1:
            raise ValueError(f"Expected 'pre(per)' notation, got: {text!r}")
        head, tail = text[:-1].split("(")
        return cls(parse_word(head), parse_word(tail))

    @property
    def m(self) -> int:
        """Length of the preperiod."""
        return len(self.preperiod)

    @property
    def k(self) -> int:
        """Length of the period (0 for a terminating expansion)."""
        return 0 if self.is_terminating else len(self.period)

    @property
    def is_terminating(self) -> bool:
        return self.period == (0,)

    def digits(self, count: int) -> Tuple[int, ...]:
        """First count digits t(1)...t(count) of the infinite word."""
        word = list(self.preperiod)
        while len(word) < count:
            word.extend(self.period)
        return tuple(word[:count])

    def shifted_digits(self, shift: int, count: int) -> Tuple[int, ...]:
        """Digits t(shift+1)...t(shift+count)."""
        return self.digits(shift + count)[shift:]

    def quasi_greedy(self) -> "BetaSpec":
        """d*_beta(1): terminating expansions become purely periodic."""
        if self.is_terminating:
            return quasi_greedy_from_greedy(self.preperiod)
        return self

    def __str__(self) -> str:
        if self.is_terminating:
            return format_word(self.preperiod, empty="")
        return f"{format_word(self.preperiod, empty='')}({format_word(self.period, empty='')})"


@dataclass(frozen=True)
class LinearRecurrence:
    """
    U(n) = c_1 U(n-1) + ... + c_order U(n-order), with U(0..order-1) given.

    Values are Python integers, so nothing overflows however large n gets.

    Attributes:
        coefficients (tuple): (c_1, ..., c_order), signed
        initial_values (tuple): (U(0), ..., U(order-1)), U(0) = 1
    """

    coefficients: Tuple[int, ...]
    initial_values: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))
        object.__setattr__(self, "initial_values", tuple(int(u) for u in self.initial_values))
        if not self.coefficients:
            raise InvalidRecurrence("A recurrence needs at least one coefficient")
        if len(self.coefficients) != len(self.initial_values):
            raise InvalidRecurrence(
                f"Order {len(self.coefficients)} needs {len(self.coefficients)} initial values, "
                f"got {len(self.initial_values)}"
            )
        if self.initial_values[0] != 1:
            raise InvalidRecurrence(f"U(0) must be 1, got {self.initial_values[0]}")
        for i in range(1, len(self.initial_values)):
            if self.initial_values[i] <= self.initial_values[i - 1]:
                raise InvalidRecurrence("Initial values must be strictly increasing")

    @classmethod
    def from_affine(cls, a: int, b: int) -> "LinearRecurrence":
        """U(0) = 1, U(n+1) = a U(n) + b, rewritten as a homogeneous order-2 recurrence."""
        return cls((a + 1, -a), (1, a + b))

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def values(self, count: int) -> List[int]:
        """First count terms U(0), ..., U(count-1)."""
        terms = list(self.initial_values[:count])
        while len(terms) < count:
            n = len(terms)
            terms.append(
                sum(c * terms[n - j] for j, c in enumerate(self.coefficients, start=1))
            )
        return terms

    def extend(self, terms: List[int], count: int) -> None:
        """Append terms in place until len(terms) >= count (terms must be a valid prefix)."""
        if len(terms) < self.order:
            terms[:] = self.values(max(count, self.order))
            return
        while len(terms) < count:
            n = len(terms)
            terms.append(
                sum(c * terms[n - j] for j, c in enumerate(self.coefficients, start=1))
            )

    def check_growth(self, count: int) -> float:
        """
        Check strict increase on U(0..count-1) and return max U(i+1)/U(i).

        Raises:
            InvalidRecurrence: If U is not strictly increasing on the prefix
        """
        terms = self.values(count)
        worst = 1.0
        for i in range(1, len(terms)):
            if terms[i] <= terms[i - 1]:
                raise InvalidRecurrence(f"U is not increasing at index {i}")
            worst = max(worst, terms[i] / terms[i - 1])
        return worst


@dataclass(frozen=True)
class DominantRoot:
    """Diagnostic estimate of beta and c in U(n) ~ c beta^n."""

    beta: float
    c: float
    index: int


def validate_parry_expansion(d: BetaSpec) -> bool:
    """
    Check Parry admissibility of an expansion of 1.

    Every shift of the infinite word preperiod(period)^omega must be
    lexicographically <= the word. Only the first m+k shifts are distinct up
    to periodicity, and two eventually periodic words with preperiod <= m and
    period k agree forever once they agree on m+k symbols, so comparisons on a
    2(m+k) window are exact.

    Returns:
        bool: True when admissible

    Raises:
        EmptyPeriod: If the period is empty
        NotAdmissible: With the first violating shift
        LeadingZero: If t(1) = 0 (only reachable for words 0^omega)
    """
    if not d.period:
        raise EmptyPeriod("The periodic part of the expansion must be non-empty")

    span = len(d.preperiod) + len(d.period)
    horizon = 2 * span
    word = d.digits(horizon)
    for shift in range(1, span):
        if d.shifted_digits(shift, horizon) > word:
            raise NotAdmissible(
                shift,
                f"Shift by {shift} of {d} is lexicographically larger than the expansion",
            )

    if word[0] == 0:
        raise LeadingZero(f"Expansion {d} starts with the digit 0")
    return True


def quasi_greedy_from_greedy(greedy: Sequence[int]) -> BetaSpec:
    """
    d*_beta(1) = (t(1)...t(m-1)(t(m)-1))^omega for a terminating d_beta(1).

    Raises:
        LastDigitZero: If t(m) = 0
    """
    greedy = _check_digits(greedy)
    if not greedy:
        raise InvalidDigit("A terminating expansion needs at least one digit")
    if greedy[-1] == 0:
        raise LastDigitZero(f"Last digit of {format_word(greedy)} is zero")

    spec = BetaSpec((), greedy[:-1] + (greedy[-1] - 1,))
    validate_parry_expansion(spec)
    return spec


def build_recurrence(d: BetaSpec) -> LinearRecurrence:
    """
    Canonical recurrence of U_beta.

    U(0) = 1, U(i) = t(1)U(i-1) + ... + t(i)U(0) + 1 for 0 < i < m+k, and for
    n >= m+k
        U(n) = t(1)U(n-1) + ... + t(m+k)U(n-m-k) + U(n-k)
               - t(1)U(n-k-1) - ... - t(m)U(n-m-k).
    A terminating expansion has k = 0, where the recurrence reduces to
    U(n) = t(1)U(n-1) + ... + t(m)U(n-m). Both presentations of the same
    number give the same sequence.
    """
    validate_parry_expansion(d)

    m, k = d.m, d.k
    order = m + k
    t = d.digits(order)

    initial = [1]
    for i in range(1, order):
        initial.append(sum(t[j - 1] * initial[i - j] for j in range(1, i + 1)) + 1)

    coefficients = list(t)
    if k > 0:
        coefficients[k - 1] += 1
        for j in range(1, m + 1):
            coefficients[k + j - 1] -= t[j - 1]

    rec = LinearRecurrence(tuple(coefficients), tuple(initial))
    logger.debug(f"Recurrence for {d}: coefficients={rec.coefficients}, initial={rec.initial_values}")
    return rec


def dominant_root(
    rec: LinearRecurrence, n_terms: int, tolerance: float = DEFAULT_RATIO_TOLERANCE
) -> DominantRoot:
    """
    Estimate beta = lim U(n)/U(n-1) and c = lim U(n)/beta^n.

    Diagnostic only: the estimate uses the last computed index.

    Raises:
        ValueError: If n_terms < 2 * order
        NonConvergent: If the last two ratio estimates differ by more than tolerance
    """
    if n_terms < 2 * rec.order or n_terms < 3:
        raise ValueError(f"n_terms must be >= max(2*order, 3), got {n_terms}")

    terms = rec.values(n_terms)
    n = n_terms - 1
    beta = terms[n] / terms[n - 1]
    previous = terms[n - 1] / terms[n - 2]
    if abs(beta - previous) > tolerance:
        raise NonConvergent(
            f"Ratio estimates {previous!r} and {beta!r} differ by more than {tolerance}"
        )

    c = math.exp(math.log(terms[n]) - n * math.log(beta))
    return DominantRoot(beta=beta, c=c, index=n)


def float_greedy_expansion(beta: float, x: float, length: int) -> Tuple[int, ...]:
    """
    First digits of the greedy beta-expansion of x in [0, 1), in floating point.

    Exploration helper only: digits next to a boundary can be off by one ulp,
    which is absorbed by a small slack before flooring.

    Examples:
        >>> float_greedy_expansion(2.0, 0.5, 4)  # (1, 0, 0, 0)
    """
    if length < 1:
        raise OutOfRange(f"length must be >= 1, got {length}")
    if not beta > 1:
        raise OutOfRange(f"beta must be > 1, got {beta}")
    if not 0 <= x < 1:
        raise OutOfRange(f"x must lie in [0, 1), got {x}")

    top = math.ceil(beta) - 1
    digits = []
    remainder = x
    for _ in range(length):
        y = remainder * beta
        digit = min(top, int(math.floor(y + FLOAT_DIGIT_SLACK)))
        digits.append(digit)
        remainder = max(0.0, y - digit)
    return tuple(digits)
