#!/usr/bin/env python3
"""
Witness engine for seqlab
Certified linear lower bounds on even-order correlations

Words of the numeration language that drive the product automaton to the
same state are followed by identical blocks of the automatic sequence. Given
2k such words u_1 < ... < u_2k and a block exponent M, the positions
p_i = val(u_i 0^M) form a shift vector D with V(s, U(M), D) = U(M), hence
C_2k(s,N) >= U(M) for every N >= p_2k + U(M).
"""

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from src.automata import ProductAutomaton, iter_language, run, state_label
from src.measures import correlation_profile, correlation_sum
from src.morphic import SequencePrefix
from src.numeration import PositionalSystem
from src.utils import SeqlabError, format_word

logger = logging.getLogger(__name__)


class WitnessError(SeqlabError):
    """Base class for witness engine errors."""

    pass


class PigeonholeBoundExceeded(WitnessError, AssertionError):
    """Raised when the collision scan passes the pigeonhole bound; the automaton is wrong."""

    pass


class InvalidCollision(WitnessError):
    """Raised when hand-picked words do not form a collision."""

    pass


class VerificationFailed(WitnessError):
    """
    Raised when a certificate does not hold on the generated prefix.

    Attributes:
        index (int): First offset n where the blocks disagree (-1 for the final sum check)
    """

    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(message or f"Certificate fails at offset {index}")


class PrefixTooShort(WitnessError):
    """Raised when the prefix does not cover the certified block positions."""

    pass


class NoRecurrenceFound(WitnessError):
    """Raised when no aligned recurrence of the leading factor exists in the prefix."""

    pass


@dataclass(frozen=True)
class CollisionWitness:
    """
    2k distinct nonempty words of L sharing a product state.

    Attributes:
        words (tuple): u_1 < ... < u_2k in genealogical order
        state: Common state Delta((a0, r0), u_i)
        half_order (int): k
        search_bound (int): (2k-1)*|Q|*|R|
        scanned (int | None): Words scanned by find_collisions (None when hand-picked)
    """

    words: Tuple[Tuple[int, ...], ...]
    state: Hashable
    half_order: int
    search_bound: int
    scanned: Optional[int] = None


@dataclass(frozen=True)
class CorrelationCertificate:
    """
    Positions p_i = val(u_i 0^M) and block length U(M).

    When verified, C_2k(s,N) >= block_length for N >= implied_length.
    """

    witness: CollisionWitness
    exponent: int
    block_length: int
    shifts: Tuple[int, ...]
    verified: bool = False

    @property
    def order(self) -> int:
        return 2 * self.witness.half_order

    @property
    def implied_length(self) -> int:
        return self.shifts[-1] + self.block_length

    def bound_for(self, n: int) -> int:
        """Certified lower bound on C_2k(s,N) at this N (0 when N is too small)."""
        return self.block_length if n >= self.implied_length else 0


@dataclass(frozen=True)
class EmpiricalConstant:
    """Rows (N, C_2k(s,N), C/N) with the minimum ratio and the optional reference line."""

    order: int
    rows: Tuple[Tuple[int, int, float], ...]
    min_ratio: float
    reference_slope: Optional[float] = None

    def reference(self, n: int) -> Optional[float]:
        """N/(b(m+1)) for integer base b and DFAO size m, when known."""
        return None if self.reference_slope is None else n * self.reference_slope


@dataclass(frozen=True)
class LinrecWitness:
    """s(i) = s(jd + i) for i < n and j < 2k, giving V(s, n, D) = n."""

    period: int
    factor_length: int
    shifts: Tuple[int, ...]
    value: int


@dataclass(frozen=True)
class RecurrenceRow:
    """Largest gap between consecutive occurrences over the length-n factors."""

    length: int
    max_gap: int
    ratio: float


@dataclass(frozen=True)
class GrowthRow:
    exponent: int
    block_length: int
    last_position: int
    ratio: Optional[float] = field(default=None)


def pigeonhole_bound(p: ProductAutomaton, half_order: int) -> int:
    return (2 * half_order - 1) * p.full_size


def find_collisions(p: ProductAutomaton, system: PositionalSystem, half_order: int) -> CollisionWitness:
    """
    First bucket of 2k nonempty words of L reaching one product state.

    Words are scanned in genealogical order; by the pigeonhole principle the
    scan ends within (2k-1)*|Q|*|R| + 1 words. The result is the first
    collision in radix order, so for ex41 it is (1, 2); other collisions such
    as (10, 100) go through collision_from_words.

    Raises:
        PigeonholeBoundExceeded: If the bound is passed (signals a wrong automaton)
    """
    if half_order < 1:
        raise ValueError(f"k must be >= 1, got {half_order}")
    if tuple(p.alphabet) != system.digit_alphabet:
        raise WitnessError(f"Product alphabet {p.alphabet} differs from the digits of {system.name}")

    bound = pigeonhole_bound(p, half_order)
    needed = 2 * half_order
    buckets: Dict[Hashable, List[Tuple[int, ...]]] = {}
    scanned = 0
    for word in iter_language(p.dfa):
        if not word:
            continue
        scanned += 1
        state = run(p, word).state
        bucket = buckets.setdefault(state, [])
        bucket.append(word)
        if len(bucket) == needed:
            logger.info(
                f"Collision in state {state_label(state)} after {scanned} words: "
                f"{', '.join(format_word(u) for u in bucket)}"
            )
            return CollisionWitness(tuple(bucket), state, half_order, bound, scanned)
        if scanned > bound:
            raise PigeonholeBoundExceeded(
                f"No {needed} words share a state within the first {bound + 1} words"
            )
    raise PigeonholeBoundExceeded(f"The language ended after {scanned} words without a collision")


def collision_from_words(
    p: ProductAutomaton, system: PositionalSystem, words: Sequence[Sequence[int]]
) -> CollisionWitness:
    """
    Collision from hand-picked words (an even number of them).

    The words must be distinct nonempty greedy representations reaching the
    same product state; they are put in genealogical order. The pigeonhole
    bound is recorded but not enforced.
    """
    chosen = [tuple(word) for word in words]
    if not chosen or len(chosen) % 2:
        raise InvalidCollision(f"Need an even, positive number of words, got {len(chosen)}")
    if len(set(chosen)) != len(chosen):
        raise InvalidCollision("Words must be pairwise distinct")

    states = set()
    for word in chosen:
        if not word or not system.is_greedy(word):
            raise InvalidCollision(f"{format_word(word)} is not a nonempty greedy representation")
        states.add(run(p, word).state)
    if len(states) != 1:
        raise InvalidCollision(
            f"Words reach different states: {', '.join(sorted(state_label(s) for s in states))}"
        )

    chosen.sort(key=lambda word: (len(word), word))
    half_order = len(chosen) // 2
    return CollisionWitness(tuple(chosen), states.pop(), half_order, pigeonhole_bound(p, half_order))


def build_certificate(
    witness: CollisionWitness, system: PositionalSystem, exponent: int
) -> CorrelationCertificate:
    """Unverified certificate with p_i = val(u_i 0^M) and block length U(M)."""
    if exponent < 0:
        raise ValueError(f"M must be >= 0, got {exponent}")
    padding = (0,) * exponent
    shifts = tuple(system.val(word + padding) for word in witness.words)
    if any(b <= a for a, b in zip(shifts, shifts[1:])):
        raise WitnessError(f"Positions {shifts} are not strictly increasing")
    return CorrelationCertificate(
        witness=witness,
        exponent=exponent,
        block_length=system.value(exponent),
        shifts=shifts,
    )


def block_exponent_for(witness: CollisionWitness, system: PositionalSystem, limit: int) -> int:
    """
    Largest M with val(u_2k 0^M) + U(M) <= limit.

    With limit = prefix capacity this fits the generated prefix; with
    limit = N it is the choice p + U(M) <= N < p' + U(M+1) of the proof.

    Raises:
        PrefixTooShort: If even M = 0 does not fit
    """
    last = witness.words[-1]
    exponent = -1
    while system.val(last + (0,) * (exponent + 1)) + system.value(exponent + 1) <= limit:
        exponent += 1
    if exponent < 0:
        raise PrefixTooShort(f"Witness {format_word(last)} does not fit in {limit} symbols")
    return exponent


def verify_certificate(
    s: SequencePrefix, certificate: CorrelationCertificate, system: PositionalSystem
) -> CorrelationCertificate:
    """
    Check s(p_i + n) = s(p_1 + n) for n < U(M) and V(s, U(M), D) = U(M).

    Returns:
        The certificate with verified=True

    Raises:
        PrefixTooShort: If the prefix does not reach p_2k + U(M)
        VerificationFailed: With the first failing offset
    """
    if certificate.block_length != system.value(certificate.exponent):
        raise VerificationFailed(-1, f"Block length {certificate.block_length} is not U({certificate.exponent})")
    if len(s) < certificate.implied_length:
        raise PrefixTooShort(
            f"Prefix has {len(s)} symbols, certificate needs {certificate.implied_length}"
        )

    block = certificate.block_length
    symbols = s.indices
    reference = symbols[certificate.shifts[0] : certificate.shifts[0] + block]
    for position in certificate.shifts[1:]:
        differing = np.flatnonzero(symbols[position : position + block] != reference)
        if differing.size:
            index = int(differing[0])
            raise VerificationFailed(
                index, f"s({certificate.shifts[0] + index}) != s({position + index})"
            )

    value = correlation_sum(s, block, certificate.shifts)
    if value != block:
        raise VerificationFailed(-1, f"V = {value}, expected {block}")

    logger.info(
        f"Verified C_{certificate.order} >= {block} for N >= {certificate.implied_length}"
    )
    return dataclasses.replace(certificate, verified=True)


def certificate_growth(
    witness: CollisionWitness, system: PositionalSystem, max_exponent: int
) -> List[GrowthRow]:
    """U(M), the last block position and U(M+1)/U(M) for M = 0..max_exponent."""
    rows = []
    for exponent in range(max_exponent + 1):
        certificate = build_certificate(witness, system, exponent)
        rows.append(
            GrowthRow(
                exponent=exponent,
                block_length=certificate.block_length,
                last_position=certificate.shifts[-1],
                ratio=system.value(exponent + 1) / system.value(exponent),
            )
        )
    return rows


def empirical_constant(
    s: SequencePrefix,
    half_order: int,
    n_range: Sequence[int],
    base: Optional[int] = None,
    dfao_states: Optional[int] = None,
    budget: int = 10**9,
    threads: Optional[int] = None,
) -> EmpiricalConstant:
    """
    Exact C_2k(s,N) and C/N over n_range, with the minimum ratio.

    For an integer base b and a DFAO with m states the reference line
    N/(b(m+1)) is attached.
    """
    n_values = sorted(set(n_range))
    if not n_values:
        raise ValueError("n_range is empty")
    order = 2 * half_order
    profile = correlation_profile(s, n_values[-1], order, "exact", budget, threads)
    rows = tuple((n, int(profile.values[n]), int(profile.values[n]) / n) for n in n_values)
    slope = None
    if base is not None and dfao_states is not None:
        slope = 1.0 / (base * (dfao_states + 1))
    return EmpiricalConstant(
        order=order,
        rows=rows,
        min_ratio=min(row[2] for row in rows),
        reference_slope=slope,
    )


def linrec_witness(s: SequencePrefix, length: int, half_order: int) -> LinrecWitness:
    """
    Smallest d > 0 with s[0:n] recurring at d, 2d, ..., (2k-1)d.

    Raises:
        NoRecurrenceFound: If no such d fits in the prefix
    """
    if length < 1 or half_order < 1:
        raise ValueError(f"Need n >= 1 and k >= 1, got n={length}, k={half_order}")
    if length > len(s):
        raise PrefixTooShort(f"Prefix has {len(s)} symbols, factor length is {length}")

    symbols = s.indices
    windows = np.lib.stride_tricks.sliding_window_view(symbols, length)
    occurrences = np.flatnonzero((windows == symbols[:length]).all(axis=1))
    found = set(occurrences.tolist())
    copies = 2 * half_order
    for d in occurrences[1:].tolist():
        if (copies - 1) * d + length > len(s):
            break
        if all(j * d in found for j in range(2, copies)):
            shifts = tuple(j * d for j in range(copies))
            value = correlation_sum(s, length, shifts)
            return LinrecWitness(period=d, factor_length=length, shifts=shifts, value=value)

    raise NoRecurrenceFound(
        f"s[0:{length}] has no {copies} aligned occurrences in {len(s)} symbols"
    )


def recurrence_constant_estimate(s: SequencePrefix, max_length: int) -> List[RecurrenceRow]:
    """Per n <= max_length, the largest gap between consecutive occurrences of a length-n factor."""
    rows = []
    for length in range(1, min(max_length, len(s)) + 1):
        windows = np.lib.stride_tricks.sliding_window_view(s.indices, length)
        _, ids = np.unique(windows, axis=0, return_inverse=True)
        ids = np.asarray(ids).ravel()
        order = np.argsort(ids, kind="stable")
        sorted_ids = ids[order]
        gaps = np.diff(order)
        same = sorted_ids[1:] == sorted_ids[:-1]
        max_gap = int(gaps[same].max()) if same.any() else 0
        rows.append(RecurrenceRow(length=length, max_gap=max_gap, ratio=max_gap / length))
    return rows
