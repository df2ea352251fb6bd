#!/usr/bin/env python3
"""
Measures for seqlab
Exact pseudorandomness measures on finite binary prefixes

Implements the walk sums U(s,M,a,b) and the well-distribution measure W(s,N),
the correlation sums V(s,M,D) and the correlation measure C_k(s,N), finite
Mahler correlations, factor complexity, and the correlation lower bound that
follows from a factor occurring 2k times.

Correlation uses shift invariance: V(s,M,D) with D = (c, c+h2, ..., c+hk)
is a window sum of y(n) = (-1)^(s(n)+s(n+h2)+...+s(n+hk)) over [c, c+M).
For a fixed H = (0, h2, ..., hk) the best window ending at every position
comes from running extrema of the prefix sums of y, so a single sweep gives
C_k(s,N) for every N at once.
"""

import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.morphic import SequencePrefix
from src.utils import CapacityExceeded, SeqlabError

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**9
DEFAULT_SAMPLES = 20000
CHUNK_ELEMENTS = 2**22
MODES = ("exact", "sampled")


class MeasureError(SeqlabError):
    """Base class for measure errors."""

    pass


class IndexOutOfPrefix(MeasureError):
    """Raised when a sum would read past the end of the prefix."""

    pass


class InvalidShiftVector(MeasureError, ValueError):
    """Raised when shifts are negative or not strictly increasing."""

    pass


class BudgetExceeded(CapacityExceeded):
    """Raised when an exact computation would exceed the step budget."""

    pass


class NotEnoughOccurrences(MeasureError):
    """Raised when the prefix is too short for the occurrence argument."""

    pass


@dataclass(frozen=True)
class ShiftVector:
    """D = (d_1, ..., d_k) with 0 <= d_1 < ... < d_k."""

    shifts: Tuple[int, ...]

    def __post_init__(self):
        shifts = tuple(int(d) for d in self.shifts)
        if not shifts:
            raise InvalidShiftVector("A shift vector needs at least one shift")
        if shifts[0] < 0:
            raise InvalidShiftVector(f"Shifts must be non-negative, got {shifts}")
        if any(b <= a for a, b in zip(shifts, shifts[1:])):
            raise InvalidShiftVector(f"Shifts must be strictly increasing, got {shifts}")
        object.__setattr__(self, "shifts", shifts)

    @property
    def order(self) -> int:
        return len(self.shifts)

    @property
    def last(self) -> int:
        return self.shifts[-1]

    def __iter__(self) -> Iterator[int]:
        return iter(self.shifts)

    def __len__(self) -> int:
        return len(self.shifts)


@dataclass(frozen=True)
class CorrelationReport:
    """
    C_k(s,N) with the lexicographically smallest maximising (D*, M*).

    ``elapsed`` is bookkeeping only and is excluded from report bodies.
    """

    n: int
    order: int
    value: int
    m_star: int
    d_star: Tuple[int, ...]
    mode: str = "exact"
    provenance: str = ""
    elapsed: float = field(default=0.0, compare=False)

    @property
    def ratio(self) -> float:
        return self.value / self.n


@dataclass(frozen=True)
class WellDistReport:
    """W(s,N) with the lexicographically smallest maximising (a*, b*, M*)."""

    n: int
    value: int
    a_star: int
    b_star: int
    m_star: int
    provenance: str = ""
    elapsed: float = field(default=0.0, compare=False)


@dataclass(frozen=True)
class CorrelationProfile:
    """
    values[N] = C_k(s,N) for N = 0..n_max (0 where no shift vector fits).

    In sampled mode ``patterns`` holds the H that were swept; witnesses for
    any N covered by the profile are searched among these only.
    """

    order: int
    values: np.ndarray
    mode: str
    patterns: Tuple[Tuple[int, ...], ...] = ()

    @property
    def n_max(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class MorseHedlundBound:
    """
    A factor of length n seen 2k times at the positions in ``shifts``.

    Then V(s, n, shifts) = n, so C_2k(s,N) >= n for N >= certified_length.
    """

    order: int
    factor_length: int
    complexity: int
    window: int
    shifts: Tuple[int, ...]
    value: int

    @property
    def certified_length(self) -> int:
        return self.shifts[-1] + self.factor_length


def _signs(s: SequencePrefix, length: Optional[int] = None) -> np.ndarray:
    signs = s.signs
    if length is not None:
        if length > len(signs):
            raise IndexOutOfPrefix(f"N={length} exceeds the prefix length {len(signs)}")
        signs = signs[:length]
    return signs


def walk_sum(s: SequencePrefix, m: int, a: int, b: int) -> int:
    """U(s,M,a,b): sum of (-1)^s(a+jb) for j < M."""
    if b < 1 or a < 0 or m < 0:
        raise ValueError(f"Need a >= 0, b >= 1, M >= 0, got a={a}, b={b}, M={m}")
    if m and a + (m - 1) * b >= len(s):
        raise IndexOutOfPrefix(f"Position {a + (m - 1) * b} is outside the prefix of length {len(s)}")
    return int(s.signs[a : a + m * b : b].sum()) if m else 0


def correlation_sum(s: SequencePrefix, m: int, shifts: Sequence[int]) -> int:
    """V(s,M,D): sum over n < M of (-1)^(s(n+d_1)+...+s(n+d_k))."""
    vector = shifts if isinstance(shifts, ShiftVector) else ShiftVector(tuple(shifts))
    if m < 0:
        raise ValueError(f"M must be non-negative, got {m}")
    if m + vector.last > len(s):
        raise IndexOutOfPrefix(f"M + d_k = {m + vector.last} exceeds the prefix length {len(s)}")
    signs = s.signs
    terms = np.ones(m, dtype=np.int64)
    for d in vector:
        terms *= signs[d : d + m]
    return int(terms.sum())


def _row_products(
    signs: np.ndarray, prefix: Sequence[int], lasts: np.ndarray, length: int
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Rows y(n) = prod_{h in prefix} (-1)^s(n+h) * (-1)^s(n+last), one per last.

    Columns run over n < length - min(lasts); entries with n + last >= length
    are zero and flagged invalid.
    """
    width = length - int(lasts[0])
    base = np.ones(width, dtype=np.int64)
    for h in prefix:
        base *= signs[h : h + width]
    positions = np.arange(width)[None, :] + lasts[:, None]
    valid = positions < length
    gathered = np.where(valid, signs[np.minimum(positions, length - 1)], 0)
    return gathered * base[None, :], valid


def _best_windows(y: np.ndarray, valid: np.ndarray) -> np.ndarray:
    """best[row, j]: largest |window sum| over windows ending at column j."""
    totals = np.cumsum(y, axis=1)
    shifted = np.concatenate([np.zeros((y.shape[0], 1), dtype=np.int64), totals[:, :-1]], axis=1)
    running_min = np.minimum.accumulate(shifted, axis=1)
    running_max = np.maximum.accumulate(shifted, axis=1)
    best = np.maximum(totals - running_min, running_max - totals)
    return np.where(valid, best, 0)


def _place_rows(best: np.ndarray, lasts: np.ndarray, length: int) -> np.ndarray:
    """Scatter row values to N = column + 1 + last and reduce by max."""
    rows, width = best.shape
    columns = np.arange(1, width + 1)[None, :] + lasts[:, None]
    spread = np.zeros((rows, length + width + 1), dtype=np.int64)
    spread[np.arange(rows)[:, None], columns] = best
    return spread.max(axis=0)[: length + 1]


def _sweep(signs: np.ndarray, prefix: Sequence[int], lasts: np.ndarray, length: int) -> np.ndarray:
    table = np.zeros(length + 1, dtype=np.int64)
    if lasts.size == 0:
        return table
    step = max(1, CHUNK_ELEMENTS // (2 * length + 1))
    for start in range(0, lasts.size, step):
        chunk = lasts[start : start + step]
        y, valid = _row_products(signs, prefix, chunk, length)
        np.maximum(table, _place_rows(_best_windows(y, valid), chunk, length), out=table)
    return table


def _sweep_batch(
    signs: np.ndarray, batch: Sequence[Tuple[Tuple[int, ...], np.ndarray]], length: int
) -> np.ndarray:
    table = np.zeros(length + 1, dtype=np.int64)
    for prefix, lasts in batch:
        np.maximum(table, _sweep(signs, prefix, lasts, length), out=table)
    return table


def _batches(
    tasks: List[Tuple[Tuple[int, ...], np.ndarray]], workers: int
) -> List[List[Tuple[Tuple[int, ...], np.ndarray]]]:
    """Deal work items round-robin into a few batches per worker."""
    count = max(1, min(len(tasks), workers * 4))
    return [tasks[i::count] for i in range(count)]


def estimate_correlation_steps(n_max: int, order: int) -> int:
    """Elementary steps of an exact sweep: one pass of length N per shift pattern."""
    if n_max < order:
        return 0
    return math.comb(n_max - 1, order - 1) * n_max


def _exact_tasks(n_max: int, order: int) -> List[Tuple[Tuple[int, ...], np.ndarray]]:
    """Work items (prefix H without its last entry, candidate last entries)."""
    if order == 1:
        return [((), np.array([0]))]

    tasks = []
    if order == 2:
        lasts = np.arange(1, n_max)
        for part in np.array_split(lasts, max(1, min(len(lasts), os.cpu_count() or 1))):
            if part.size:
                tasks.append(((0,), part))
        return tasks

    for middle in combinations(range(1, n_max), order - 2):
        lasts = np.arange(middle[-1] + 1, n_max)
        if lasts.size:
            tasks.append(((0,) + middle, lasts))
    return tasks


def _sampled_patterns(n_max: int, order: int, samples: int, seed: int) -> List[Tuple[int, ...]]:
    """Sorted distinct random H = (0, h2, ..., hk) with hk < n_max."""
    if order == 1:
        return [(0,)]
    if n_max - 1 < order - 1:
        return []
    rng = np.random.default_rng(seed)
    patterns = set()
    population = np.arange(1, n_max)
    for _ in range(samples):
        picked = np.sort(rng.choice(population, size=order - 1, replace=False))
        patterns.add((0,) + tuple(int(h) for h in picked))
    return sorted(patterns)


def _resolve_threads(threads: Optional[int]) -> int:
    return max(1, threads or os.cpu_count() or 1)


def correlation_profile(
    s: SequencePrefix,
    n_max: int,
    order: int,
    mode: str = "exact",
    budget: int = DEFAULT_BUDGET,
    threads: Optional[int] = None,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> CorrelationProfile:
    """
    C_k(s,N) for every N <= n_max in one sweep.

    Exact mode enumerates every H = (0, h2, ..., hk); work items are spread
    over a thread pool and reduced by max, which does not depend on the
    order of completion. Sampled mode only visits random H and yields lower
    bounds.

    Raises:
        BudgetExceeded: If exact mode needs more than budget steps
    """
    if order < 1:
        raise ValueError(f"Order must be >= 1, got {order}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got: {mode}")
    signs = _signs(s, n_max)

    patterns: Tuple[Tuple[int, ...], ...] = ()
    if mode == "exact":
        steps = estimate_correlation_steps(n_max, order)
        if steps > budget:
            raise BudgetExceeded(
                f"Exact C_{order} up to N={n_max} needs about {steps} steps (budget {budget}); "
                f"use sampled mode for a lower bound"
            )
        tasks = _exact_tasks(n_max, order) if n_max >= order else []
    else:
        patterns = tuple(_sampled_patterns(n_max, order, samples, seed))
        tasks = [(pattern[:-1], np.array([pattern[-1]])) for pattern in patterns]
        if order == 1:
            tasks = [((), np.array([0]))]

    table = np.zeros(n_max + 1, dtype=np.int64)
    workers = _resolve_threads(threads)
    if workers == 1 or len(tasks) <= 1:
        np.maximum(table, _sweep_batch(signs, tasks, n_max), out=table)
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            for partial in executor.map(
                lambda batch: _sweep_batch(signs, batch, n_max), _batches(tasks, workers)
            ):
                np.maximum(table, partial, out=table)

    values = np.maximum.accumulate(table)
    values[: min(order, n_max + 1)] = 0
    logger.debug(f"C_{order} profile up to N={n_max} ({mode}, {len(tasks)} work items)")
    return CorrelationProfile(order=order, values=values, mode=mode, patterns=patterns)


def _first_hit(
    signs: np.ndarray, prefix: Sequence[int], lasts: np.ndarray, length: int, target: int
) -> Optional[Tuple[int, int]]:
    """Smallest (last, M) with |V(M, prefix + (last,))| == target, if any."""
    width = length - int(lasts[0])
    base = np.ones(width, dtype=np.int64)
    for d in prefix:
        base *= signs[d : d + width]
    positions = np.arange(width)[None, :] + lasts[:, None]
    valid = positions < length
    terms = np.where(valid, signs[np.minimum(positions, length - 1)], 0) * base[None, :]
    hits = (np.abs(np.cumsum(terms, axis=1)) == target) & valid
    rows = np.flatnonzero(hits.any(axis=1))
    if rows.size == 0:
        return None
    row = int(rows[0])
    return int(lasts[row]), int(np.argmax(hits[row])) + 1


def _exact_witness(signs: np.ndarray, length: int, order: int, target: int) -> Tuple[Tuple[int, ...], int]:
    step = max(1, CHUNK_ELEMENTS // max(length, 1))
    for prefix in combinations(range(length), order - 1):
        first = prefix[-1] + 1 if prefix else 0
        for start in range(first, length, step):
            lasts = np.arange(start, min(length, start + step))
            hit = _first_hit(signs, prefix, lasts, length, target)
            if hit is not None:
                return prefix + (hit[0],), hit[1]
    raise MeasureError(f"No shift vector reaches {target}; the profile and the search disagree")


def _sampled_witness(
    signs: np.ndarray, length: int, patterns: Iterable[Tuple[int, ...]], target: int
) -> Tuple[Tuple[int, ...], int]:
    """
    Smallest (D, M) reaching target among translates c + H of the given patterns.

    Rows of y are ±1 inside the valid columns, so the prefix sums move by one
    per step and a window from c reaches |V| = target as soon as the running
    extrema after c are target away from the start.
    """
    usable = sorted(p for p in patterns if p[-1] < length)
    if not usable or target < 1:
        raise MeasureError(f"No sampled shift vector reaches {target}")

    columns = np.arange(length)
    step = max(1, CHUNK_ELEMENTS // ((length + 1) * len(usable[0])))
    best: Optional[Tuple[int, Tuple[int, ...]]] = None
    for start in range(0, len(usable), step):
        chunk = np.array(usable[start : start + step], dtype=np.int64)
        y = np.ones((chunk.shape[0], length), dtype=np.int64)
        for j in range(chunk.shape[1]):
            y *= signs[np.minimum(columns[None, :] + chunk[:, j : j + 1], length - 1)]
        valid = columns[None, :] < (length - chunk[:, -1])[:, None]
        y = np.where(valid, y, 0)
        totals = np.concatenate([np.zeros((chunk.shape[0], 1), dtype=np.int64), np.cumsum(y, axis=1)], axis=1)
        suffix_max = np.maximum.accumulate(totals[:, ::-1], axis=1)[:, ::-1]
        suffix_min = np.minimum.accumulate(totals[:, ::-1], axis=1)[:, ::-1]
        reach = np.maximum(suffix_max[:, 1:] - totals[:, :-1], totals[:, :-1] - suffix_min[:, 1:])
        hits = (reach >= target) & valid
        rows = np.flatnonzero(hits.any(axis=1))
        if rows.size == 0:
            continue
        offsets = np.argmax(hits[rows], axis=1)
        row = int(rows[np.argmin(offsets)])
        candidate = (int(offsets.min()), tuple(int(h) for h in chunk[row]))
        if best is None or candidate < best:
            best = candidate
        if best[0] == 0:
            break

    if best is None:
        raise MeasureError(f"No sampled shift vector reaches {target}")
    offset, pattern = best
    shifts = tuple(offset + h for h in pattern)
    width = length - pattern[-1]
    y = np.ones(width, dtype=np.int64)
    for d in shifts:
        y *= signs[d : d + width - offset]
    reached = np.flatnonzero(np.abs(np.cumsum(y)) == target)
    return shifts, int(reached[0]) + 1


def correlation(
    s: SequencePrefix,
    n: int,
    order: int,
    mode: str = "exact",
    budget: int = DEFAULT_BUDGET,
    threads: Optional[int] = None,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    profile: Optional[CorrelationProfile] = None,
) -> CorrelationReport:
    """
    C_k(s,N) = max over D with d_k < N and M + d_k <= N of |V(s,M,D)|.

    The witness is the lexicographically smallest (D*, M*) reaching the value.
    An existing profile covering N (same order and mode) is reused.
    """
    if n < order:
        raise ValueError(f"N must be >= k, got N={n}, k={order}")
    started = time.monotonic()
    signs = _signs(s, n)

    if profile is None or profile.n_max < n or profile.order != order or profile.mode != mode:
        profile = correlation_profile(s, n, order, mode, budget, threads, samples, seed)
    value = int(profile.values[n])

    if mode == "exact":
        d_star, m_star = _exact_witness(signs, n, order, value)
    elif value == 0:
        d_star, m_star = (), 0
    else:
        d_star, m_star = _sampled_witness(signs, n, profile.patterns, value)

    if d_star and abs(correlation_sum(s, m_star, d_star)) != value:
        raise MeasureError(f"Witness {d_star}, M={m_star} does not reproduce C_{order}={value}")

    return CorrelationReport(
        n=n,
        order=order,
        value=value,
        m_star=m_star,
        d_star=d_star,
        mode=mode,
        provenance=s.provenance,
        elapsed=time.monotonic() - started,
    )


def _walk_tables(signs: np.ndarray, b: int) -> Tuple[np.ndarray, np.ndarray]:
    """Prefix sums of the residue columns for step b (zero padded) and validity."""
    length = len(signs)
    rows = -(-length // b)
    padded = np.zeros(rows * b, dtype=np.int64)
    padded[:length] = signs
    columns = padded.reshape(rows, b)
    totals = np.vstack([np.zeros((1, b), dtype=np.int64), np.cumsum(columns, axis=0)])
    valid = (np.arange(rows * b) < length).reshape(rows, b)
    return totals, valid


def well_distribution_profile(s: SequencePrefix, n_max: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """
    values[N] = W(s,N) for N = 0..n_max.

    For each step b the progressions are the residue columns of the prefix
    reshaped to width b; the best walk whose last term is at position
    r + e*b comes from running extrema of the column prefix sums.
    """
    signs = _signs(s, n_max)
    if n_max * n_max > budget:
        raise BudgetExceeded(f"W up to N={n_max} needs about {n_max * n_max} steps (budget {budget})")

    ends = np.zeros(n_max, dtype=np.int64)
    for b in range(1, max(n_max, 1)):
        totals, valid = _walk_tables(signs, b)
        previous = totals[:-1]
        running_min = np.minimum.accumulate(previous, axis=0)
        running_max = np.maximum.accumulate(previous, axis=0)
        current = totals[1:]
        best = np.where(valid, np.maximum(current - running_min, running_max - current), 0)
        np.maximum(ends, best.ravel()[:n_max], out=ends)
    if n_max:
        np.maximum(ends, 1, out=ends)

    values = np.zeros(n_max + 1, dtype=np.int64)
    values[1:] = np.maximum.accumulate(ends)
    return values


def well_distribution(s: SequencePrefix, n: int, budget: int = DEFAULT_BUDGET) -> WellDistReport:
    """W(s,N) with the lexicographically smallest maximising (a*, b*, M*)."""
    if n < 1:
        raise ValueError(f"N must be >= 1, got {n}")
    started = time.monotonic()
    signs = _signs(s, n)
    value = int(well_distribution_profile(s, n, budget)[n])

    best: Optional[Tuple[int, int, int]] = None
    for b in range(1, max(n, 2)):
        totals, valid = _walk_tables(signs, b)
        rows = totals.shape[0] - 1
        suffix_max = np.maximum.accumulate(totals[::-1], axis=0)[::-1]
        suffix_min = np.minimum.accumulate(totals[::-1], axis=0)[::-1]
        start_values = totals[:-1]
        reach = np.maximum(suffix_max[1:] - start_values, start_values - suffix_min[1:])
        reach = np.where(valid, reach, 0)
        starts = np.argwhere(reach == value)
        if starts.size == 0:
            continue
        a_values = starts[:, 1] + starts[:, 0] * b
        pick = int(np.argmin(a_values))
        i, r = int(starts[pick, 0]), int(starts[pick, 1])
        a = int(a_values[pick])
        if best is not None and a > best[0]:
            continue
        column = totals[:, r]
        gaps = np.abs(column[i + 1 : rows + 1] - column[i])
        m = int(np.argmax(gaps == value)) + 1
        candidate = (a, b, m)
        if best is None or candidate < best:
            best = candidate

    if best is None:
        raise MeasureError(f"No progression reaches W={value}")
    a_star, b_star, m_star = best
    if abs(walk_sum(s, m_star, a_star, b_star)) != value:
        raise MeasureError(f"Witness a={a_star}, b={b_star}, M={m_star} does not reproduce W={value}")

    return WellDistReport(
        n=n,
        value=value,
        a_star=a_star,
        b_star=b_star,
        m_star=m_star,
        provenance=s.provenance,
        elapsed=time.monotonic() - started,
    )


def mahler_correlation(s: SequencePrefix, m: int, shift: int) -> Fraction:
    """c_M(d) = V(s, M, (0, d)) / M as an exact rational (d = 0 gives 1)."""
    if m < 1 or shift < 0:
        raise ValueError(f"Need M >= 1 and d >= 0, got M={m}, d={shift}")
    if m + shift > len(s):
        raise IndexOutOfPrefix(f"M + d = {m + shift} exceeds the prefix length {len(s)}")
    signs = s.signs
    return Fraction(int((signs[:m] * signs[shift : shift + m]).sum()), m)


def mahler_convergence(s: SequencePrefix, shift: int, max_power: int) -> List[Tuple[int, Fraction]]:
    """(M, c_M(d)) for M = 1, 2, 4, ..., 2^max_power, as long as the prefix allows."""
    rows = []
    for power in range(max_power + 1):
        m = 2**power
        if m + shift > len(s):
            break
        rows.append((m, mahler_correlation(s, m, shift)))
    return rows


def factor_complexity(s: SequencePrefix, n: int) -> int:
    """
    Number of distinct length-n windows of the prefix.

    A lower approximation of the factor complexity of the infinite sequence.
    Windows are compared as bytes, so equal hashes are always confirmed.
    """
    if n < 0 or n > len(s):
        raise ValueError(f"Need 0 <= n <= {len(s)}, got {n}")
    if n == 0:
        return 1
    windows = np.lib.stride_tricks.sliding_window_view(s.indices, n)
    return len({window.tobytes() for window in windows})


def morse_hedlund_bound(s: SequencePrefix, half_order: int, n: int) -> MorseHedlundBound:
    """
    Certify C_2k(s,N) >= n from a length-n factor occurring 2k times.

    With p = p_s(n), the 2k*p windows starting before 2k*p contain some
    factor at least 2k times. Its first 2k positions form D, and all
    2k terms agree at every offset, so V(s, n, D) = n.

    Raises:
        NotEnoughOccurrences: If the prefix cannot hold the 2k*p windows
    """
    if half_order < 1 or n < 1:
        raise ValueError(f"Need k >= 1 and n >= 1, got k={half_order}, n={n}")
    if n > len(s):
        raise NotEnoughOccurrences(f"Prefix of length {len(s)} has no factor of length {n}")

    needed = 2 * half_order
    complexity = factor_complexity(s, n)
    window = needed * complexity
    if window + n - 1 > len(s):
        raise NotEnoughOccurrences(
            f"Need {window + n - 1} symbols for {window} windows of length {n}, prefix has {len(s)}"
        )

    windows = np.lib.stride_tricks.sliding_window_view(s.indices, n)
    seen: Dict[bytes, List[int]] = {}
    shifts: Optional[Tuple[int, ...]] = None
    for position in range(window):
        key = windows[position].tobytes()
        positions = seen.setdefault(key, [])
        positions.append(position)
        if len(positions) == needed:
            shifts = tuple(positions)
            break

    if shifts is None:
        raise NotEnoughOccurrences(f"No length-{n} factor occurs {needed} times in the first {window} windows")

    value = correlation_sum(s, n, shifts)
    if value != n:
        raise MeasureError(f"Repeated factor gave V={value}, expected {n}")
    return MorseHedlundBound(
        order=needed,
        factor_length=n,
        complexity=complexity,
        window=window,
        shifts=shifts,
        value=value,
    )
