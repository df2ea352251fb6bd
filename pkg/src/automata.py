#!/usr/bin/env python3
"""
Automata for seqlab
DFA/DFAO machinery for numeration languages

Builds the automaton A_beta of a Parry number (recognising 0*L_beta), its
variant without leading zeros (recognising L_beta), and Cartesian products of
a numeration DFA with a DFAO. Also counts accepted words, enumerates languages
in genealogical order, and cross-checks automata against greedy expansions.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Hashable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from src.beta_systems import BetaSpec, LinearRecurrence, dominant_root, validate_parry_expansion
from src.numeration import DEFAULT_MAX_WORDS, GenealogicalIndex, PositionalSystem
from src.utils import CapacityExceeded, SeqlabError, format_word

logger = logging.getLogger(__name__)

State = Hashable
Letter = Hashable
Transitions = Mapping[Tuple[State, Letter], State]

FRESH_INITIAL_STATE = "a0'"
GROWTH_AGREEMENT_TOLERANCE = 1e-6


class AutomatonError(SeqlabError):
    """Base class for automaton errors."""

    pass


class LetterOutOfAlphabet(AutomatonError):
    """Raised when a word contains a letter outside the machine's alphabet."""

    pass


class AlphabetMismatch(AutomatonError):
    """Raised when two machines (or a machine and a system) disagree on the alphabet."""

    pass


class InvalidAutomaton(AutomatonError):
    """Raised when an automaton definition is inconsistent."""

    pass


def _check_structure(
    states: Tuple[State, ...],
    alphabet: Tuple[Letter, ...],
    initial: State,
    transitions: Transitions,
) -> None:
    if len(set(states)) != len(states):
        raise InvalidAutomaton("Duplicate states")
    if len(set(alphabet)) != len(alphabet):
        raise InvalidAutomaton("Duplicate letters in alphabet")
    known = set(states)
    if initial not in known:
        raise InvalidAutomaton(f"Initial state {initial!r} is not a state")
    letters = set(alphabet)
    for (source, letter), target in transitions.items():
        if source not in known or target not in known:
            raise InvalidAutomaton(f"Transition {source!r} -{letter!r}-> {target!r} uses an unknown state")
        if letter not in letters:
            raise InvalidAutomaton(f"Transition on unknown letter {letter!r}")


def _ordered_transitions(
    states: Tuple[State, ...], alphabet: Tuple[Letter, ...], transitions: Transitions
) -> Dict[Tuple[State, Letter], State]:
    return {
        (q, a): transitions[(q, a)]
        for q in states
        for a in alphabet
        if (q, a) in transitions
    }


@dataclass(frozen=True, eq=False)
class Dfa:
    """
    Deterministic finite automaton with a partial transition function.

    A missing transition rejects. Letters are ordered as in ``alphabet``,
    which fixes the genealogical order of the language.

    Attributes:
        states (tuple): States in their fixed order
        alphabet (tuple): Ordered letters
        initial: Initial state
        transitions (dict): (state, letter) -> state
        finals (frozenset): Accepting states
    """

    states: Tuple[State, ...]
    alphabet: Tuple[Letter, ...]
    initial: State
    transitions: Dict[Tuple[State, Letter], State]
    finals: FrozenSet[State]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "finals", frozenset(self.finals))
        _check_structure(self.states, self.alphabet, self.initial, self.transitions)
        if not self.finals <= set(self.states):
            raise InvalidAutomaton("Final states must be states")
        object.__setattr__(
            self, "transitions", _ordered_transitions(self.states, self.alphabet, self.transitions)
        )

    def step(self, state: State, letter: Letter) -> Optional[State]:
        return self.transitions.get((state, letter))

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Dfa):
            return NotImplemented
        return (
            self.states == other.states
            and self.alphabet == other.alphabet
            and self.initial == other.initial
            and self.transitions == other.transitions
            and self.finals == other.finals
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Dfao:
    """
    Deterministic finite automaton with output; transitions are total.

    Attributes:
        states (tuple): States in their fixed order
        alphabet (tuple): Ordered letters
        initial: Initial state
        transitions (dict): (state, letter) -> state, defined everywhere
        output (dict): state -> output letter
    """

    states: Tuple[State, ...]
    alphabet: Tuple[Letter, ...]
    initial: State
    transitions: Dict[Tuple[State, Letter], State]
    output: Dict[State, Any]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        _check_structure(self.states, self.alphabet, self.initial, self.transitions)
        for q in self.states:
            if q not in self.output:
                raise InvalidAutomaton(f"No output for state {q!r}")
            for a in self.alphabet:
                if (q, a) not in self.transitions:
                    raise InvalidAutomaton(f"DFAO transition missing for ({q!r}, {a!r})")
        object.__setattr__(
            self, "transitions", _ordered_transitions(self.states, self.alphabet, self.transitions)
        )
        object.__setattr__(self, "output", {q: self.output[q] for q in self.states})

    def step(self, state: State, letter: Letter) -> Optional[State]:
        return self.transitions.get((state, letter))

    @property
    def output_alphabet(self) -> Tuple[Any, ...]:
        return tuple(sorted(set(self.output.values()), key=str))

    def as_dfa(self) -> Dfa:
        """Underlying DFA with every state final."""
        return Dfa(self.states, self.alphabet, self.initial, dict(self.transitions), frozenset(self.states))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class ProductAutomaton:
    """
    Reachable part of the Cartesian product of a DFA and a DFAO.

    States are pairs (q, r) ordered by (DFA state order, DFAO state order).
    A transition exists exactly where the DFA transition exists, since the
    DFAO is total. Outputs come from the DFAO component.
    """

    dfa: Dfa
    dfao: Dfao
    states: Tuple[Tuple[State, State], ...]
    initial: Tuple[State, State]
    transitions: Dict[Tuple[Tuple[State, State], Letter], Tuple[State, State]] = field(repr=False)
    finals: FrozenSet[Tuple[State, State]] = field(repr=False)
    output: Dict[Tuple[State, State], Any] = field(repr=False)

    @property
    def alphabet(self) -> Tuple[Letter, ...]:
        return self.dfa.alphabet

    @property
    def full_size(self) -> int:
        """|Q|*|R|, the size used for pigeonhole bounds."""
        return len(self.dfa.states) * len(self.dfao.states)

    def step(self, state: Tuple[State, State], letter: Letter) -> Optional[Tuple[State, State]]:
        return self.transitions.get((state, letter))

    def as_dfa(self) -> Dfa:
        return Dfa(self.states, self.alphabet, self.initial, dict(self.transitions), self.finals)

    __hash__ = None


Machine = Union[Dfa, Dfao, ProductAutomaton]


@dataclass(frozen=True)
class Run:
    """Result of running a machine; state is None when a transition is missing."""

    state: Optional[State]
    output: Any = None

    @property
    def defined(self) -> bool:
        return self.state is not None


@dataclass(frozen=True)
class LanguageCheck:
    """Outcome of check_language_equals_greedy; mismatch is None when ok."""

    ok: bool
    mismatch: Optional[Tuple[int, ...]] = None
    accepted_by_automaton: Optional[bool] = None
    words_compared: int = 0


@dataclass(frozen=True)
class GrowthReport:
    """U-growth against language growth against an optional claimed value."""

    u_growth: float
    language_growth: float
    claimed: Optional[float]
    index: int
    disagreement: bool


def state_label(state: State) -> str:
    """Printable name of a state; product states print as '(q,r)'."""
    if isinstance(state, tuple):
        return "(" + ",".join(state_label(part) for part in state) + ")"
    return str(state)


def build_a_beta(spec: BetaSpec) -> Dfa:
    """
    Automaton A_beta whose path labels are the words of 0*L_beta.

    Built from d*_beta(1) = t(1)...t(m)(t(m+1)...t(m+k))^omega with states
    a0..a(m+k-1), all final:
      - a(i-1) -t-> a0 for 1 <= i <= m+k and 0 <= t < t(i)
      - a(i-1) -t(i)-> a(i) for 1 <= i < m+k
      - a(m+k-1) -t(m+k)-> a(m)
    """
    star = spec.quasi_greedy()
    validate_parry_expansion(star)

    m, k = star.m, star.k
    size = m + k
    t = star.digits(size)
    names = tuple(f"a{i}" for i in range(size))
    alphabet = tuple(range(t[0] + 1))

    transitions: Dict[Tuple[State, Letter], State] = {}
    for i in range(1, size + 1):
        source = names[i - 1]
        for digit in range(t[i - 1]):
            transitions[(source, digit)] = names[0]
        target = names[i] if i < size else names[m]
        transitions[(source, t[i - 1])] = target

    dfa = Dfa(names, alphabet, names[0], transitions, frozenset(names))
    logger.debug(f"Built A_beta for {star} with {size} states")
    return dfa


def build_l_beta_dfa(a_beta: Dfa) -> Dfa:
    """Add a fresh initial state without a 0-transition, so leading zeros are rejected."""
    if FRESH_INITIAL_STATE in a_beta.states:
        raise InvalidAutomaton(f"State name {FRESH_INITIAL_STATE!r} is already used")

    transitions = dict(a_beta.transitions)
    zero = a_beta.alphabet[0]
    for letter in a_beta.alphabet:
        if letter == zero:
            continue
        target = a_beta.step(a_beta.initial, letter)
        if target is not None:
            transitions[(FRESH_INITIAL_STATE, letter)] = target

    states = (FRESH_INITIAL_STATE,) + a_beta.states
    return Dfa(states, a_beta.alphabet, FRESH_INITIAL_STATE, transitions, frozenset(states))


def product(dfa: Dfa, dfao: Dfao) -> ProductAutomaton:
    """Reachable part of dfa x dfao with deterministic state order."""
    if tuple(dfa.alphabet) != tuple(dfao.alphabet):
        raise AlphabetMismatch(
            f"DFA alphabet {dfa.alphabet} differs from DFAO alphabet {dfao.alphabet}"
        )

    start = (dfa.initial, dfao.initial)
    seen = {start}
    queue = deque([start])
    raw: Dict[Tuple[Tuple[State, State], Letter], Tuple[State, State]] = {}
    while queue:
        q, r = queue.popleft()
        for letter in dfa.alphabet:
            q2 = dfa.step(q, letter)
            if q2 is None:
                continue
            target = (q2, dfao.step(r, letter))
            raw[((q, r), letter)] = target
            if target not in seen:
                seen.add(target)
                queue.append(target)

    q_rank = {q: i for i, q in enumerate(dfa.states)}
    r_rank = {r: i for i, r in enumerate(dfao.states)}
    states = tuple(sorted(seen, key=lambda pair: (q_rank[pair[0]], r_rank[pair[1]])))
    transitions = _ordered_transitions(states, dfa.alphabet, raw)
    finals = frozenset(pair for pair in states if pair[0] in dfa.finals)
    output = {pair: dfao.output[pair[1]] for pair in states}

    logger.debug(f"Product automaton: {len(states)} reachable states of {len(dfa.states) * len(dfao.states)}")
    return ProductAutomaton(dfa, dfao, states, start, transitions, finals, output)


def run(machine: Machine, word: Sequence[Letter]) -> Run:
    """State reached from the initial state, plus the output when the machine has one."""
    letters = set(machine.alphabet)
    state = machine.initial
    for letter in word:
        if letter not in letters:
            raise LetterOutOfAlphabet(f"Letter {letter!r} is not in {machine.alphabet}")
        if state is not None:
            state = machine.step(state, letter)

    output = None
    if state is not None and isinstance(machine, (Dfao, ProductAutomaton)):
        output = machine.output[state]
    return Run(state=state, output=output)


def accepts(dfa: Dfa, word: Sequence[Letter]) -> bool:
    result = run(dfa, word)
    return result.defined and result.state in dfa.finals


def count_accepted(dfa: Dfa, length: int) -> int:
    """Number of accepted words of the given length."""
    if length < 0:
        raise ValueError(f"length must be non-negative, got {length}")
    paths: Dict[State, int] = {dfa.initial: 1}
    for _ in range(length):
        following: Dict[State, int] = {}
        for q, ways in paths.items():
            for letter in dfa.alphabet:
                r = dfa.step(q, letter)
                if r is not None:
                    following[r] = following.get(r, 0) + ways
        paths = following
    return sum(ways for q, ways in paths.items() if q in dfa.finals)


def iter_language(
    dfa: Dfa, max_length: Optional[int] = None, index: Optional[GenealogicalIndex] = None
) -> Iterator[Tuple[Letter, ...]]:
    """
    Accepted words in genealogical order.

    Each length is enumerated depth-first in alphabet order; branches that
    cannot reach an accepting state at the right length are pruned with the
    path-count table, so every visited prefix leads to an accepted word.
    """
    index = index or GenealogicalIndex(dfa)
    length = 0
    while max_length is None or length <= max_length:
        if not index.is_infinite and length > len(dfa.states):
            return
        if index.count(dfa.initial, length):
            stack: List[Tuple[State, Tuple[Letter, ...]]] = [(dfa.initial, ())]
            while stack:
                state, prefix = stack.pop()
                if len(prefix) == length:
                    yield prefix
                    continue
                rest = length - len(prefix) - 1
                for letter in reversed(dfa.alphabet):
                    target = dfa.step(state, letter)
                    if target is not None and index.count(target, rest):
                        stack.append((target, prefix + (letter,)))
        length += 1


def check_language_equals_greedy(
    dfa: Dfa,
    system: PositionalSystem,
    up_to_len: int,
    leading_zeros: bool = False,
    max_words: int = DEFAULT_MAX_WORDS,
) -> LanguageCheck:
    """
    Compare the accepted words with the greedy words, length by length.

    With leading_zeros=False the reference language is L_U; with True it is
    0*L_U (greedy words left-padded with zeros to the length). Returns the
    genealogically first word on which they disagree.

    Raises:
        CapacityExceeded: If either side lists more than max_words words
    """
    if tuple(dfa.alphabet) != system.digit_alphabet:
        raise AlphabetMismatch(
            f"DFA alphabet {dfa.alphabet} differs from digit alphabet {system.digit_alphabet}"
        )

    index = GenealogicalIndex(dfa)
    lengths = range(up_to_len + 1)
    if leading_zeros:
        greedy_total = sum(system.value(length) for length in lengths)
    else:
        greedy_total = system.value(up_to_len)
    accepted_total = sum(index.count(dfa.initial, length) for length in lengths)
    needed = max(greedy_total, accepted_total)
    if needed > max_words:
        raise CapacityExceeded(
            f"Language check of {system.name} up to length {up_to_len} lists {needed} words "
            f"(limit {max_words})"
        )
    accepted_iter = iter_language(dfa, max_length=up_to_len, index=index)
    pending: Optional[Tuple[int, ...]] = next(accepted_iter, None)
    compared = 0

    for length in range(up_to_len + 1):
        accepted = set()
        while pending is not None and len(pending) == length:
            accepted.add(pending)
            pending = next(accepted_iter, None)

        if leading_zeros:
            greedy = {
                (0,) * (length - len(w)) + w
                for w in (system.rep(n) for n in range(system.value(length)))
            }
        else:
            greedy = set(system.greedy_words_of_length(length))

        compared += len(accepted | greedy)
        broken = accepted.symmetric_difference(greedy)
        if broken:
            first = min(broken)
            logger.warning(
                f"Automaton and greedy language of {system.name} disagree on {format_word(first)}"
            )
            return LanguageCheck(
                ok=False,
                mismatch=first,
                accepted_by_automaton=first in accepted,
                words_compared=compared,
            )

    return LanguageCheck(ok=True, words_compared=compared)


def growth_report(
    rec: LinearRecurrence,
    dfa: Dfa,
    claimed: Optional[float] = None,
    n_terms: int = 60,
    tolerance: float = 1e-9,
) -> GrowthReport:
    """
    Growth of U against growth of the number of accepted words.

    A disagreement is flagged when the two growth values, or either of them
    and the claimed value, differ by more than a small tolerance.
    """
    root = dominant_root(rec, n_terms, tolerance)
    n = root.index
    language = count_accepted(dfa, n) / count_accepted(dfa, n - 1)

    values = [root.beta, language] + ([claimed] if claimed is not None else [])
    disagreement = max(values) - min(values) > GROWTH_AGREEMENT_TOLERANCE
    if disagreement:
        logger.warning(
            f"Growth disagreement: U grows like {root.beta:.6f}, "
            f"language like {language:.6f}, claimed {claimed}"
        )
    return GrowthReport(
        u_growth=root.beta,
        language_growth=language,
        claimed=claimed,
        index=n,
        disagreement=disagreement,
    )
