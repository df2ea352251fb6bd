#!/usr/bin/env python3
"""Tests for positional numeration systems and genealogical indexing"""

import pytest

from src.automata import Dfa
from src.beta_systems import LinearRecurrence
from src.numeration import (
    DigitOutOfRange,
    FiniteLanguage,
    GenealogicalIndex,
    NotInLanguage,
    PositionalSystem,
    count_words_with_leading_zeros,
    is_bertrand_up_to,
    is_greedy,
    nth_word_genealogical,
    rep,
    val,
    word_index_genealogical,
)
from src.presets import get_system
from src.utils import CapacityExceeded, SeqlabError

pytestmark = pytest.mark.unit


class TestPositionalSystem:
    """Test greedy representations"""

    def test_fibonacci_values(self, fibonacci):
        assert fibonacci.system.values(6) == [1, 2, 3, 5, 8, 13]
        assert fibonacci.system.digit_alphabet == (0, 1)

    def test_fibonacci_rep(self, fibonacci):
        """Test Zeckendorf representation of 6 is 1001"""
        assert rep(fibonacci.system, 6) == (1, 0, 0, 1)
        assert rep(fibonacci.system, 0) == ()
        assert rep(fibonacci.system, 1) == (1,)

    def test_phi2_rep(self, phi2):
        assert phi2.system.digit_alphabet == (0, 1, 2)
        assert phi2.system.rep(7) == (2, 1)
        assert phi2.system.rep(8) == (1, 0, 0)

    def test_ex41_alphabet(self, ex41_system):
        """Test U(n+1) = 3U(n) + 1 needs the digits 0..3"""
        assert ex41_system.system.digit_alphabet == (0, 1, 2, 3)
        assert ex41_system.system.rep(12) == (3, 0)
        assert ex41_system.system.rep(39) == (3, 0, 0)

    def test_val_accepts_leading_zeros(self, fibonacci):
        assert val(fibonacci.system, (0, 0, 1, 0, 0, 1)) == 6

    def test_val_digit_out_of_range(self, fibonacci):
        with pytest.raises(DigitOutOfRange):
            fibonacci.system.val((2,))

    def test_roundtrip(self, phi2):
        system = phi2.system
        for n in range(2000):
            assert system.val(system.rep(n)) == n

    def test_rep_is_genealogically_increasing(self, fibonacci):
        words = [fibonacci.system.rep(n) for n in range(500)]
        keys = [(len(w), w) for w in words]
        assert keys == sorted(keys)
        assert len(set(words)) == len(words)

    def test_large_values_extend_cache(self, fibonacci):
        """Test values far beyond the probe window are computed exactly"""
        n = 10**30
        assert fibonacci.system.val(fibonacci.system.rep(n)) == n

    def test_is_greedy(self, fibonacci):
        assert is_greedy(fibonacci.system, (1, 0, 1))
        assert not is_greedy(fibonacci.system, (1, 1))
        assert not is_greedy(fibonacci.system, (0, 1))
        assert is_greedy(fibonacci.system, ())

    def test_greedy_words_of_length(self, fibonacci):
        assert list(fibonacci.system.greedy_words_of_length(4)) == [
            (1, 0, 0, 0),
            (1, 0, 0, 1),
            (1, 0, 1, 0),
        ]

    def test_non_increasing_recurrence_rejected(self):
        with pytest.raises(SeqlabError):
            PositionalSystem(LinearRecurrence((1, -1), (1, 2)))

    def test_probe_depth_must_be_positive(self):
        with pytest.raises(ValueError):
            PositionalSystem(LinearRecurrence((2,), (1,)), probe_depth=0)


class TestCounting:
    """Test counting of words with leading zeros"""

    @pytest.mark.parametrize("preset", ["fibonacci", "phi2", "ex41"])
    def test_enumeration_matches_table(self, preset):
        system = get_system(preset).system
        for length in range(9):
            assert count_words_with_leading_zeros(system, length, "enumerate") == system.value(length)

    def test_phi2_length_two(self, phi2):
        assert count_words_with_leading_zeros(phi2.system, 2, "enumerate") == 8

    def test_unknown_method(self, phi2):
        with pytest.raises(ValueError):
            count_words_with_leading_zeros(phi2.system, 2, "guess")

    def test_enumeration_refused_beyond_capacity(self):
        """Test base 10 at length 12 is refused before any word is enumerated"""
        system = get_system("base10").system
        with pytest.raises(CapacityExceeded):
            count_words_with_leading_zeros(system, 12, "enumerate")
        assert count_words_with_leading_zeros(system, 12) == 10**12

    def test_max_words(self, fibonacci):
        with pytest.raises(CapacityExceeded):
            count_words_with_leading_zeros(fibonacci.system, 12, "enumerate", max_words=100)
        assert count_words_with_leading_zeros(fibonacci.system, 9, "enumerate", max_words=100) == 89


class TestBertrand:
    """Test the Bertrand property on prefixes of the language"""

    def test_fibonacci_is_bertrand(self, fibonacci):
        assert is_bertrand_up_to(fibonacci.system, 10).ok

    def test_ex41_is_bertrand(self, ex41_system):
        assert is_bertrand_up_to(ex41_system.system, 6).ok

    def test_n_plus_one_is_bertrand(self):
        """Test U(n) = n + 1, whose language is 10*"""
        system = PositionalSystem(LinearRecurrence((2, -1), (1, 2)), name="n+1")
        assert list(system.greedy_words_of_length(3)) == [(1, 0, 0)]
        assert is_bertrand_up_to(system, 8).ok

    def test_two_n_plus_one_is_not_bertrand(self):
        """Test U(n) = 2n + 1: 2 is greedy but 20 is not"""
        system = PositionalSystem(LinearRecurrence((2, -1), (1, 3)), name="2n+1")
        check = is_bertrand_up_to(system, 5)
        assert not check.ok
        assert check.counterexample == (2,)

    def test_capacity(self, fibonacci):
        with pytest.raises(CapacityExceeded):
            is_bertrand_up_to(fibonacci.system, 40, max_words=1000)


class TestGenealogicalIndex:
    """Test radix-order indexing of regular languages"""

    def test_fibonacci_language_matches_rep(self, fibonacci):
        index = GenealogicalIndex(fibonacci.language_dfa)
        assert index.is_infinite
        for n in range(300):
            word = nth_word_genealogical(index, n)
            assert word == fibonacci.system.rep(n)
            assert word_index_genealogical(index, word) == n

    def test_a_star_b_star(self):
        """Test a*b*: ε, a, b, aa, ab, bb, aaa, ..."""
        dfa = Dfa(
            ("A", "B"),
            ("a", "b"),
            "A",
            {("A", "a"): "A", ("A", "b"): "B", ("B", "b"): "B"},
            {"A", "B"},
        )
        index = GenealogicalIndex(dfa)
        assert [index.nth_word(n) for n in range(6)] == [
            (),
            ("a",),
            ("b",),
            ("a", "a"),
            ("a", "b"),
            ("b", "b"),
        ]
        assert index.word_index(("a", "a", "a")) == 6

    def test_finite_language(self):
        dfa = Dfa(("s", "t"), (0, 1), "s", {("s", 1): "t"}, {"t"})
        index = GenealogicalIndex(dfa)
        assert not index.is_infinite
        assert index.nth_word(0) == (1,)
        with pytest.raises(FiniteLanguage):
            index.nth_word(1)

    def test_word_not_in_language(self, fibonacci):
        index = GenealogicalIndex(fibonacci.language_dfa)
        with pytest.raises(NotInLanguage):
            index.word_index((1, 1))
        with pytest.raises(NotInLanguage):
            index.word_index((0, 1))
        with pytest.raises(NotInLanguage):
            index.word_index((2,))
