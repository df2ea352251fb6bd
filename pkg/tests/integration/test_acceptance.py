#!/usr/bin/env python3
"""
Acceptance checks on the shipped presets
Exact values on desk-scale ranges; the long-running ones are marked slow
"""

import itertools

import pytest

from src.automata import check_language_equals_greedy, count_accepted, product
from src.measures import correlation_profile, correlation_sum, factor_complexity, morse_hedlund_bound
from src.morphic import HEAD_LETTER, build_phi_nu, cross_check_morphic_vs_automatic, iter_fixed_point
from src.numeration import (
    GenealogicalIndex,
    count_words_with_leading_zeros,
    nth_word_genealogical,
    word_index_genealogical,
)
from src.presets import champernowne_prefix, ex41_dfao, get_sequence, get_system, periodic_prefix, system_names
from src.witness import (
    PrefixTooShort,
    block_exponent_for,
    build_certificate,
    find_collisions,
    recurrence_constant_estimate,
    verify_certificate,
)

pytestmark = pytest.mark.integration

AUTOMATIC_PRESETS = ["thue_morse", "fib_sum_digits", "cantor", "ex41"]


class TestThueMorseOrderTwo:
    """Test the linear lower bound for Thue-Morse at order 2"""

    def test_bounds(self, thue_morse_1024):
        values = correlation_profile(thue_morse_1024, 64, 2).values
        for n in range(6, 65):
            assert 6 * values[n] >= n
        for n in range(5, 65):
            assert 12 * values[n] >= n


@pytest.mark.slow
class TestPeriodicParity:
    """Test (01)^omega: odd orders are exactly 1 while even orders are linear"""

    @pytest.mark.parametrize("odd,even", [(3, 2), (5, 4)])
    def test_odd_and_even(self, odd, even):
        prefix = periodic_prefix("01", 100)
        odd_values = correlation_profile(prefix, 100, odd).values
        even_values = correlation_profile(prefix, 100, even).values
        assert set(odd_values[odd:].tolist()) == {1}
        for n in range(even, 101):
            assert even_values[n] == n - even + 1


class TestCountingLaw:
    """Test padded counts and greedy agreement"""

    @pytest.mark.parametrize("name", ["base2", "fibonacci", "phi2"])
    def test_padded_counts(self, name):
        preset = get_system(name)
        for n in range(13):
            assert count_words_with_leading_zeros(preset.system, n, "enumerate") == preset.system.value(n)
            assert count_accepted(preset.padded_dfa, n) == preset.system.value(n)

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["base2", "fibonacci", "phi2"])
    def test_language_equals_greedy(self, name):
        preset = get_system(name)
        assert check_language_equals_greedy(preset.language_dfa, preset.system, 12).ok


@pytest.mark.slow
class TestRoundtrip:
    """Test val(rep(n)) = n and genealogical order"""

    @pytest.mark.parametrize("name", system_names())
    def test_roundtrip(self, name):
        system = get_system(name).system
        previous = None
        for n in range(10**5):
            word = system.rep(n)
            assert system.val(word) == n
            key = (len(word), word)
            if previous is not None:
                assert key > previous
            previous = key

    @pytest.mark.parametrize("name", system_names())
    def test_genealogical_index(self, name):
        """Test the n-th word of L_U in radix order is rep(n)"""
        preset = get_system(name)
        index = GenealogicalIndex(preset.language_dfa)
        for n in range(10**4):
            word = nth_word_genealogical(index, n)
            assert word == preset.system.rep(n)
            if n % 97 == 0:
                assert word_index_genealogical(index, word) == n


class TestConstructionCoherence:
    """Test the morphic presentation against the DFAO"""

    @pytest.mark.parametrize("name", AUTOMATIC_PRESETS)
    def test_ten_thousand_symbols(self, name):
        preset = get_sequence(name)
        assert cross_check_morphic_vs_automatic(preset.product(), preset.numeration.system, 10**4).ok

    def test_ex41_raw_fixed_point(self):
        p = product(get_system("ex41").language_dfa, ex41_dfao())
        phi, _ = build_phi_nu(p)
        names = {HEAD_LETTER: "α", ("a0'", "a"): "A", ("a0", "a"): "B", ("a1", "b"): "C"}
        raw = "".join(names[x] for x in itertools.islice(iter_fixed_point(phi, HEAD_LETTER), 18))
        assert raw == "αABBCBBBCBBBCCBBBC"


@pytest.mark.slow
class TestCertificateSoundness:
    """Test verified certificates and the bound they give for small N"""

    @pytest.mark.parametrize("name", AUTOMATIC_PRESETS)
    @pytest.mark.parametrize("half_order", [1, 2])
    def test_largest_certificate(self, name, half_order):
        preset = get_sequence(name)
        system = preset.numeration.system
        witness = find_collisions(preset.product(), system, half_order)
        certificate = build_certificate(witness, system, block_exponent_for(witness, system, 2**20))
        verified = verify_certificate(preset.prefix(certificate.implied_length), certificate, system)
        assert verified.verified
        assert verified.implied_length <= 2**20
        prefix = preset.prefix(certificate.implied_length)
        assert correlation_sum(prefix, certificate.block_length, certificate.shifts) == certificate.block_length

    @pytest.mark.parametrize("name", AUTOMATIC_PRESETS)
    @pytest.mark.parametrize("half_order", [1, 2])
    def test_exact_values_dominate(self, name, half_order):
        preset = get_sequence(name)
        system = preset.numeration.system
        witness = find_collisions(preset.product(), system, half_order)
        n_max = 300
        values = correlation_profile(preset.prefix(n_max), n_max, 2 * half_order, budget=2 * 10**9).values
        for n in range(2 * half_order, n_max + 1):
            try:
                exponent = block_exponent_for(witness, system, n)
            except PrefixTooShort:
                continue
            assert values[n] >= system.value(exponent)


@pytest.mark.slow
class TestLinearBehaviour:
    """Test C_2(s,N)/N stays away from zero"""

    @pytest.mark.parametrize("name", AUTOMATIC_PRESETS)
    def test_ratio(self, name):
        values = correlation_profile(get_sequence(name).prefix(256), 256, 2).values
        assert min(values[n] / n for n in range(32, 257)) >= 0.01


@pytest.mark.slow
class TestChampernowne:
    """Test the order-2 bound and full complexity"""

    def test_order_two(self):
        values = correlation_profile(champernowne_prefix(1000), 1000, 2).values
        for n in range(10, 1001):
            assert 48 * values[n] > n

    def test_complexity(self):
        prefix = champernowne_prefix(10**5)
        for n in range(1, 11):
            assert factor_complexity(prefix, n) == 2**n


class TestMorseHedlund:
    """Test repeated-factor bounds on Thue-Morse"""

    def test_bounds(self):
        """Test C_2(s, 2p(n)) >= n with p the factor complexity"""
        prefix = get_sequence("thue_morse").prefix(4096)
        complexity = {n: factor_complexity(prefix, n) for n in range(1, 33)}
        values = correlation_profile(prefix, 2 * max(complexity.values()), 2).values
        for n, p in complexity.items():
            bound = morse_hedlund_bound(prefix, 1, n)
            assert bound.value == n
            assert correlation_sum(prefix, n, bound.shifts) == n
            assert bound.certified_length <= 2 * p
            assert values[bound.certified_length] >= n
            assert values[2 * p] >= n


@pytest.mark.slow
class TestRecurrenceControl:
    """Test the Cantor sequence is not linearly recurrent while Thue-Morse is"""

    def test_cantor_gaps_unbounded(self):
        rows = recurrence_constant_estimate(get_sequence("cantor").prefix(3**8), 64)
        assert max(row.ratio for row in rows) > 32

    def test_thue_morse_gaps_bounded(self):
        rows = recurrence_constant_estimate(get_sequence("thue_morse").prefix(2**13), 64)
        assert max(row.ratio for row in rows) <= 10
