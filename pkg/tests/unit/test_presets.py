#!/usr/bin/env python3
"""Tests for shipped systems and sequences"""

import pytest

from src.presets import (
    UnknownPreset,
    champernowne_prefix,
    get_sequence,
    get_system,
    periodic_prefix,
    sequence_names,
    system_names,
)
from src.utils import CapacityExceeded

pytestmark = pytest.mark.unit


class TestSystems:
    """Test numeration presets"""

    @pytest.mark.parametrize(
        "name,values",
        [
            ("base2", [1, 2, 4, 8, 16]),
            ("base3", [1, 3, 9, 27, 81]),
            ("fibonacci", [1, 2, 3, 5, 8, 13]),
            ("phi2", [1, 3, 8, 21, 55]),
            ("ex41", [1, 4, 13, 40]),
        ],
    )
    def test_values(self, name, values):
        assert get_system(name).system.values(len(values)) == values

    def test_parry_presets_carry_beta(self):
        preset = get_system("fibonacci")
        assert preset.beta is not None
        assert preset.padded_dfa is not None

    def test_ex41_has_no_beta(self):
        preset = get_system("ex41")
        assert preset.beta is None
        assert preset.padded_dfa is None

    def test_presets_are_cached(self):
        assert get_system("phi2") is get_system("phi2")

    def test_unknown(self):
        with pytest.raises(UnknownPreset):
            get_system("base7")

    def test_names(self):
        assert "ex41" in system_names()
        assert "fibonacci" in system_names()


class TestSequences:
    """Test sequence presets"""

    @pytest.mark.parametrize(
        "name,text",
        [
            ("thue_morse", "0110100110010110"),
            ("fib_sum_digits", "0111010010001"),
            ("cantor", "010111010111111111010"),
            ("ex41", "0001000100011"),
        ],
    )
    def test_automatic_prefixes(self, name, text):
        preset = get_sequence(name)
        assert preset.is_automatic
        assert preset.prefix(len(text)).to_text() == text
        assert preset.automatic_prefix(len(text)).to_text() == text

    def test_champernowne(self):
        assert champernowne_prefix(15).to_text() == "011011100101110"
        assert get_sequence("champernowne").prefix(15).to_text() == "011011100101110"

    def test_periodic(self):
        assert get_sequence("periodic:011").prefix(7).to_text() == "0110110"

    @pytest.mark.parametrize("pattern", ["", "012", "ab"])
    def test_bad_periodic(self, pattern):
        with pytest.raises(UnknownPreset):
            periodic_prefix(pattern, 4)

    def test_constant(self):
        assert get_sequence("constant").prefix(3).to_text() == "000"
        assert get_sequence("constant:1").prefix(3).to_text() == "111"
        with pytest.raises(UnknownPreset):
            get_sequence("constant:2")

    def test_provenance(self):
        assert get_sequence("thue_morse").prefix(8).provenance == "thue_morse N=8"

    def test_not_automatic(self):
        preset = get_sequence("champernowne")
        assert not preset.is_automatic
        with pytest.raises(UnknownPreset):
            preset.product()

    def test_capacity(self):
        with pytest.raises(CapacityExceeded):
            get_sequence("periodic:01").prefix(20, max_letters=10)

    def test_unknown(self):
        with pytest.raises(UnknownPreset):
            get_sequence("rudin_shapiro")
        assert "thue_morse" in sequence_names()
