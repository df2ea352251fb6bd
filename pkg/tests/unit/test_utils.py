#!/usr/bin/env python3
"""Tests for word helpers"""

import pytest

from src.utils import CapacityExceeded, SeqlabError, format_word, genealogical_key, parse_word

pytestmark = pytest.mark.unit


class TestWords:
    """Test word formatting and parsing"""

    def test_format_digits(self):
        assert format_word((1, 0, 0, 1)) == "1001"

    def test_format_large_digits(self):
        assert format_word((10, 3)) == "10,3"

    def test_format_empty(self):
        assert format_word(()) == "ε"
        assert format_word((), empty="") == ""

    def test_format_letters(self):
        assert format_word(("a", "b")) == "ab"

    def test_parse(self):
        assert parse_word("1001") == (1, 0, 0, 1)
        assert parse_word("10,3") == (10, 3)
        assert parse_word("ε") == ()
        assert parse_word("") == ()
        assert parse_word("ab", numeric=False) == ("a", "b")

    def test_parse_rejects_letters_when_numeric(self):
        with pytest.raises(ValueError):
            parse_word("1a")

    def test_genealogical_key_orders_by_length_first(self):
        order = {0: 0, 1: 1}
        words = [(1, 1), (0,), (1, 0, 0), (1,), (1, 0)]
        assert sorted(words, key=lambda w: genealogical_key(w, order)) == [
            (0,),
            (1,),
            (1, 0),
            (1, 1),
            (1, 0, 0),
        ]

    def test_capacity_is_seqlab_error(self):
        assert issubclass(CapacityExceeded, SeqlabError)
