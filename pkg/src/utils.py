#!/usr/bin/env python3
"""
Utility helpers for seqlab
Shared error base class and word formatting/parsing
"""

from typing import Hashable, Iterable, Sequence, Tuple

EMPTY_WORD_SYMBOL = "ε"

Word = Tuple[Hashable, ...]


class SeqlabError(Exception):
    """Base class of every error raised by the seqlab library."""

    pass


class CapacityExceeded(SeqlabError):
    """
    Raised when a computation would materialise more symbols than allowed.

    The caps are configured (``morphic.max_letters``, ``measures.max_prefix``)
    because every object of the theory is infinite while memory is not.
    """

    pass


def _is_short_letter(letter: Hashable) -> bool:
    if isinstance(letter, bool):
        return False
    if isinstance(letter, int):
        return 0 <= letter < 10
    return isinstance(letter, str) and len(letter) == 1


def format_word(word: Iterable[Hashable], empty: str = EMPTY_WORD_SYMBOL) -> str:
    """Format a word compactly: '1001' for small digits, '10,3' otherwise."""
    letters = list(word)
    if not letters:
        return empty
    if all(_is_short_letter(letter) for letter in letters):
        return "".join(str(letter) for letter in letters)
    return ",".join(str(letter) for letter in letters)


def parse_word(text: str, numeric: bool = True) -> Word:
    """
    Parse a word written by format_word.

    Args:
        text: '1001', '10,3', '' or 'ε'
        numeric: Convert letters to int (digit words)

    Returns:
        Tuple of letters

    Examples:
        >>> parse_word("1001")  # (1, 0, 0, 1)
        >>> parse_word("10,3")  # (10, 3)
        >>> parse_word("ab", numeric=False)  # ('a', 'b')
    """
    text = text.strip()
    if text in ("", EMPTY_WORD_SYMBOL):
        return ()
    if "," in text:
        parts = [part.strip() for part in text.split(",") if part.strip() != ""]
    else:
        parts = list(text)
    if numeric:
        try:
            return tuple(int(part) for part in parts)
        except ValueError as e:
            raise ValueError(f"Not a digit word: {text!r}") from e
    return tuple(parts)


def genealogical_key(word: Sequence[Hashable], order: dict) -> Tuple[int, Tuple[int, ...]]:
    """Sort key for radix order: length first, then letter ranks."""
    return len(word), tuple(order[letter] for letter in word)
