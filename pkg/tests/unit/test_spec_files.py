#!/usr/bin/env python3
"""Tests for YAML spec files and automaton tables"""

import pytest

from src.automata import Dfa, Dfao, run
from src.presets import cantor_dfao, get_sequence, get_system
from src.spec_files import (
    TABLE_HEADER,
    SpecFileError,
    format_automaton,
    load_spec_file,
    parse_automaton_table,
    read_spec_data,
    resolve_sequence,
    resolve_system,
    spec_digest,
)

pytestmark = pytest.mark.unit

PARITY_AUTOMATON = """\
automaton:
  states: [even, odd]
  alphabet: [0, 1]
  initial: even
  transitions:
    - [even, 0, even]
    - [even, 1, odd]
    - [odd, 0, odd]
    - [odd, 1, even]
  outputs: {even: 0, odd: 1}
"""

EX41_SPEC = """\
system:
  name: ex41
  recurrence:
    coefficients: [4, -3]
    initial: [1, 4]
  language: |
    initial s
    finals s t u
    s 1 t
    s 2 t
    s 3 u
    t 0 t
    t 1 t
    t 2 t
    t 3 u
    u 0 u
automaton:
  table: |
    initial a
    output a 0
    output b 1
    a 0 a
    a 1 a
    a 2 a
    a 3 b
    b 0 b
    b 1 b
    b 2 b
    b 3 b
sequence:
  kind: automatic
  name: ex41
"""


@pytest.fixture
def write_spec(temp_dir):
    """Write YAML text to a spec file and return its path"""

    def _write(text: str, name: str = "spec.yaml"):
        path = temp_dir / name
        path.write_text(text)
        return path

    return _write


class TestAutomatonTables:
    """Test the transition table format"""

    def test_dfao_roundtrip(self):
        original = cantor_dfao()
        text = format_automaton(original)
        assert text.startswith(TABLE_HEADER)
        parsed = parse_automaton_table(text)
        assert isinstance(parsed, Dfao)
        assert parsed.alphabet == (0, 1, 2)
        for word in [(), (2, 0), (1,), (2, 2, 1, 0)]:
            assert run(parsed, word).output == run(original, word).output

    def test_dfa_roundtrip(self, fibonacci):
        parsed = parse_automaton_table(format_automaton(fibonacci.language_dfa))
        assert isinstance(parsed, Dfa)
        assert parsed.initial == "a0'"
        assert parsed.finals == frozenset({"a0'", "a0", "a1"})
        assert parsed.step("a1", 1) is None

    def test_bad_line(self):
        with pytest.raises(SpecFileError) as info:
            parse_automaton_table("initial s\ns 0\n")
        assert info.value.location == "automaton:2"

    def test_missing_initial(self):
        with pytest.raises(SpecFileError):
            parse_automaton_table("s 0 s\n")

    def test_finals_and_outputs(self):
        with pytest.raises(SpecFileError):
            parse_automaton_table("initial s\nfinals s\noutput s 0\ns 0 s\n")

    def test_non_numeric_letters(self):
        dfa = parse_automaton_table("initial s\nfinals s\ns a s\n", numeric_letters=False)
        assert dfa.alphabet == ("a",)


class TestSpecFiles:
    """Test loading sequence generators from spec files"""

    def test_preset_sequence(self, write_spec):
        source = load_spec_file(write_spec("sequence: thue_morse\n"))
        assert source.is_automatic
        assert source.prefix(8).to_text() == "01101001"
        assert source.digest == spec_digest({"sequence": "thue_morse"})

    def test_periodic_and_constant(self, write_spec):
        assert load_spec_file(write_spec("sequence: {periodic: '001'}\n")).prefix(5).to_text() == "00100"
        assert load_spec_file(write_spec("sequence: {constant: 1}\n")).prefix(3).to_text() == "111"

    def test_automatic_beta_system(self, write_spec):
        text = "system: {beta: '(10)'}\n" + PARITY_AUTOMATON + "sequence: {kind: automatic}\n"
        source = load_spec_file(write_spec(text))
        expected = get_sequence("fib_sum_digits").prefix(100)
        assert source.prefix(100) == expected
        assert source.automatic_prefix(100) == expected

    def test_recurrence_system_with_language(self, write_spec):
        source = load_spec_file(write_spec(EX41_SPEC))
        assert source.name == "ex41"
        assert source.numeration.system.values(4) == [1, 4, 13, 40]
        assert source.prefix(200) == get_sequence("ex41").prefix(200)

    def test_morphic(self, write_spec):
        text = "morphism:\n  images: {a: aba, b: bbb}\n  seed: a\n  coding: {a: 0, b: 1}\n"
        source = load_spec_file(write_spec(text))
        assert not source.is_automatic
        assert source.prefix(9).to_text() == "010111010"

    def test_digest_ignores_key_order(self, write_spec):
        first = load_spec_file(write_spec("sequence: {periodic: '01', name: p}\n", "a.yaml"))
        second = load_spec_file(write_spec("sequence: {name: p, periodic: '01'}\n", "b.yaml"))
        assert first.digest == second.digest

    def test_resolve_system(self, write_spec):
        assert resolve_system(name="phi2").system.values(3) == [1, 3, 8]
        path = write_spec("system: {beta: '2(1)'}\n")
        assert resolve_system(spec_path=path).system.values(3) == [1, 3, 8]

    def test_resolve_sequence_needs_one_input(self, write_spec):
        with pytest.raises(SpecFileError):
            resolve_sequence()
        with pytest.raises(SpecFileError):
            resolve_sequence(name="thue_morse", spec_path=write_spec("sequence: thue_morse\n"))

    def test_unknown_preset(self):
        with pytest.raises(SpecFileError) as info:
            resolve_sequence(name="nope")
        assert info.value.location == "preset"


class TestSpecFileErrors:
    """Test error locations"""

    def test_invalid_yaml_has_line(self, write_spec):
        path = write_spec("sequence:\n  kind: [automatic\n")
        with pytest.raises(SpecFileError) as info:
            read_spec_data(path)
        assert info.value.location.startswith(f"{path}:")
        assert info.value.location.count(":") >= 2

    def test_missing_file(self, temp_dir):
        with pytest.raises(SpecFileError):
            read_spec_data(temp_dir / "missing.yaml")

    def test_unknown_section(self, write_spec):
        with pytest.raises(SpecFileError) as info:
            load_spec_file(write_spec("sequence: thue_morse\nplot: true\n"))
        assert "plot" in str(info.value)

    def test_recurrence_needs_language(self, write_spec):
        text = "system:\n  recurrence: {coefficients: [4, -3], initial: [1, 4]}\n" + PARITY_AUTOMATON
        with pytest.raises(SpecFileError) as info:
            load_spec_file(write_spec(text + "sequence: {kind: automatic}\n"))
        assert info.value.location == "system.language"

    def test_alphabet_mismatch(self, write_spec):
        text = "system: fibonacci\nautomaton: |\n  initial a\n  output a 0\n  a 0 a\n  a 1 a\n  a 2 a\n"
        with pytest.raises(SpecFileError) as info:
            load_spec_file(write_spec(text + "sequence: {kind: automatic}\n"))
        assert info.value.location == "automaton.alphabet"

    def test_two_generators(self, write_spec):
        with pytest.raises(SpecFileError):
            load_spec_file(write_spec("sequence: {periodic: '01', champernowne: true}\n"))

    def test_missing_transition_field(self, write_spec):
        text = (
            "system: fibonacci\n"
            "automaton: {states: [a], alphabet: [0, 1], initial: a}\n"
            "sequence: {kind: automatic}\n"
        )
        with pytest.raises(SpecFileError) as info:
            load_spec_file(write_spec(text))
        assert info.value.location == "automaton.transitions"

    def test_not_prolongable(self, write_spec):
        with pytest.raises(SpecFileError):
            load_spec_file(write_spec("morphism: {images: {a: ba, b: a}, seed: a}\n"))

    def test_unknown_kind(self, write_spec):
        with pytest.raises(SpecFileError):
            load_spec_file(write_spec("sequence: {kind: regular}\n"))

    def test_bad_beta(self, write_spec):
        with pytest.raises(SpecFileError):
            resolve_system(spec_path=write_spec("system: {beta: '(12)'}\n"))

    def test_unknown_image_letter_has_line(self, write_spec):
        text = "morphism:\n  images:\n    a: ab\n    b: c\n  seed: a\n"
        with pytest.raises(SpecFileError) as info:
            load_spec_file(write_spec(text))
        assert info.value.location == "morphism.images.b"
        assert (info.value.line, info.value.column) == (4, 8)
        assert "(line 4, column 8)" in str(info.value)

    def test_unknown_seed_has_line(self, write_spec):
        with pytest.raises(SpecFileError) as info:
            load_spec_file(write_spec("morphism:\n  images: {a: ab, b: a}\n  seed: c\n"))
        assert info.value.location == "morphism.seed"
        assert info.value.line == 3

    def test_table_line_maps_to_file_line(self, write_spec):
        """Test a bad row of a block-scalar table points at its own line of the file"""
        text = "system: fibonacci\nautomaton: |\n  initial a\n  output a 0\n  a 0\nsequence: {kind: automatic}\n"
        with pytest.raises(SpecFileError) as info:
            load_spec_file(write_spec(text))
        assert info.value.location == "automaton:3"
        assert (info.value.line, info.value.column) == (5, 1)

    def test_missing_field_uses_parent_line(self, write_spec):
        text = (
            "system: fibonacci\n"
            "sequence: {kind: automatic}\n"
            "automaton: {states: [a], alphabet: [0, 1], initial: a}\n"
        )
        with pytest.raises(SpecFileError) as info:
            load_spec_file(write_spec(text))
        assert info.value.location == "automaton.transitions"
        assert info.value.line == 3

    def test_bad_transition_entry_has_line(self, write_spec):
        text = (
            "system: fibonacci\n"
            "automaton:\n"
            "  states: [a]\n"
            "  alphabet: [0, 1]\n"
            "  initial: a\n"
            "  transitions:\n"
            "    - [a, 0, a]\n"
            "    - [a, 1]\n"
            "  outputs: {a: 0}\n"
            "sequence: {kind: automatic}\n"
        )
        with pytest.raises(SpecFileError) as info:
            load_spec_file(write_spec(text))
        assert info.value.location == "automaton.transitions[1]"
        assert (info.value.line, info.value.column) == (8, 7)

    def test_system_section_missing(self, write_spec):
        with pytest.raises(SpecFileError):
            resolve_system(spec_path=write_spec("sequence: thue_morse\n"))

    def test_preset_system(self):
        assert resolve_system(name="fibonacci") is get_system("fibonacci")
