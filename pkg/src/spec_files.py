#!/usr/bin/env python3
"""
Spec Files for seqlab
Structured YAML descriptions of systems and sequences, and automaton tables

A spec file has up to four sections:

    system:      preset | beta "pre(per)" | recurrence {coefficients, initial}
                 plus an optional language automaton (required for non-Parry
                 systems when automata are needed)
    automaton:   a DFAO, as a mapping or as a transition table
    morphism:    images, seed and optional coding
    sequence:    preset name | periodic pattern | champernowne | constant bit,
                 or "automatic" (system + automaton) or "morphic" (morphism)

Letters are written as strings so that multi-digit alphabets stay readable;
numeration digits are converted to integers.
"""

import hashlib
import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Hashable, List, Optional, Tuple, Union

import yaml

from src.automata import (
    AutomatonError,
    Dfa,
    Dfao,
    ProductAutomaton,
    build_a_beta,
    build_l_beta_dfa,
    product,
    state_label,
)
from src.beta_systems import BetaSpec, LinearRecurrence, build_recurrence
from src.morphic import (
    DEFAULT_MAX_LETTERS,
    MorphicSpec,
    Morphism,
    SequencePrefix,
    automatic_prefix,
    fixed_point_prefix,
    product_morphic_spec,
)
from src.numeration import DEFAULT_PROBE_DEPTH, PositionalSystem
from src.presets import NumerationPreset, SequencePreset, get_sequence, get_system
from src.utils import SeqlabError

logger = logging.getLogger(__name__)

SPEC_SECTIONS = ("system", "automaton", "morphism", "sequence")
TABLE_HEADER = "# seqlab automaton"


class SpecFileError(SeqlabError):
    """
    Raised when a spec file cannot be parsed into exactly one generator.

    Attributes:
        location (str): Field path, or line:column for YAML syntax errors
        line (int): 1-based line in the spec file, when known
        column (int): 1-based column in the spec file, when known
    """

    def __init__(self, location: str, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.location = location
        self.detail = message
        self.line = line
        self.column = column
        where = f"{location} (line {line}, column {column})" if line is not None else location
        super().__init__(f"{where}: {message}")


Marks = Dict[str, Tuple[yaml.Node, int, int]]


def _node_marks(node: yaml.Node, path: str = "", marks: Optional[Marks] = None) -> Marks:
    """Field path -> (node, line, column) for every node of a composed YAML document."""
    marks = {} if marks is None else marks
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            child = f"{path}.{key_node.value}" if path else str(key_node.value)
            marks[child] = (value_node, value_node.start_mark.line + 1, value_node.start_mark.column + 1)
            _node_marks(value_node, child, marks)
    elif isinstance(node, yaml.SequenceNode):
        for i, item in enumerate(node.value):
            child = f"{path}[{i}]"
            marks[child] = (item, item.start_mark.line + 1, item.start_mark.column + 1)
            _node_marks(item, child, marks)
    return marks


def _locate(error: SpecFileError, marks: Marks) -> SpecFileError:
    """The same error with the spec file line of its field path (or of the nearest parent)."""
    if error.line is not None:
        return error
    path, table_line = error.location, None
    match = re.fullmatch(r"(.+):(\d+)", path)
    if match:
        path, table_line = match.group(1), int(match.group(2))
    while path:
        if path in marks:
            node, line, column = marks[path]
            if table_line is not None and isinstance(node, yaml.ScalarNode) and node.style in ("|", ">"):
                line, column = line + table_line, 1
            return SpecFileError(error.location, error.detail, line, column)
        parent = re.sub(r"(\.[^.\[]*|\[\d+\])$", "", path)
        path = "" if parent == path else parent
    return error


def spec_digest(data: Any) -> str:
    """SHA-256 of the canonical JSON form of a spec."""
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _letter(text: Any, numeric: bool) -> Hashable:
    text = str(text)
    if numeric:
        try:
            return int(text)
        except ValueError:
            return text
    return text


def format_automaton(machine: Union[Dfa, Dfao, ProductAutomaton]) -> str:
    """
    Transition table text:

        # seqlab automaton
        initial <state>
        finals <state> ...          (DFA and product)
        output <state> <letter>     (DFAO and product, one line per state)
        <state> <letter> <state>    (one line per transition)
    """
    lines = [TABLE_HEADER, f"initial {state_label(machine.initial)}"]
    if isinstance(machine, (Dfa, ProductAutomaton)):
        finals = [state_label(q) for q in machine.states if q in machine.finals]
        lines.append("finals " + " ".join(finals))
    if isinstance(machine, (Dfao, ProductAutomaton)):
        for q in machine.states:
            lines.append(f"output {state_label(q)} {machine.output[q]}")
    for (q, letter), target in machine.transitions.items():
        lines.append(f"{state_label(q)} {letter} {state_label(target)}")
    return "\n".join(lines) + "\n"


def parse_automaton_table(text: str, numeric_letters: bool = True, where: str = "automaton") -> Union[Dfa, Dfao]:
    """
    Parse format_automaton output back into a Dfa (finals line) or Dfao (output lines).

    States are kept as strings; letters become integers when numeric.
    """
    initial: Optional[str] = None
    finals: Optional[List[str]] = None
    outputs: Dict[str, Any] = {}
    transitions: Dict[Tuple[str, Hashable], str] = {}
    states: List[str] = []
    letters: List[Hashable] = []

    def remember(state: str) -> None:
        if state not in states:
            states.append(state)

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "initial" and len(parts) == 2:
            initial = parts[1]
            remember(initial)
        elif parts[0] == "finals":
            finals = parts[1:]
            for state in finals:
                remember(state)
        elif parts[0] == "output" and len(parts) == 3:
            remember(parts[1])
            outputs[parts[1]] = _letter(parts[2], True)
        elif len(parts) == 3:
            source, letter, target = parts[0], _letter(parts[1], numeric_letters), parts[2]
            remember(source)
            remember(target)
            if letter not in letters:
                letters.append(letter)
            transitions[(source, letter)] = target
        else:
            raise SpecFileError(f"{where}:{number}", f"Cannot parse line {raw!r}")

    if initial is None:
        raise SpecFileError(where, "Missing 'initial' line")
    if finals is not None and outputs:
        raise SpecFileError(where, "A table has either a 'finals' line or 'output' lines, not both")

    alphabet = tuple(sorted(letters, key=lambda a: (isinstance(a, str), a)))
    try:
        if outputs:
            return Dfao(tuple(states), alphabet, initial, transitions, outputs)
        return Dfa(tuple(states), alphabet, initial, transitions, frozenset(finals or ()))
    except AutomatonError as e:
        raise SpecFileError(where, str(e)) from e


def _automaton_from_mapping(data: Any, where: str, numeric: bool, with_output: bool) -> Union[Dfa, Dfao]:
    if isinstance(data, str):
        return parse_automaton_table(data, numeric, where)
    if not isinstance(data, dict):
        raise SpecFileError(where, "Expected a mapping or a transition table")
    if "table" in data:
        return parse_automaton_table(str(data["table"]), numeric, f"{where}.table")

    for key in ("states", "alphabet", "initial", "transitions"):
        if key not in data:
            raise SpecFileError(f"{where}.{key}", "Missing field")

    states = tuple(str(q) for q in data["states"])
    alphabet = tuple(_letter(a, numeric) for a in data["alphabet"])
    transitions: Dict[Tuple[str, Hashable], str] = {}
    for i, entry in enumerate(data["transitions"]):
        if not isinstance(entry, (list, tuple)) or len(entry) != 3:
            raise SpecFileError(f"{where}.transitions[{i}]", "Expected [state, letter, state]")
        transitions[(str(entry[0]), _letter(entry[1], numeric))] = str(entry[2])

    try:
        if with_output:
            if "outputs" not in data:
                raise SpecFileError(f"{where}.outputs", "Missing field")
            outputs = {str(q): _letter(v, True) for q, v in data["outputs"].items()}
            return Dfao(states, alphabet, str(data["initial"]), transitions, outputs)
        finals = frozenset(str(q) for q in data.get("finals", states))
        return Dfa(states, alphabet, str(data["initial"]), transitions, finals)
    except AutomatonError as e:
        raise SpecFileError(where, str(e)) from e


@dataclass(eq=False)
class SequenceSource:
    """
    The single generator a spec file (or preset name) resolves to.

    Attributes:
        name (str): Display name
        digest (str): SHA-256 of the canonical spec
        numeration (NumerationPreset | None): For automatic sequences and systems
        dfao (Dfao | None): For automatic sequences
        morphic (MorphicSpec | None): For morphic sequences
        preset (SequencePreset | None): For preset sequences
    """

    name: str
    digest: str
    numeration: Optional[NumerationPreset] = None
    dfao: Optional[Dfao] = None
    morphic: Optional[MorphicSpec] = None
    preset: Optional[SequencePreset] = field(default=None, repr=False)

    @property
    def is_automatic(self) -> bool:
        return self.dfao is not None and self.numeration is not None

    def product(self) -> ProductAutomaton:
        if not self.is_automatic:
            raise SpecFileError("sequence", f"{self.name} is not an automatic sequence")
        return product(self.numeration.language_dfa, self.dfao)

    def prefix(self, length: int, max_letters: int = DEFAULT_MAX_LETTERS) -> SequencePrefix:
        if self.preset is not None:
            return self.preset.prefix(length, max_letters)
        if self.is_automatic:
            prefix = fixed_point_prefix(product_morphic_spec(self.product(), name=self.name), length, max_letters)
        else:
            prefix = fixed_point_prefix(self.morphic, length, max_letters)
        return SequencePrefix(prefix.indices, prefix.alphabet, provenance=f"{self.name} N={length}")

    def automatic_prefix(self, length: int) -> SequencePrefix:
        if not self.is_automatic:
            raise SpecFileError("sequence", f"{self.name} is not an automatic sequence")
        return automatic_prefix(self.dfao, self.numeration.system, length)


def _system_from_section(data: Any, probe_depth: int) -> NumerationPreset:
    if isinstance(data, str):
        data = {"preset": data}
    if not isinstance(data, dict):
        raise SpecFileError("system", "Expected a mapping")

    choices = [key for key in ("preset", "beta", "recurrence") if key in data]
    if len(choices) != 1:
        raise SpecFileError("system", "Give exactly one of preset, beta, recurrence")

    try:
        if "preset" in data:
            return get_system(str(data["preset"]), probe_depth)

        if "beta" in data:
            beta = BetaSpec.parse(str(data["beta"]))
            name = str(data.get("name", f"beta {beta}"))
            system = PositionalSystem(build_recurrence(beta), probe_depth=probe_depth, name=name)
            padded = build_a_beta(beta)
            return NumerationPreset(name, system, build_l_beta_dfa(padded), beta, padded)

        recurrence = data["recurrence"]
        if not isinstance(recurrence, dict):
            raise SpecFileError("system.recurrence", "Expected coefficients and initial")
        rec = LinearRecurrence(
            tuple(int(c) for c in recurrence.get("coefficients", ())),
            tuple(int(u) for u in recurrence.get("initial", ())),
        )
        name = str(data.get("name", "recurrence"))
        system = PositionalSystem(rec, probe_depth=probe_depth, name=name)
    except SpecFileError:
        raise
    except (SeqlabError, ValueError, TypeError) as e:
        raise SpecFileError("system", str(e)) from e

    if "language" not in data:
        raise SpecFileError("system.language", "A recurrence system needs its language automaton")
    dfa = _automaton_from_mapping(data["language"], "system.language", True, with_output=False)
    return NumerationPreset(name, system, dfa)


def _morphism_from_section(data: Any) -> MorphicSpec:
    if not isinstance(data, dict):
        raise SpecFileError("morphism", "Expected a mapping")
    if "images" not in data or "seed" not in data:
        raise SpecFileError("morphism", "Needs images and seed")
    if not isinstance(data["images"], dict):
        raise SpecFileError("morphism.images", "Expected a mapping letter -> word")
    domain = {str(a) for a in data["images"]}
    for letter, image in data["images"].items():
        word = image if isinstance(image, (list, tuple)) else str(image or "")
        unknown = [x for x in word if str(x) not in domain]
        if unknown:
            raise SpecFileError(f"morphism.images.{letter}", f"Letter {unknown[0]!r} has no image")
    if str(data["seed"]) not in domain:
        raise SpecFileError("morphism.seed", f"Seed {data['seed']!r} has no image")

    def split(word: Any) -> Tuple[Hashable, ...]:
        if isinstance(word, (list, tuple)):
            return tuple(_letter(letter, True) for letter in word)
        return tuple(_letter(letter, True) for letter in str(word)) if word not in (None, "") else ()

    try:
        morphism = Morphism({_letter(a, True): split(w) for a, w in data["images"].items()})
        coding = None
        if "coding" in data:
            coding = Morphism({_letter(a, True): split(w) for a, w in data["coding"].items()})
        seed = _letter(data["seed"], True)
        spec = MorphicSpec(morphism, seed, coding, name=str(data.get("name", "morphic")))
        spec.check_prolongable()
        return spec
    except SeqlabError as e:
        raise SpecFileError("morphism", str(e)) from e


def resolve_sequence(
    name: Optional[str] = None,
    spec_path: Optional[Union[str, Path]] = None,
    probe_depth: int = DEFAULT_PROBE_DEPTH,
) -> SequenceSource:
    """Resolve a preset name or a spec file to a SequenceSource."""
    if (name is None) == (spec_path is None):
        raise SpecFileError("input", "Give exactly one of a preset name and a spec file")
    if name is not None:
        try:
            preset = get_sequence(name, probe_depth)
        except SeqlabError as e:
            raise SpecFileError("preset", str(e)) from e
        return SequenceSource(
            name=name,
            digest=spec_digest({"preset": name}),
            numeration=preset.numeration,
            dfao=preset.dfao,
            preset=preset,
        )
    return load_spec_file(spec_path, probe_depth)


def resolve_system(
    name: Optional[str] = None,
    spec_path: Optional[Union[str, Path]] = None,
    probe_depth: int = DEFAULT_PROBE_DEPTH,
) -> NumerationPreset:
    """Resolve a system preset name or the system section of a spec file."""
    if (name is None) == (spec_path is None):
        raise SpecFileError("input", "Give exactly one of a preset name and a spec file")
    if name is not None:
        return _system_from_section({"preset": name}, probe_depth)
    data, marks = _read_spec(spec_path)
    if "system" not in data:
        raise SpecFileError("system", "Missing section")
    try:
        return _system_from_section(data["system"], probe_depth)
    except SpecFileError as e:
        located = _locate(e, marks)
        if located is e:
            raise
        raise located from e


def _read_spec(path: Union[str, Path]) -> Tuple[Dict[str, Any], Marks]:
    path = Path(path).expanduser()
    if not path.exists():
        raise SpecFileError(str(path), "Spec file not found")
    try:
        text = path.read_text()
        data = yaml.safe_load(text)
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        location = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark else str(path)
        raise SpecFileError(location, f"Invalid YAML: {getattr(e, 'problem', e)}") from e

    if not isinstance(data, dict):
        raise SpecFileError(str(path), "A spec file must be a mapping of sections")
    unknown = sorted(set(data) - set(SPEC_SECTIONS))
    if unknown:
        raise SpecFileError(str(path), f"Unknown section(s): {', '.join(unknown)}")
    return data, (_node_marks(root) if root is not None else {})


def read_spec_data(path: Union[str, Path]) -> Dict[str, Any]:
    return _read_spec(path)[0]


def load_spec_file(path: Union[str, Path], probe_depth: int = DEFAULT_PROBE_DEPTH) -> SequenceSource:
    """
    Parse a spec file into exactly one sequence generator.

    Raises:
        SpecFileError: With the field path (or YAML line) of the problem
    """
    data, marks = _read_spec(path)
    try:
        return _source_from_data(data, probe_depth)
    except SpecFileError as e:
        located = _locate(e, marks)
        if located is e:
            raise
        raise located from e


def _source_from_data(data: Dict[str, Any], probe_depth: int) -> SequenceSource:
    digest = spec_digest(data)
    sequence = data.get("sequence")
    if isinstance(sequence, str):
        sequence = {"preset": sequence}
    if sequence is None:
        if "morphism" in data:
            sequence = {"kind": "morphic"}
        elif "automaton" in data:
            sequence = {"kind": "automatic"}
        else:
            raise SpecFileError("sequence", "Missing section")
    if not isinstance(sequence, dict):
        raise SpecFileError("sequence", "Expected a mapping or a preset name")

    generators = [key for key in ("preset", "periodic", "champernowne", "constant", "kind") if key in sequence]
    if len(generators) != 1:
        raise SpecFileError("sequence", "Give exactly one generator")
    key = generators[0]
    name = str(sequence.get("name", key))

    if key in ("preset", "periodic", "champernowne", "constant"):
        preset_name = {
            "preset": lambda: str(sequence["preset"]),
            "periodic": lambda: f"periodic:{sequence['periodic']}",
            "champernowne": lambda: "champernowne",
            "constant": lambda: f"constant:{sequence['constant']}",
        }[key]()
        source = resolve_sequence(name=preset_name, probe_depth=probe_depth)
        source.digest = digest
        return source

    kind = sequence["kind"]
    if kind == "automatic":
        if "system" not in data or "automaton" not in data:
            raise SpecFileError("sequence.kind", "An automatic sequence needs system and automaton sections")
        numeration = _system_from_section(data["system"], probe_depth)
        dfao = _automaton_from_mapping(data["automaton"], "automaton", True, with_output=True)
        if not isinstance(dfao, Dfao):
            raise SpecFileError("automaton", "Expected a DFAO with outputs")
        if tuple(dfao.alphabet) != tuple(numeration.language_dfa.alphabet):
            raise SpecFileError(
                "automaton.alphabet",
                f"Alphabet {dfao.alphabet} differs from the digits {numeration.language_dfa.alphabet}",
            )
        return SequenceSource(name=name, digest=digest, numeration=numeration, dfao=dfao)

    if kind == "morphic":
        if "morphism" not in data:
            raise SpecFileError("sequence.kind", "A morphic sequence needs a morphism section")
        return SequenceSource(name=name, digest=digest, morphic=_morphism_from_section(data["morphism"]))

    raise SpecFileError("sequence.kind", f"Unknown kind {kind!r}; expected automatic or morphic")
