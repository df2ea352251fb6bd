#!/usr/bin/env python3
"""
Report Writer for seqlab
Persists run reports (CSV/JSON) and sequence prefix files
"""

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from src import __version__
from src.automata import state_label
from src.measures import CorrelationReport, WellDistReport
from src.morphic import SequencePrefix
from src.utils import SeqlabError
from src.witness import CorrelationCertificate

logger = logging.getLogger(__name__)

# Report Configuration
SCHEMA_VERSION = 1
PREFIX_HEADER = "#seqlab v1"
CSV_COLUMNS = ["N", "order", "value", "ratio_value_over_N", "M_star", "D_star", "mode"]
REPORT_FORMATS = ("csv", "json")
TEMP_SUFFIX = ".tmp"


class ReportFormatError(SeqlabError):
    """Raised when a report or prefix file cannot be written or read back."""

    pass


def write_text_atomic(path: Union[str, Path], text: str) -> Path:
    """Write to a temporary sibling then rename over the target."""
    path = Path(path).expanduser()
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_file = path.with_name(path.name + TEMP_SUFFIX)
    with open(temp_file, "w", newline="") as f:
        f.write(text)
    temp_file.replace(path)
    return path


def format_prefix(prefix: SequencePrefix) -> str:
    """
    Header line and one line of symbols.

    Raises:
        ReportFormatError: If a letter is not a single printable character
    """
    letters = [str(letter) for letter in prefix.alphabet]
    bad = [letter for letter in letters if len(letter) != 1 or letter.isspace() or not letter.isprintable()]
    if bad:
        raise ReportFormatError(f"Letters {bad} cannot be written one character per symbol")
    return f"{PREFIX_HEADER} alphabet={''.join(letters)}\n{prefix.to_text()}\n"


def write_prefix(prefix: SequencePrefix, path: Union[str, Path]) -> Path:
    """Write a prefix file atomically."""
    written = write_text_atomic(path, format_prefix(prefix))
    logger.info(f"Prefix written: {written} ({len(prefix)} symbols)")
    return written


def read_prefix(path: Union[str, Path]) -> SequencePrefix:
    """Read a prefix file written by write_prefix; digit letters come back as integers."""
    path = Path(path).expanduser()
    try:
        with open(path, "r") as f:
            header = f.readline().rstrip("\n")
            body = f.readline().rstrip("\n")
    except OSError as e:
        raise ReportFormatError(f"Cannot read prefix file {path}: {e}") from e

    prefix_tag = f"{PREFIX_HEADER} alphabet="
    if not header.startswith(prefix_tag):
        raise ReportFormatError(f"{path}:1: expected header '{prefix_tag}<letters>'")
    letters = [int(c) if c.isdigit() else c for c in header[len(prefix_tag):]]
    position = {str(letter): i for i, letter in enumerate(letters)}
    try:
        indices = [position[c] for c in body]
    except KeyError as e:
        raise ReportFormatError(f"{path}:2: symbol {e} is not in the alphabet") from e
    return SequencePrefix(indices, letters, provenance=str(path))


@dataclass
class RunReport:
    """
    Outcome of one CLI run.

    Rows are measure results; certificates are written as rows too
    (window = block length, D = block positions, mode = "certificate").
    Timing is kept apart from the body so that identical inputs give
    byte-identical bodies.

    Attributes:
        command (str): Subcommand that produced the report
        spec_digest (str): SHA-256 of the canonical input spec
        parameters (dict): Exact parameters, enough to re-derive every row
        rows (list): CorrelationReport / WellDistReport results
        certificates (list): CorrelationCertificate results
        notes (list): Extra facts (cross-check outcome, growth table ...)
        timing (dict): Wall-clock seconds per phase
    """

    command: str
    spec_digest: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    rows: List[Union[CorrelationReport, WellDistReport]] = field(default_factory=list)
    certificates: List[CorrelationCertificate] = field(default_factory=list)
    notes: List[Dict[str, Any]] = field(default_factory=list)
    timing: Dict[str, float] = field(default_factory=dict)
    tool_version: str = __version__

    def table(self) -> List[Dict[str, Any]]:
        """Rows in CSV column order."""
        table = []
        for row in self.rows:
            if isinstance(row, CorrelationReport):
                table.append(_row(row.n, row.order, row.value, row.m_star, row.d_star, row.mode))
            else:
                table.append(_row(row.n, 1, row.value, row.m_star, (row.a_star, row.b_star), "well_distribution"))
        for certificate in self.certificates:
            table.append(
                _row(
                    certificate.implied_length,
                    certificate.order,
                    certificate.block_length,
                    certificate.block_length,
                    certificate.shifts,
                    "certificate" if certificate.verified else "certificate_unverified",
                )
            )
        return table

    def body(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": self.tool_version,
            "command": self.command,
            "spec_digest": self.spec_digest,
            "parameters": self.parameters,
            "rows": self.table(),
            "certificates": [certificate_to_dict(c) for c in self.certificates],
            "notes": self.notes,
        }


def _row(n: int, order: int, value: int, m_star: int, d_star, mode: str) -> Dict[str, Any]:
    return {
        "N": int(n),
        "order": int(order),
        "value": int(value),
        "ratio_value_over_N": round(value / n, 12) if n else 0.0,
        "M_star": int(m_star),
        "D_star": ";".join(str(int(d)) for d in d_star),
        "mode": mode,
    }


def certificate_to_dict(certificate: CorrelationCertificate) -> Dict[str, Any]:
    witness = certificate.witness
    return {
        "order": certificate.order,
        "words": ["".join(str(d) for d in word) for word in witness.words],
        "state": state_label(witness.state),
        "search_bound": witness.search_bound,
        "scanned": witness.scanned,
        "exponent": certificate.exponent,
        "block_length": certificate.block_length,
        "shifts": list(certificate.shifts),
        "implied_length": certificate.implied_length,
        "verified": certificate.verified,
    }


def render_csv(report: RunReport) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(report.table())
    return buffer.getvalue()


def render_json(report: RunReport, include_timing: bool = True) -> str:
    data = report.body()
    if include_timing:
        data["timing"] = {phase: round(seconds, 6) for phase, seconds in report.timing.items()}
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def render_report(report: RunReport, fmt: str) -> str:
    if fmt == "csv":
        return render_csv(report)
    if fmt == "json":
        return render_json(report)
    raise ReportFormatError(f"Unknown report format {fmt!r}; expected one of {REPORT_FORMATS}")


def write_report(report: RunReport, path: Union[str, Path], fmt: Optional[str] = None) -> Path:
    """
    Write a report atomically (temp file + rename).

    The format defaults to the file suffix, then csv.
    """
    path = Path(path).expanduser()
    if fmt is None:
        fmt = path.suffix.lstrip(".") if path.suffix.lstrip(".") in REPORT_FORMATS else "csv"
    written = write_text_atomic(path, render_report(report, fmt))
    logger.info(f"Report written: {written} ({len(report.rows)} rows, {len(report.certificates)} certificates)")
    return written
