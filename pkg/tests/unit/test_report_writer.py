#!/usr/bin/env python3
"""Tests for run reports and prefix files"""

import csv
import io
import json
from pathlib import Path

import pytest

from src import __version__
from src.measures import CorrelationReport, WellDistReport
from src.morphic import SequencePrefix
from src.presets import get_sequence
from src.report_writer import (
    CSV_COLUMNS,
    PREFIX_HEADER,
    ReportFormatError,
    RunReport,
    format_prefix,
    read_prefix,
    render_csv,
    render_json,
    render_report,
    write_prefix,
    write_report,
    write_text_atomic,
)
from src.witness import build_certificate, find_collisions, verify_certificate

pytestmark = pytest.mark.unit


@pytest.fixture
def report():
    thue_morse = get_sequence("thue_morse")
    system = thue_morse.numeration.system
    certificate = build_certificate(find_collisions(thue_morse.product(), system, 1), system, 3)
    certificate = verify_certificate(thue_morse.prefix(24), certificate, system)
    return RunReport(
        command="measure",
        spec_digest="abc123",
        parameters={"orders": [2], "n_range": [10]},
        rows=[
            CorrelationReport(n=10, order=2, value=9, m_star=9, d_star=(0, 1)),
            WellDistReport(n=10, value=5, a_star=0, b_star=2, m_star=5),
        ],
        certificates=[certificate],
        timing={"measure": 0.1234567},
    )


class TestRunReport:
    """Test report rows and rendering"""

    def test_table_rows(self, report):
        table = report.table()
        assert table[0] == {
            "N": 10,
            "order": 2,
            "value": 9,
            "ratio_value_over_N": 0.9,
            "M_star": 9,
            "D_star": "0;1",
            "mode": "exact",
        }
        assert table[1]["mode"] == "well_distribution"
        assert table[1]["D_star"] == "0;2"
        assert table[2]["N"] == 24
        assert table[2]["D_star"] == "8;16"
        assert table[2]["mode"] == "certificate"

    def test_csv(self, report):
        rows = list(csv.DictReader(io.StringIO(render_csv(report))))
        assert list(rows[0]) == CSV_COLUMNS
        assert len(rows) == 3
        assert rows[0]["value"] == "9"

    def test_json(self, report):
        data = json.loads(render_json(report))
        assert data["schema_version"] == 1
        assert data["tool_version"] == __version__
        assert data["spec_digest"] == "abc123"
        assert data["certificates"][0]["words"] == ["1", "10"]
        assert data["certificates"][0]["verified"] is True
        assert data["timing"] == {"measure": 0.123457}

    def test_body_is_stable_without_timing(self, report):
        first = render_json(report, include_timing=False)
        report.timing["measure"] = 99.0
        assert render_json(report, include_timing=False) == first

    def test_unknown_format(self, report):
        with pytest.raises(ReportFormatError):
            render_report(report, "xml")


class TestWriting:
    """Test atomic writes"""

    def test_write_report_format_from_suffix(self, report, temp_dir):
        path = write_report(report, temp_dir / "out" / "run.json")
        assert json.loads(path.read_text())["command"] == "measure"
        assert not (temp_dir / "out" / "run.json.tmp").exists()

    def test_write_report_defaults_to_csv(self, report, temp_dir):
        path = write_report(report, temp_dir / "run.out")
        assert path.read_text().startswith(",".join(CSV_COLUMNS))

    def test_failed_rename_keeps_target(self, temp_dir, mocker):
        target = temp_dir / "report.csv"
        target.write_text("old")
        mocker.patch.object(Path, "replace", side_effect=OSError("disk full"))
        with pytest.raises(OSError):
            write_text_atomic(target, "new")
        assert target.read_text() == "old"


class TestPrefixFiles:
    """Test prefix file format"""

    def test_format(self, bits):
        assert format_prefix(bits("0110")) == f"{PREFIX_HEADER} alphabet=01\n0110\n"

    def test_write_and_read(self, temp_dir):
        prefix = get_sequence("thue_morse").prefix(64)
        path = write_prefix(prefix, temp_dir / "tm.txt")
        assert read_prefix(path) == prefix

    def test_letter_alphabet(self, temp_dir):
        prefix = SequencePrefix.from_letters("abba")
        assert read_prefix(write_prefix(prefix, temp_dir / "ab.txt")).letters() == ("a", "b", "b", "a")

    def test_multi_character_letters_rejected(self):
        prefix = SequencePrefix.from_letters([10, 11])
        with pytest.raises(ReportFormatError):
            format_prefix(prefix)

    def test_bad_header(self, temp_dir):
        path = temp_dir / "bad.txt"
        path.write_text("0110\n")
        with pytest.raises(ReportFormatError):
            read_prefix(path)

    def test_symbol_outside_alphabet(self, temp_dir):
        path = temp_dir / "bad.txt"
        path.write_text(f"{PREFIX_HEADER} alphabet=01\n0120\n")
        with pytest.raises(ReportFormatError):
            read_prefix(path)

    def test_missing_file(self, temp_dir):
        with pytest.raises(ReportFormatError):
            read_prefix(temp_dir / "missing.txt")
