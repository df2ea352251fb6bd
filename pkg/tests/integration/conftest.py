# tests/integration/conftest.py
"""
Fixtures for integration tests
These tests drive the command line end to end on small inputs
"""

import pytest
import yaml

from src.main import main


@pytest.fixture
def config_file(temp_dir):
    """Config file writing outputs under the temporary directory"""

    def _config(**sections):
        content = {"output": {"directory": str(temp_dir / "results")}}
        for section, values in sections.items():
            content.setdefault(section, {}).update(values)
        path = temp_dir / "seqlab.yaml"
        path.write_text(yaml.safe_dump(content))
        return str(path)

    return _config


@pytest.fixture
def run_cli(capsys):
    """Run main(argv) and return (exit code, stdout)"""

    def _run(*argv):
        code = main([str(arg) for arg in argv])
        return code, capsys.readouterr().out

    return _run
