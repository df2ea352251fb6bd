# tests/conftest.py
"""
Common fixtures for all test types
These are shared across unit and integration tests
"""

import sys
import tempfile
from pathlib import Path

import pytest

# Add project root to Python path so 'src' module can be imported
# This allows tests to run without installing the package
project_root = Path(__file__).parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from src.morphic import SequencePrefix  # noqa: E402
from src.presets import get_sequence, get_system  # noqa: E402


@pytest.fixture
def temp_dir():
    """Create temporary directory for tests"""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def bits():
    """Build a binary SequencePrefix from a '0110...' string"""

    def _bits(text: str) -> SequencePrefix:
        return SequencePrefix([int(c) for c in text], (0, 1), provenance="test")

    return _bits


@pytest.fixture(scope="session")
def fibonacci():
    return get_system("fibonacci")


@pytest.fixture(scope="session")
def phi2():
    return get_system("phi2")


@pytest.fixture(scope="session")
def ex41_system():
    return get_system("ex41")


@pytest.fixture(scope="session")
def thue_morse_1024():
    """First 1024 symbols of Thue-Morse"""
    return get_sequence("thue_morse").prefix(1024)
