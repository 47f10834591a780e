import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gwavelets.groups import BandSpec, cantor_model, torus_model  # noqa: E402

_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(label, ok, detail=""):
        line = f"criterion {label}: {'PASS' if ok else 'FAIL'}" + (f"  ({detail})" if detail else "")
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def doubling():
    return torus_model([[2]])


@pytest.fixture(scope="session")
def quincunx():
    return torus_model([[1, -1], [1, 1]])


@pytest.fixture(scope="session")
def cantor_shift():
    return cantor_model(2, BandSpec.shift())


@pytest.fixture(scope="session")
def cantor_band():
    return cantor_model(2, BandSpec.constant(2, [1]))
