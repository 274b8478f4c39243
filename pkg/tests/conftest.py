import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from examstress.synthetic import generate_sessions, generate_synthetic_dataset  # noqa: E402


@pytest.fixture(scope="session")
def cohort():
    """Seed-7, ten-student cohort whose labels follow the signals."""
    return generate_sessions(7, 10, 1.0)


@pytest.fixture(scope="session")
def null_cohort():
    return generate_sessions(7, 10, 0.0)


@pytest.fixture
def dataset_dir(tmp_path):
    generate_synthetic_dataset(7, 10, 1.0).write(tmp_path / "data")
    return tmp_path / "data"


# one line per acceptance criterion, printed after the test run
ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
