import random

import pytest

from clhash import gf64


@pytest.fixture(scope="session", autouse=True)
def memo_table_matches_long_division():
    try:
        gf64.check_memo_table()
    except gf64.MemoTableError as exc:
        pytest.exit(f"compiled-in reduction table is wrong: {exc}", returncode=3)


@pytest.fixture
def rng():
    return random.Random(0xC1A5)


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion's verdict and fail the test if it did not hold."""
    lines = request.config.acceptance_lines

    def record(number, title, ok, detail=""):
        lines.append((number, f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}  ({detail})"))
        assert ok, f"criterion {number} failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
