from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tcp_aga.coverage import parse_adjacency_list, parse_adjacency_matrix  # noqa: E402

TABLE1_LIST = "5 5\n0 1 2\n2 3 4\n0 1\n2 3\n4\n"
TABLE1_MATRIX = "5 5\n11100\n00111\n11000\n00110\n00001\n"

_criteria: list[str] = []


@pytest.fixture
def table1():
    return parse_adjacency_list(TABLE1_LIST)


@pytest.fixture
def table1_matrix():
    return parse_adjacency_matrix(TABLE1_MATRIX)


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for the acceptance summary."""

    def record(name: str, ok: bool, detail: str = "") -> None:
        _criteria.append(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))

    return record


def pytest_terminal_summary(terminalreporter):
    if _criteria:
        terminalreporter.section("acceptance criteria")
        for line in _criteria:
            terminalreporter.write_line(line)
