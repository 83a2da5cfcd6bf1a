import os
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("default")

from pcl.finite_topology import ResidueSet, from_subbase  # noqa: E402


@st.composite
def topologies(draw, max_n: int = 8, max_sets: int = 5):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(0, max_sets))
    sets = [ResidueSet(n, draw(st.integers(0, (1 << n) - 1))) for _ in range(k)]
    return from_subbase(n, sets)


ACCEPTANCE: dict[int, tuple[str, bool]] = {}


@pytest.fixture
def record():
    def _record(number: int, label: str, ok: bool) -> None:
        ACCEPTANCE[number] = (label, ok)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        label, ok = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {label}")
