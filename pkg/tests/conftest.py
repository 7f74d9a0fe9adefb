import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("stress", parent=settings.get_profile("default"), max_examples=1000)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES = []


def report(criterion, ok, detail):
    """Record one acceptance line; printed in the terminal summary."""
    ACCEPTANCE_LINES.append(f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)


coords = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False)


def curves(dim=2, min_size=1, max_size=5):
    return st.lists(
        st.lists(coords, min_size=dim, max_size=dim), min_size=min_size, max_size=max_size
    ).map(lambda v: np.array(v, dtype=float))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
