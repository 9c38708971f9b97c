import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from gazekit.model import GazeSeries, LabelSeries
from gazekit.synth import SynthConfig, generate

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

coords = st.floats(-2000, 2000, allow_nan=False, allow_infinity=False)


@st.composite
def gaze_series(draw, min_size=2, max_size=60):
    """Random series with strictly increasing, possibly irregular timestamps."""
    n = draw(st.integers(min_size, max_size))
    steps = draw(st.lists(st.floats(0.25, 5.0), min_size=n - 1, max_size=n - 1))
    t0 = draw(st.floats(0, 1e4))
    t = t0 + np.concatenate(([0.0], np.cumsum(steps)))
    xs = draw(st.lists(coords, min_size=n, max_size=n))
    ys = draw(st.lists(coords, min_size=n, max_size=n))
    return GazeSeries(t, np.array(xs), np.array(ys))


@st.composite
def label_series(draw, min_size=1, max_size=200):
    codes = draw(st.lists(st.integers(0, 1), min_size=min_size, max_size=max_size))
    return LabelSeries(np.array(codes, dtype=np.int8))


@st.composite
def label_pairs(draw, min_size=1, max_size=200):
    n = draw(st.integers(min_size, max_size))
    a = draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    b = draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    return LabelSeries(np.array(a, dtype=np.int8)), LabelSeries(np.array(b, dtype=np.int8))


@pytest.fixture(scope="session")
def synthetic():
    """Default 60 s trajectory with construction labels."""
    return generate(SynthConfig(seed=1))


@pytest.fixture(scope="session")
def short_synthetic():
    return generate(SynthConfig(duration_ms=10_000, seed=3))


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion."""

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
