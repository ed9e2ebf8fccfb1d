import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from vissig.path import PiecewiseLinearPath  # noqa: E402
from vissig.tensor import TensorSeries  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@st.composite
def paths(draw, dims=(1, 3), knots=(1, 8), scale=2.0):
    d = draw(st.integers(*dims))
    n = draw(st.integers(*knots))
    seed = draw(st.integers(0, 2**32 - 1))
    pts = np.random.default_rng(seed).uniform(-scale, scale, size=(n, d))
    return PiecewiseLinearPath.from_points(pts)


def random_series(rng, d, p, constant=None):
    levels = [rng.normal(size=d**k) for k in range(p + 1)]
    if constant is not None:
        levels[0] = np.array([constant])
    return TensorSeries(d, p, levels)


def as_dict(x: TensorSeries):
    from vissig.tensor import words

    return {w: x[w] for w in words(x.alphabet, x.depth, include_empty=True)}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
