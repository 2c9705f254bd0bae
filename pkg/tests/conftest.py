import math
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from birthgrowth.convex import ConvexBody  # noqa: E402

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

coord = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
point_lists = st.lists(st.tuples(coord, coord), min_size=1, max_size=12)


@st.composite
def bodies(draw, min_points: int = 1):
    pts = draw(st.lists(st.tuples(coord, coord), min_size=min_points, max_size=12))
    return ConvexBody.from_points(pts)


@st.composite
def round_polygons(draw):
    """Random convex polygon from perturbed angles on a circle (always full-dimensional)."""
    n = draw(st.integers(3, 12))
    cx, cy = draw(coord), draw(coord)
    r = draw(st.floats(0.1, 5))
    angs = sorted(draw(st.lists(st.floats(0, 2 * math.pi, exclude_max=True),
                                min_size=n, max_size=n, unique=True)))
    pts = [(cx + r * math.cos(a), cy + r * math.sin(a)) for a in angs]
    pts += [(cx + r * math.cos(k * 2 * math.pi / 3), cy + r * math.sin(k * 2 * math.pi / 3))
            for k in range(3)]
    return ConvexBody.from_points(pts)


def random_polygon(rng: np.random.Generator, scale: float = 5.0, n_max: int = 12) -> ConvexBody:
    n = int(rng.integers(1, n_max + 1))
    c = rng.uniform(-scale, scale, 2)
    pts = c + rng.normal(size=(n, 2)) * rng.uniform(0.01, scale)
    return ConvexBody.from_points(pts.tolist())


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
