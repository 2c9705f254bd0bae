import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from birthgrowth.convex import ConvexBody, box, hausdorff, point, regular_polygon
from birthgrowth.region import (
    BudgetExceeded,
    Region,
    dilate,
    directed_hausdorff,
    region_hausdorff,
    region_subset,
    union,
)

SQ = box(0, 0, 1, 1)
BIG = box(0, 0, 2, 2)


def R(*comps) -> Region:
    return Region(tuple(comps))


def dense_points(region: Region, s: float) -> np.ndarray:
    """Grid points inside each component plus boundary samples at spacing about s."""
    out = []
    for c in region.components:
        V = np.asarray(c.vertices, dtype=float)
        if len(V) >= 3:
            lo, hi = V.min(0), V.max(0)
            xs = np.arange(lo[0], hi[0] + s, s)
            ys = np.arange(lo[1], hi[1] + s, s)
            G = np.stack(np.meshgrid(xs, ys), -1).reshape(-1, 2)
            G = G[oracles.dists_to_poly(G, V) == 0.0]
            out.append(G)
        per = max(2, int(math.ceil(max(np.ptp(V[:, 0]), np.ptp(V[:, 1]), s) / s)) * 2)
        out.append(oracles.boundary_samples(V, per))
    return np.concatenate(out)


def sampled_directed(a: Region, b: Region, s: float) -> float:
    P = dense_points(a, s)
    return float(np.min([oracles.dists_to_poly(P, c.vertices) for c in b.components], axis=0).max())


@st.composite
def regions(draw, max_comps=4):
    comps = []
    for _ in range(draw(st.integers(1, max_comps))):
        x, y = draw(st.floats(0, 3)), draw(st.floats(0, 3))
        kind = draw(st.integers(0, 2))
        if kind == 0:
            w, h = draw(st.floats(0.05, 1.5)), draw(st.floats(0.05, 1.5))
            comps.append(box(x, y, x + w, y + h))
        elif kind == 1:
            comps.append(regular_polygon(draw(st.integers(3, 9)), draw(st.floats(0.05, 1))).translate(x, y))
        else:
            comps.append(point(x, y))
    return Region(tuple(comps))


# --- canonical form and set operations --------------------------------------

def test_union_examples():
    r = R(SQ, box(3, 0, 4, 1))
    assert union(r, r) == r
    assert union(R(SQ), R(BIG)) == R(BIG)
    assert len(union(R(SQ), R(box(2, 0, 3, 1)))) == 2


def test_canonical_order_is_input_independent():
    a, b, c = SQ, box(2, 0, 3, 1), point(9, 9)
    assert R(a, b, c) == R(c, b, a) == R(b, c, a, a)


def test_dilate_examples():
    r = R(SQ, box(3, 0, 4, 1))
    assert dilate(r, point()) == r
    d = dilate(R(point(0, 0), point(5, 0)), SQ)
    assert d == R(SQ, box(5, 0, 6, 1))


def test_dilate_overlap_coverage_by_sampling():
    ball = regular_polygon(32, 1.5)
    r = dilate(R(SQ, box(3, 0, 4, 1)), ball)
    assert len(r) == 2
    rng = np.random.default_rng(1)
    P = rng.uniform(-2, 6, size=(4000, 2))
    # p is in (A u B) + D  <=>  dist(p - d) ... check via explicit Minkowski hulls of vertices
    hulls = [ConvexBody.from_points([(a[0] + d[0], a[1] + d[1]) for a in c.vertices for d in ball.vertices])
             for c in (SQ, box(3, 0, 4, 1))]
    want = np.min([oracles.dists_to_poly(P, h.vertices) for h in hulls], axis=0) <= 1e-9
    got = np.array([r.contains_point(p) for p in P])
    assert (want == got).all()


def test_json_round_trip():
    r = R(SQ, box(3, 0, 4, 1), point(7, 7))
    assert Region.from_json(r.to_json()) == r
    assert Region.from_json(Region.empty().to_json()).is_empty


# --- directed and two-sided distance ----------------------------------------

def test_directed_examples():
    r = R(SQ, box(3, 0, 4, 1))
    assert directed_hausdorff(r, r, 1e-3) == 0
    assert directed_hausdorff(R(SQ), R(BIG), 1e-3) == 0
    assert abs(directed_hausdorff(R(BIG), R(SQ), 1e-3) - math.sqrt(2)) <= 1e-3


def test_directed_empty_conventions():
    assert directed_hausdorff(Region.empty(), R(SQ), 1e-3) == 0
    assert directed_hausdorff(R(SQ), Region.empty(), 1e-3) == math.inf
    with pytest.raises(ValueError):
        directed_hausdorff(R(SQ), R(SQ), 0)


def test_single_component_matches_convex_distance():
    a = regular_polygon(7, 1.0).translate(0.3, 0.2)
    b = box(-0.5, -0.5, 0.8, 0.6)
    assert abs(region_hausdorff(R(a), R(b), 1e-4) - hausdorff(a, b)) <= 1e-4


def test_two_squares_against_one():
    d = 2.5
    a = R(SQ, box(1 + d, 0, 2 + d, 1))
    expect = max(oracles.dist_to_poly(v, SQ.vertices) for v in box(1 + d, 0, 2 + d, 1).vertices)
    assert abs(region_hausdorff(a, R(SQ), 1e-4) - expect) <= 1e-4


def test_interior_maximum_is_found():
    # the farthest point of a from b is interior to a, away from every vertex and edge sample
    a = R(box(0, 0, 4, 1))
    b = R(box(-1, -1, 1.1, 2), box(2.7, -1, 5, 2), box(-1, 0.93, 5, 3))
    v = directed_hausdorff(a, b, 1e-6)
    # at (1.9, 0) both side boxes are 0.8 away and the top one 0.93
    P = dense_points(a, 0.01)
    L = float(np.min([oracles.dists_to_poly(P, c.vertices) for c in b.components], axis=0).max())
    assert L - 1e-9 <= v + 1e-6
    assert v <= L + 0.02
    assert v == pytest.approx(0.8, abs=1e-5)


@settings(max_examples=60)
@given(regions(), regions())
def test_directed_brackets_dense_sampling(a, b):
    delta, s = 1e-3, 0.02
    v = directed_hausdorff(a, b, delta)
    L = sampled_directed(a, b, s)
    assert L <= v + delta + 1e-9
    assert v <= L + 2 * s


@settings(max_examples=60)
@given(regions(), regions(), regions())
def test_region_hausdorff_triangle_inequality(a, b, c):
    d = 1e-4
    assert region_hausdorff(a, b, d) <= region_hausdorff(a, c, d) + region_hausdorff(c, b, d) + 3 * d


def test_budget_exhaustion_raises():
    a = R(box(0, 0, 4, 1))
    b = R(box(-1, -1, 1.1, 2), box(2.7, -1, 5, 2), box(-1, 0.93, 5, 3))
    with pytest.raises(BudgetExceeded):
        directed_hausdorff(a, b, 1e-9, max_cells=5)


# --- subset -----------------------------------------------------------------

def test_subset_examples():
    r = R(SQ, box(3, 0, 4, 1))
    assert region_subset(r, r, 0)
    assert region_subset(R(SQ), R(BIG), 0)
    assert region_subset(R(SQ), R(BIG), 1e-6)
    assert not region_subset(R(BIG), R(SQ), 1e-6)
    assert region_subset(Region.empty(), R(SQ), 0)
    with pytest.raises(ValueError):
        region_subset(r, r, -1)


def test_subset_straddling_two_components():
    b = R(box(-0.2, -0.2, 0.6, 1.2), box(0.4, -0.2, 1.2, 1.2))
    a = R(SQ)
    assert not any(c.vertices == SQ.vertices for c in b.components)
    assert region_subset(a, b, 1e-6)
    # grid membership oracle agrees
    P = dense_points(a, 0.01)
    assert (np.min([oracles.dists_to_poly(P, c.vertices) for c in b.components], axis=0) <= 1e-12).all()
    assert not region_subset(R(box(0, 0, 1.3, 1)), b, 1e-6)


# --- invariants -------------------------------------------------------------

@settings(max_examples=40)
@given(regions(), regions(), st.integers(3, 8), st.floats(0.05, 0.8))
def test_dilate_distributes_over_union(a, b, n, r):
    g = regular_polygon(n, r)
    lhs = dilate(union(a, b), g)
    rhs = union(dilate(a, g), dilate(b, g))
    assert region_hausdorff(lhs, rhs, 1e-10) <= 1e-9


@settings(max_examples=60)
@given(st.lists(regions(1), min_size=1, max_size=6))
def test_pruning_keeps_coverage(parts):
    raw = [c for p in parts for c in p.components]
    pruned = Region(tuple(raw))
    rng = np.random.default_rng(len(raw))
    P = rng.uniform(-0.5, 4.5, size=(500, 2))
    before = np.min([oracles.dists_to_poly(P, c.vertices) for c in raw], axis=0) <= 1e-9
    after = np.min([oracles.dists_to_poly(P, c.vertices) for c in pruned.components], axis=0) <= 1e-9
    assert (before == after).all()


@settings(max_examples=40)
@given(regions(), regions(), regions())
def test_subset_is_reflexive_and_transitive(a, b, c):
    tol = 1e-6
    assert region_subset(a, a, 0)
    ab, bc = union(a, b), union(union(a, b), c)
    assert region_subset(a, ab, tol) and region_subset(ab, bc, tol)
    assert region_subset(a, bc, 2 * tol)
