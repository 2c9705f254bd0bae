"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or
``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import functools
import json
import math
import sys
import tempfile
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from birthgrowth import engine  # noqa: E402
from birthgrowth.cli import main as cli_main  # noqa: E402
from birthgrowth.convex import (  # noqa: E402
    ConvexBody,
    contains_convex,
    dual_grid,
    hausdorff,
    hausdorff_dual,
    minkowski_sum,
    point,
    scale,
    support_many,
    uniform_directions,
)
from birthgrowth.engine import BirthSchedule, base_partition, chain, lower_sum, run_discrete, sums, theta  # noqa: E402
from birthgrowth.growth import PiecewiseConstantGrowth, aumann_integral  # noqa: E402
from birthgrowth.region import region_hausdorff, region_subset  # noqa: E402
from birthgrowth.scenarios import EXAMPLE_CONFIGS, random_K, random_scenario, sample_growth  # noqa: E402

N_SCENARIOS = 200
DEPTHS = 6
DIRS = oracles.directions(360)


LINES: dict[int, str] = {}


def report(n: int, name: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {n:2d}  {name}: {detail}"
    LINES[n] = line
    print(line, flush=True)


def rand_poly(rng, scale_=5.0):
    n = int(rng.integers(1, 13))
    c = rng.uniform(-scale_, scale_, 2)
    pts = c + rng.normal(size=(n, 2)) * rng.uniform(0.01, scale_)
    return ConvexBody.from_points(pts.tolist())


# ---------------------------------------------------------------------------

def test_c01_support_minkowski_duality():
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(1000):
        a, b = rand_poly(rng), rand_poly(rng)
        lhs = support_many(minkowski_sum(a, b), DIRS)
        rhs = oracles.support_pts(a.vertices, DIRS) + oracles.support_pts(b.vertices, DIRS)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    ok = worst <= 1e-9
    report(1, "support of a Minkowski sum is additive", ok, f"max error {worst:.3e} over 1000 pairs")
    assert ok


def test_c02_hausdorff_dual_identity():
    rng = np.random.default_rng(2)
    worst_exact = 0.0
    worst_excess = -math.inf
    n = 360
    for _ in range(500):
        a, b = rand_poly(rng), rand_poly(rng)
        h = hausdorff(a, b)
        worst_exact = max(worst_exact, abs(h - hausdorff_dual(a, b, dual_grid(a, b))))
        h_grid = hausdorff_dual(a, b, uniform_directions(n))
        lip = 2 * max(a.norm, b.norm) * 2 * math.sin(math.pi / (2 * n))
        worst_excess = max(worst_excess, abs(h - h_grid) - lip)
    ok = worst_exact <= 1e-8 and worst_excess <= 0
    report(2, "Hausdorff equals sup-norm of support difference", ok,
           f"exact-grid error {worst_exact:.3e}; uniform-grid error minus Lipschitz bound "
           f"{worst_excess:.3e} over 500 pairs")
    assert ok


def test_c03_aumann_constant_case():
    rng = np.random.default_rng(3)
    worst = 0.0
    for k in range(100):
        K = random_K(int(rng.integers(0, 2**31)))
        t0, T = 0.0, float(rng.uniform(0.5, 5))
        a, b = sorted(rng.uniform(t0, T, 2))
        g = PiecewiseConstantGrowth.constant(K, t0, T)
        worst = max(worst, hausdorff(aumann_integral(g, float(a), float(b)), scale(K, float(b - a))))
    ok = worst <= 1e-9
    report(3, "integral of a constant body is (b-a)K", ok, f"max distance {worst:.3e} over 100 cases")
    assert ok


def test_c04_integral_monotonicity():
    rng = np.random.default_rng(4)
    fails = 0
    kinds = ("piecewise_random", "shrinking_anisotropic", "constant")
    for k in range(1000):
        seed = int(rng.integers(0, 2**31))
        g = sample_growth(kinds[k % 3], random_K(seed), seed, 0.0, 1.0, int(rng.integers(1, 7)))
        a2, a1, b1, b2 = (float(x) for x in np.sort(rng.uniform(0, 1, 4)))
        fails += not contains_convex(aumann_integral(g, a2, b2), aumann_integral(g, a1, b1))
    ok = fails == 0
    report(4, "nested intervals give nested integrals", ok, f"{fails} violations in 1000 cases")
    assert ok


# --- shared chain data for criteria 5 to 7 ----------------------------------

@functools.lru_cache(maxsize=1)
def chain_data():
    out = []
    for seed in range(N_SCENARIOS):
        sc = random_scenario(seed)
        integ = engine._Integrals(sc.growth)
        parts = chain(base_partition(sc.births, sc.growth, sc.T), DEPTHS)
        pairs = [sums(sc.births, sc.growth, p, integ) for p in parts]
        diam = max((hi.diameter for _, hi in pairs), default=0.0)
        out.append((seed, sc, parts, pairs, diam))
    return out


def test_c05_sandwich():
    viol = []
    for seed, sc, parts, pairs, diam in chain_data():
        tol = 1e-9 * diam
        for j, (lo, hi) in enumerate(pairs):
            if not region_subset(lo, hi, tol):
                viol.append((seed, j))
    ok = not viol
    report(5, "lower sum inside upper sum", ok,
           f"{len(viol)} violations over {N_SCENARIOS} scenarios x depths 0..{DEPTHS}"
           + (f" first {viol[:5]}" if viol else ""))
    assert ok


def test_c06_refinement_monotonicity():
    viol = []
    for seed, sc, parts, pairs, diam in chain_data():
        tol = 1e-9 * diam
        for j in range(DEPTHS):
            (lo0, hi0), (lo1, hi1) = pairs[j], pairs[j + 1]
            if not region_subset(lo0, lo1, tol):
                viol.append((seed, j, "lower"))
            if not region_subset(hi1, hi0, tol):
                viol.append((seed, j, "upper"))
    ok = not viol
    report(6, "lower sums grow and upper sums shrink under refinement", ok,
           f"{len(viol)} violations" + (f" first {viol[:5]}" if viol else ""))
    assert ok


def test_c07_gap_bound_and_rate():
    over_bound, slow = [], []
    worst_ratio = 0.0
    for seed, sc, parts, pairs, diam in chain_data():
        delta = 1e-9 * max(diam, 1.0)
        gaps = [region_hausdorff(lo, hi, delta) for lo, hi in pairs]
        for p, gp in zip(parts, gaps):
            if gp > engine.a_priori_bound(p, sc.growth) + delta:
                over_bound.append(seed)
        # base partition already holds every event time, so the rate applies from depth 0
        for j in range(DEPTHS):
            if gaps[j] > 1e-12:
                r = gaps[j + 1] / gaps[j]
                worst_ratio = max(worst_ratio, r)
                if r > 0.55:
                    slow.append((seed, j, round(r, 4)))
    ok = not over_bound and not slow
    report(7, "gap within mesh bound and shrinking by half", ok,
           f"{len(over_bound)} bound violations; {len(slow)} ratio violations "
           f"(worst ratio {worst_ratio:.4f})" + (f" at {slow[:5]}" if slow else ""))
    assert not over_bound, f"bound exceeded for seeds {over_bound[:10]}"
    assert not slow, f"gap ratio above 0.55 for (seed, depth, ratio) {slow}"


def test_c08_partition_independence():
    worst = 0.0
    for seed in range(50):
        sc = random_scenario(seed)
        r_d, _ = theta(sc.births, sc.growth, sc.T, 1e-4, strategy="dyadic")
        r_t, _ = theta(sc.births, sc.growth, sc.T, 1e-4, strategy="trisection")
        worst = max(worst, region_hausdorff(r_d, r_t, 1e-6))
    ok = worst <= 2.2e-4
    report(8, "dyadic and trisection limits agree", ok, f"max distance {worst:.3e} over 50 scenarios")
    assert ok


def test_c09_trajectory_monotone():
    viol = []
    n_traj = 0
    for seed in range(N_SCENARIOS):
        sc = random_scenario(seed)
        times = np.linspace(sc.t0, sc.T, 5)
        snaps = [theta(sc.births, sc.growth, float(t), 1e-3)[0] for t in times]
        dyn = run_discrete(sc.births, sc.growth, chain(base_partition(sc.births, sc.growth, sc.T), 3)[-1])
        for traj in (snaps, [r for _, r in dyn.snapshots]):
            n_traj += 1
            for k, (r0, r1) in enumerate(zip(traj, traj[1:])):
                if not region_subset(r0, r1, 1e-6):
                    viol.append((seed, k))
    ok = not viol
    report(9, "emitted trajectories are non-decreasing", ok,
           f"{len(viol)} violations over {n_traj} trajectories")
    assert ok


def test_c10_discrete_continuous_consistency():
    worst = 0.0
    cases = 0
    for seed in range(N_SCENARIOS):
        sc = random_scenario(seed)
        for p in chain(base_partition(sc.births, sc.growth, sc.T), 2):
            assert set(sc.growth.interior_breakpoints) <= set(p.times)
            a = run_discrete(sc.births, sc.growth, p).snapshots[-1][1]
            b = lower_sum(sc.births, sc.growth, p)
            worst = max(worst, region_hausdorff(a, b, 1e-10))
            cases += 1
    ok = worst <= 1e-9
    report(10, "discrete recursion equals lower sum on the same grid", ok,
           f"max distance {worst:.3e} over {cases} grids")
    assert ok


def test_c11_boolean_degeneration():
    worst = 0.0
    checked = 0
    for seed in range(50):
        sc = random_scenario(seed)
        g = PiecewiseConstantGrowth.constant(point(), sc.t0, sc.T)
        for t in np.linspace(sc.t0, sc.T, 6):
            t = float(t)
            truth = sc.births.cumulative(t)
            for p in chain(base_partition(sc.births, g, t), 4):
                lo, hi = sums(sc.births, g, p)
                worst = max(worst, region_hausdorff(lo, truth, 1e-9), region_hausdorff(hi, truth, 1e-9))
                checked += 1
            r, _ = theta(sc.births, g, t, 1e-6)
            worst = max(worst, region_hausdorff(r, truth, 1e-9))
    ok = worst == 0.0
    report(11, "null growth reproduces the germ union", ok,
           f"max distance {worst:.3e} over {checked} partitions")
    assert ok


def test_c12_cli_determinism():
    mismatches = []
    runs = 0
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        for name, cfg in EXAMPLE_CONFIGS.items():
            scen = tmp / f"{name}.json"
            scen.write_text(json.dumps(cfg))
            for cmd in ("simulate", "converge", "validate", "export-svg"):
                extra = ["--seeds-count", "2", "--depth", "3"] if cmd == "validate" else []
                outs = []
                for rep in ("a", "b"):
                    out = tmp / name / cmd / rep
                    code = cli_main([cmd, "--scenario", str(scen), *extra, "--out", str(out)])
                    runs += 1
                    outs.append((code, {p.name: p.read_bytes() for p in sorted(out.iterdir())}))
                if outs[0] != outs[1] or not outs[0][1]:
                    mismatches.append((name, cmd))
    ok = not mismatches
    report(12, "CLI outputs are byte-identical across runs", ok,
           f"{len(mismatches)} mismatches over {runs} runs" + (f": {mismatches}" if mismatches else ""))
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
