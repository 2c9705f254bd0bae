"""Lower and upper partition sums, their refinement limit, and the discrete stepper.

For a partition t_0 < t_1 < ... < t_n = t, each germ born in the slice
(t_{i-1}, t_i] is dilated by the growth integral over [t_i, t] in the lower
sum and over [t_{i-1}, t] in the upper sum. Germs born at t_0 are dilated by
the integral over [t_0, t] in both. The limit process is approximated by the
lower sum once the certified gap between the two sums drops below ``tol``.
"""
from __future__ import annotations

import bisect
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .convex import ConvexBody, minkowski_sum
from .growth import GrowthProcess, aumann_integral
from .region import Region, dilate, region_hausdorff, region_subset, union

log = logging.getLogger(__name__)

MAX_DEPTH = 20


@dataclass(frozen=True)
class BirthSchedule:
    """Timestamped germs on [t0, T]; B_t is the union of germs born by t."""

    events: tuple[tuple[float, ConvexBody], ...]
    t0: float
    T: float

    def __post_init__(self) -> None:
        evs = tuple(sorted(((float(t), g) for t, g in self.events), key=lambda e: e[0]))
        for t, _ in evs:
            if not self.t0 <= t <= self.T:
                raise ValueError(f"birth time {t} outside [{self.t0}, {self.T}]")
        object.__setattr__(self, "events", evs)

    @property
    def times(self) -> list[float]:
        return [t for t, _ in self.events]

    def cumulative(self, t: float) -> Region:
        return Region(tuple(g for s, g in self.events if s <= t))

    def increment(self, a: float, b: float) -> Region:
        """Germs born in (a, b]."""
        return Region(tuple(g for s, g in self.events if a < s <= b))

    @property
    def has_initial(self) -> bool:
        return any(t == self.t0 for t, _ in self.events)


@dataclass(frozen=True)
class Partition:
    times: tuple[float, ...]

    def __post_init__(self) -> None:
        ts = tuple(float(t) for t in self.times)
        if not ts:
            raise ValueError("empty partition")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("partition times must be strictly increasing")
        object.__setattr__(self, "times", ts)

    @property
    def start(self) -> float:
        return self.times[0]

    @property
    def end(self) -> float:
        return self.times[-1]

    @property
    def mesh(self) -> float:
        return max((b - a for a, b in zip(self.times, self.times[1:])), default=0.0)

    def refines(self, other: Partition) -> bool:
        return set(other.times) <= set(self.times)

    def restrict(self, t: float) -> Partition:
        """Points up to ``t``, closed with ``t`` itself."""
        ts = [s for s in self.times if s < t]
        return Partition(tuple(ts) + (t,))


def refine(p: Partition) -> Partition:
    """Dyadic refinement: insert the midpoint of every gap."""
    ts = [p.times[0]]
    for a, b in zip(p.times, p.times[1:]):
        m = 0.5 * (a + b)
        if a < m < b:
            ts.append(m)
        ts.append(b)
    return Partition(tuple(ts))


def trisect(p: Partition) -> Partition:
    """Split every gap into three equal parts."""
    ts = [p.times[0]]
    for a, b in zip(p.times, p.times[1:]):
        for k in (1, 2):
            m = a + k * (b - a) / 3
            if ts[-1] < m < b:
                ts.append(m)
        ts.append(b)
    return Partition(tuple(ts))


def uniform_partition(t0: float, t: float, n: int) -> Partition:
    if t == t0:
        return Partition((t0,))
    return Partition(tuple([t0 + k * (t - t0) / n for k in range(n)] + [t]))


def base_partition(b: BirthSchedule, g: GrowthProcess, t: float) -> Partition:
    """{t0} with every birth time and growth breakpoint in (t0, t], closed by t."""
    pts = {b.t0, t}
    pts.update(s for s in b.times if b.t0 < s < t)
    pts.update(s for s in g.interior_breakpoints if b.t0 < s < t)
    return Partition(tuple(sorted(pts)))


class _Integrals:
    """Memoized growth integrals for one evaluation."""

    def __init__(self, g: GrowthProcess):
        self.g = g
        self.cache: dict[tuple[float, float], ConvexBody] = {}

    def __call__(self, a: float, b: float) -> ConvexBody:
        key = (a, b)
        if key not in self.cache:
            self.cache[key] = aumann_integral(self.g, a, b)
        return self.cache[key]


def _check(b: BirthSchedule, g: GrowthProcess, p: Partition) -> float:
    if p.start != b.t0:
        raise ValueError(f"partition starts at {p.start}, process at {b.t0}")
    if not b.t0 <= p.end <= b.T:
        raise ValueError(f"partition end {p.end} outside [{b.t0}, {b.T}]")
    if g.t0 > b.t0 or g.T < p.end:
        raise ValueError("growth process does not cover the partition")
    return p.end


def _pairs(b: BirthSchedule, g: GrowthProcess, p: Partition,
           integ: _Integrals | None = None) -> list[tuple[ConvexBody, ConvexBody]]:
    """(lower, upper) component per germ born by the partition end."""
    t = _check(b, g, p)
    integ = integ or _Integrals(g)
    ts = p.times
    out = []
    for s, germ in b.events:
        if s > t:
            break
        i = bisect.bisect_left(ts, s)
        if i == 0:
            full = integ(ts[0], t)
            lo = hi = minkowski_sum(germ, full)
        else:
            lo = minkowski_sum(germ, integ(ts[i], t))
            hi = minkowski_sum(germ, integ(ts[i - 1], t))
        out.append((lo, hi))
    return out


def lower_sum(b: BirthSchedule, g: GrowthProcess, p: Partition) -> Region:
    """Lower partition sum at the partition's right end."""
    return Region(tuple(lo for lo, _ in _pairs(b, g, p)))


def upper_sum(b: BirthSchedule, g: GrowthProcess, p: Partition) -> Region:
    """Upper partition sum at the partition's right end."""
    return Region(tuple(hi for _, hi in _pairs(b, g, p)))


def sums(b: BirthSchedule, g: GrowthProcess, p: Partition,
         integ: _Integrals | None = None) -> tuple[Region, Region]:
    pairs = _pairs(b, g, p, integ)
    return Region(tuple(lo for lo, _ in pairs)), Region(tuple(hi for _, hi in pairs))


def bound_norm(g: GrowthProcess) -> float:
    return g.bound.norm


def a_priori_bound(p: Partition, g: GrowthProcess) -> float:
    """|mesh| * (||K||_h + 1)."""
    return p.mesh * (bound_norm(g) + 1.0)


@dataclass
class Certificate:
    t: float
    depth: int
    mesh: float
    gap: float
    bound: float
    converged_by: str = ""
    approximate: bool = False
    empty_start: bool = False

    def to_json(self) -> dict:
        return {
            "t": self.t, "depth": self.depth, "mesh": self.mesh, "gap": self.gap,
            "bound": self.bound, "converged_by": self.converged_by,
            "approximate": self.approximate, "empty_start": self.empty_start,
        }


class RefinementBudgetError(RuntimeError):
    def __init__(self, certificate: Certificate):
        self.certificate = certificate
        super().__init__(
            f"no convergence within depth {certificate.depth}: "
            f"gap={certificate.gap:.3e}, bound={certificate.bound:.3e}"
        )


def measured_gap(lower: Region, upper: Region, delta: float) -> float:
    return region_hausdorff(lower, upper, delta)


def theta(b: BirthSchedule, g: GrowthProcess, t: float, tol: float,
          max_depth: int = MAX_DEPTH, strategy: str = "dyadic") -> tuple[Region, Certificate]:
    """Approximate the process at time ``t`` to Hausdorff accuracy ``tol``.

    ``strategy="dyadic"`` starts from :func:`base_partition` and halves every
    gap; ``"trisection"`` starts from {t0, t} and splits every gap in three.
    Stops when the certified gap, or the a-priori mesh bound, is below ``tol``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not b.t0 <= t <= b.T:
        raise ValueError(f"time {t} outside [{b.t0}, {b.T}]")
    if strategy == "dyadic":
        p, step = base_partition(b, g, t), refine
    elif strategy == "trisection":
        p, step = (Partition((b.t0, t)) if t > b.t0 else Partition((b.t0,))), trisect
    else:
        raise ValueError(f"unknown refinement strategy {strategy!r}")
    delta = tol / 10
    integ = _Integrals(g)
    depth = 0
    while True:
        lower, upper = sums(b, g, p, integ)
        gap = measured_gap(lower, upper, delta)
        bound = a_priori_bound(p, g)
        cert = Certificate(t=t, depth=depth, mesh=p.mesh, gap=gap, bound=bound,
                           approximate=g.approximate, empty_start=not b.has_initial)
        if gap + delta <= tol:
            cert.converged_by = "gap"
        elif bound <= tol:
            cert.converged_by = "bound"
        if cert.converged_by:
            log.debug("theta t=%g converged at depth %d (%s)", t, depth, cert.converged_by)
            return lower, cert
        if depth >= max_depth:
            raise RefinementBudgetError(cert)
        p = step(p)
        depth += 1


def discrete_step(prev: Region, g_k: ConvexBody, b_k: Region) -> Region:
    """One step of the discrete-time recursion: dilate, then add new germs."""
    return union(dilate(prev, g_k), b_k)


@dataclass(frozen=True)
class Trajectory:
    snapshots: tuple[tuple[float, Region], ...]

    def is_monotone(self, tol: float = 1e-6) -> bool:
        return all(
            region_subset(r0, r1, tol)
            for (_, r0), (_, r1) in zip(self.snapshots, self.snapshots[1:])
        )

    def to_json(self, certificates: Sequence[Certificate] | None = None) -> dict:
        snaps = []
        for k, (t, r) in enumerate(self.snapshots):
            entry = {"t": t, "region": r.to_json()}
            if certificates is not None:
                entry["certificate"] = certificates[k].to_json()
            snaps.append(entry)
        return {"schema_version": 1, "snapshots": snaps}

    @classmethod
    def from_json(cls, data: dict) -> Trajectory:
        return cls(tuple((s["t"], Region.from_json(s["region"])) for s in data["snapshots"]))


def run_discrete(b: BirthSchedule, g: GrowthProcess, grid: Partition) -> Trajectory:
    """Fold the discrete recursion over ``grid``; germs enter undilated."""
    if grid.start != b.t0 or grid.end > b.T:
        raise ValueError("grid must start at t0 and stay within [t0, T]")
    integ = _Integrals(g)
    state = b.cumulative(b.t0)
    snaps = [(grid.start, state)]
    for a, c in zip(grid.times, grid.times[1:]):
        state = discrete_step(state, integ(a, c), b.increment(a, c))
        snaps.append((c, state))
    return Trajectory(tuple(snaps))


# ---------------------------------------------------------------------------
# property checks over refinement chains


@dataclass
class Check:
    name: str
    passed: bool
    measured: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "measured": self.measured}


@dataclass
class SuiteReport:
    checks: list[Check]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_json() for c in self.checks]}


def chain(start: Partition, depth: int, step=refine) -> list[Partition]:
    out = [start]
    for _ in range(depth):
        out.append(step(out[-1]))
    return out


def _scale_of(b: BirthSchedule, g: GrowthProcess) -> float:
    reach = max((abs(c) for _, germ in b.events for v in germ.vertices for c in v), default=0.0)
    return max(1.0, reach + (b.T - b.t0) * bound_norm(g))


def proposition_suite(b: BirthSchedule, g: GrowthProcess, t: float, depth: int,
                      tol: float = 1e-3) -> SuiteReport:
    """Run every inclusion, convergence and monotonicity check for one sample path."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    scale_ = _scale_of(b, g)
    incl = 1e-9 * scale_
    delta = 1e-9 * scale_
    integ = _Integrals(g)
    knorm = bound_norm(g)
    checks: list[Check] = []

    dy = chain(base_partition(b, g, t), depth)
    tri_start = Partition((b.t0, t)) if t > b.t0 else Partition((b.t0,))
    tri = chain(tri_start, max(1, math.ceil(depth * math.log(2) / math.log(3))), trisect)
    results = {}
    for label, parts in (("dyadic", dy), ("trisection", tri)):
        results[label] = [sums(b, g, p, integ) for p in parts]

    # lower sum inside upper sum, every partition
    viol = sum(
        not region_subset(lo, hi, incl) for rs in results.values() for lo, hi in rs
    )
    checks.append(Check("sandwich", viol == 0, {"violations": viol, "tolerance": incl}))

    # refinement: lower grows, upper shrinks
    viol = 0
    for rs in results.values():
        for (lo0, hi0), (lo1, hi1) in zip(rs, rs[1:]):
            viol += not region_subset(lo0, lo1, incl)
            viol += not region_subset(hi1, hi0, incl)
    checks.append(Check("refinement_monotone", viol == 0, {"violations": viol}))

    # gap against the mesh bound, and non-increasing along each chain
    gaps = {
        label: [measured_gap(lo, hi, delta) for lo, hi in rs] for label, rs in results.items()
    }
    slack = min(
        a_priori_bound(p, g) - gp
        for label, parts in (("dyadic", dy), ("trisection", tri))
        for p, gp in zip(parts, gaps[label])
    )
    checks.append(Check("gap_bound", slack >= -delta, {
        "min_slack": slack, "dyadic_gaps": gaps["dyadic"], "norm_K": knorm,
    }))
    rises = max(
        (g1 - g0 for gs in gaps.values() for g0, g1 in zip(gs, gs[1:])), default=0.0
    )
    checks.append(Check("gap_nonincreasing", rises <= 2 * delta, {"max_rise": rises}))

    # two refinement chains bracket the same limit
    lo_d, _ = results["dyadic"][-1]
    lo_t, _ = results["trisection"][-1]
    allowed = gaps["dyadic"][-1] + gaps["trisection"][-1] + 2 * delta
    dist = region_hausdorff(lo_d, lo_t, delta)
    checks.append(Check("partition_independence", dist <= allowed,
                        {"distance": dist, "allowed": allowed}))

    # limit is unique: two tolerances agree
    try:
        r1, c1 = theta(b, g, t, tol)
        r2, c2 = theta(b, g, t, tol / 10)
        d = region_hausdorff(r1, r2, tol / 100)
        checks.append(Check("limit_consistency", d <= tol + tol / 10,
                            {"distance": d, "allowed": tol + tol / 10}))
    except RefinementBudgetError as err:
        checks.append(Check("limit_consistency", False, {"error": str(err)}))

    # sums at an earlier time sit inside the sums at t
    if t > b.t0:
        s = 0.5 * (b.t0 + t)
        viol = 0
        for p in dy:
            pt = Partition(tuple(sorted(set(p.times) | {s})))
            ps = pt.restrict(s)
            lo_s, hi_s = sums(b, g, ps, integ)
            lo_t1, hi_t1 = sums(b, g, pt, integ)
            viol += not region_subset(lo_s, lo_t1, incl)
            viol += not region_subset(hi_s, hi_t1, incl)
        checks.append(Check("time_monotone", viol == 0, {"violations": viol, "s": s}))

        # semigroup: evolve from s to t, then add later births
        grid = Partition(tuple(sorted(set(dy[-1].times) | {s})))
        lo_t1, _ = sums(b, g, grid, integ)
        lo_s, _ = sums(b, g, grid.restrict(s), integ)
        later = [
            minkowski_sum(germ, integ(grid.times[bisect.bisect_left(grid.times, e)], t))
            for e, germ in b.events if s < e <= t
        ]
        evolved = union(dilate(lo_s, integ(s, t)), Region(tuple(later)))
        d = region_hausdorff(lo_t1, evolved, delta)
        checks.append(Check("semigroup", d <= 2 * tol, {"distance": d}))

    traj = run_discrete(b, g, dy[min(depth, 3)])
    viol = sum(
        not region_subset(r0, r1, 1e-6)
        for (_, r0), (_, r1) in zip(traj.snapshots, traj.snapshots[1:])
    )
    checks.append(Check("trajectory_monotone", viol == 0, {"violations": viol}))
    return SuiteReport(checks)
