"""Growth processes and their set-valued (Aumann) time integrals.

A growth process is one sample path t -> G(t), a convex body containing the
origin and bounded by a fixed body K, with left-continuous trajectories.
Piecewise-constant paths integrate exactly; general paths are sampled on a
fixed midpoint panel grid and reconstructed from support values.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from . import convex
from .convex import (
    ORIGIN,
    ConvexBody,
    contains_convex,
    from_support_samples,
    minkowski_sum,
    scale,
    support_many,
    uniform_directions,
)

CONTAINS_ORIGIN = "contains_origin"
CONVEX = "convex"
WITHIN_BOUND = "within_bound"
ASSUMPTIONS = (CONTAINS_ORIGIN, CONVEX, WITHIN_BOUND)


class AssumptionError(ValueError):
    """A growth value violates one of the structural assumptions."""

    def __init__(self, label: str, t: float, message: str = ""):
        self.label = label
        self.t = t
        super().__init__(f"{label} violated at t={t}" + (f": {message}" if message else ""))


def _value_violation(value: ConvexBody, bound: ConvexBody) -> str | None:
    if not contains_convex(value, ORIGIN):
        return CONTAINS_ORIGIN
    try:
        ConvexBody(value.vertices)
    except convex.GeometryError:
        return CONVEX
    if not contains_convex(bound, value):
        return WITHIN_BOUND
    return None


@dataclass(frozen=True)
class PiecewiseConstantGrowth:
    """Step growth: ``pieces[j]`` on the interval (breakpoints[j], breakpoints[j+1]].

    ``initial`` is the value at the left end; it defaults to the first piece.
    """

    breakpoints: tuple[float, ...]
    pieces: tuple[ConvexBody, ...]
    bound: ConvexBody
    initial: ConvexBody | None = None

    approximate = False

    def __post_init__(self) -> None:
        bp = tuple(float(t) for t in self.breakpoints)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if len(bp) < 2 or any(b <= a for a, b in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing with at least 2 entries")
        if len(self.pieces) != len(bp) - 1:
            raise ValueError("need exactly one piece per breakpoint interval")
        if self.initial is None:
            object.__setattr__(self, "initial", self.pieces[0])

    @classmethod
    def constant(cls, body: ConvexBody, t0: float, T: float,
                 bound: ConvexBody | None = None) -> PiecewiseConstantGrowth:
        return cls((t0, T), (body,), body if bound is None else bound)

    @property
    def t0(self) -> float:
        return self.breakpoints[0]

    @property
    def T(self) -> float:
        return self.breakpoints[-1]

    @property
    def interior_breakpoints(self) -> tuple[float, ...]:
        return self.breakpoints[1:-1]

    def __call__(self, t: float) -> ConvexBody:
        if not self.t0 <= t <= self.T:
            raise ValueError(f"time {t} outside [{self.t0}, {self.T}]")
        if t == self.t0:
            return self.initial
        j = bisect.bisect_left(self.breakpoints, t)
        return self.pieces[j - 1]

    @cached_property
    def first_violation(self) -> tuple[str, float] | None:
        vals = [(self.t0, self.initial)] + [
            (0.5 * (a + b), p) for a, b, p in zip(self.breakpoints, self.breakpoints[1:], self.pieces)
        ]
        for t, v in vals:
            lab = _value_violation(v, self.bound)
            if lab:
                return lab, t
        return None

    def integral(self, a: float, b: float) -> ConvexBody:
        out = ORIGIN
        bp = self.breakpoints
        j = max(bisect.bisect_right(bp, a) - 1, 0)
        while j < len(self.pieces) and bp[j] < b:
            w = min(b, bp[j + 1]) - max(a, bp[j])
            if w > 0:
                out = minkowski_sum(out, scale(self.pieces[j], w))
            j += 1
        return out


@dataclass(frozen=True)
class SampledGrowth:
    """Growth given by an evaluator, declared left-continuous.

    Integrals use the composite midpoint rule on ``n_quad`` panels covering
    [t0, T]; panels partially inside the integration interval are weighted by
    their overlap. The body is rebuilt from its support values on ``n_dirs``
    uniform directions plus the edge normals of ``bound``. The result contains
    the exact integral of the panel-wise constant approximation.
    """

    evaluator: Callable[[float], ConvexBody]
    t0: float
    T: float
    bound: ConvexBody
    n_quad: int = 256
    n_dirs: int = 360
    modulus: float | None = None
    name: str = field(default="sampled", compare=False)

    approximate = True

    def __post_init__(self) -> None:
        if not self.T > self.t0:
            raise ValueError("need t0 < T")

    @property
    def interior_breakpoints(self) -> tuple[float, ...]:
        return ()

    def __call__(self, t: float) -> ConvexBody:
        if not self.t0 <= t <= self.T:
            raise ValueError(f"time {t} outside [{self.t0}, {self.T}]")
        return self.evaluator(t)

    @cached_property
    def panel_edges(self) -> np.ndarray:
        return np.linspace(self.t0, self.T, self.n_quad + 1)

    @cached_property
    def midpoint_values(self) -> tuple[ConvexBody, ...]:
        e = self.panel_edges
        return tuple(self.evaluator(float(0.5 * (e[k] + e[k + 1]))) for k in range(self.n_quad))

    @cached_property
    def directions(self) -> np.ndarray:
        dirs = uniform_directions(self.n_dirs) + self.bound.edge_normals()
        return np.array(dirs)

    @cached_property
    def _support_table(self) -> np.ndarray:
        return np.stack([support_many(v, self.directions) for v in self.midpoint_values])

    @cached_property
    def first_violation(self) -> tuple[str, float] | None:
        e = self.panel_edges
        for k, v in enumerate(self.midpoint_values):
            lab = _value_violation(v, self.bound)
            if lab:
                return lab, float(0.5 * (e[k] + e[k + 1]))
        return None

    def reconstruction_error(self, a: float, b: float) -> float:
        """Bound on the over-approximation from the finite direction grid."""
        dth = 2 * math.pi / self.n_dirs
        return self.bound.norm * (b - a) * (1 - math.cos(dth / 2)) / math.cos(dth / 2)

    def integral(self, a: float, b: float) -> ConvexBody:
        if b == a:
            return ORIGIN
        e = self.panel_edges
        w = np.clip(np.minimum(e[1:], b) - np.maximum(e[:-1], a), 0.0, None)
        h = w @ self._support_table
        # support of a body containing the origin is non-negative
        h = np.maximum(h, 0.0)
        return from_support_samples(list(zip(map(tuple, self.directions), h)))


GrowthProcess = PiecewiseConstantGrowth | SampledGrowth


def aumann_integral(g: GrowthProcess, a: float, b: float) -> ConvexBody:
    """Integral of the growth process over [a, b] as a convex body.

    Raises :class:`AssumptionError` (labelled) if the process violates the
    origin, convexity or boundedness assumptions.
    """
    if not (g.t0 <= a <= b <= g.T):
        raise ValueError(f"invalid interval [{a}, {b}] for process on [{g.t0}, {g.T}]")
    bad = g.first_violation
    if bad is not None:
        raise AssumptionError(*bad)
    return g.integral(a, b)


@dataclass
class AssumptionReport:
    entries: list[tuple[float, str, bool]]

    @property
    def ok(self) -> bool:
        return all(p for _, _, p in self.entries)

    def failures(self) -> list[tuple[float, str]]:
        return [(t, lab) for t, lab, p in self.entries if not p]

    def passed(self, label: str) -> bool:
        return all(p for _, lab, p in self.entries if lab == label)


def check_assumptions(g: GrowthProcess, sample_times: Sequence[float]) -> AssumptionReport:
    """Check origin membership, convexity and boundedness at each sample time."""
    entries = []
    for t in sample_times:
        v = g(t)
        entries.append((t, CONTAINS_ORIGIN, contains_convex(v, ORIGIN)))
        try:
            ConvexBody(v.vertices)
            ok = True
        except convex.GeometryError:
            ok = False
        entries.append((t, CONVEX, ok))
        entries.append((t, WITHIN_BOUND, contains_convex(g.bound, v)))
    return AssumptionReport(entries)


def integral_monotone_check(g: GrowthProcess, iv1: tuple[float, float],
                            iv2: tuple[float, float]) -> bool:
    """The integral over a sub-interval sits inside the integral over the interval."""
    (a1, b1), (a2, b2) = iv1, iv2
    if not (a2 <= a1 <= b1 <= b2):
        raise ValueError(f"{iv1} is not contained in {iv2}")
    return contains_convex(aumann_integral(g, a2, b2), aumann_integral(g, a1, b1))
