"""Seeded scenario generation: Poisson nucleation, growth samplers, config files.

Randomness comes from numpy's counter-based Philox generator. Every draw
uses its own stream, keyed by (seed, domain, index), so a scenario is a pure
function of its config and seed, and events can be sampled independently.
"""
from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .convex import (
    ConvexBody,
    box,
    contains_convex,
    intersection,
    point,
    regular_polygon,
    scale,
    ORIGIN,
)
from .engine import BirthSchedule
from .growth import GrowthProcess, PiecewiseConstantGrowth, SampledGrowth

_BIRTH_COUNT, _BIRTH_EVENT, _GROWTH, _SCENARIO = 0, 1, 2, 3

GROWTH_KINDS = ("constant", "piecewise_random", "shrinking_anisotropic")


class ScenarioError(ValueError):
    """Invalid scenario configuration."""


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent Philox stream for ``key`` under ``seed``."""
    if seed < 0:
        raise ScenarioError("seed must be non-negative")
    ss = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class Window:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self) -> None:
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ScenarioError("window must have positive width and height")

    @property
    def area(self) -> float:
        return (self.xmax - self.xmin) * (self.ymax - self.ymin)

    def to_json(self) -> list[float]:
        return [self.xmin, self.ymin, self.xmax, self.ymax]


@dataclass(frozen=True)
class PiecewiseIntensity:
    """Rate ``rates[j]`` on (breakpoints[j], breakpoints[j+1]]."""

    breakpoints: tuple[float, ...]
    rates: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.rates) != len(self.breakpoints) - 1:
            raise ScenarioError("need one rate per intensity interval")
        if any(r < 0 for r in self.rates):
            raise ScenarioError("intensity must be non-negative")

    def __call__(self, t: float) -> float:
        j = min(max(bisect.bisect_left(self.breakpoints, t), 1), len(self.rates))
        return self.rates[j - 1]

    @property
    def max(self) -> float:
        return max(self.rates)


@dataclass(frozen=True)
class NucleationSpec:
    intensity: float | PiecewiseIntensity
    germ: ConvexBody = field(default_factory=point)

    def __post_init__(self) -> None:
        if isinstance(self.intensity, (int, float)) and self.intensity < 0:
            raise ScenarioError("intensity must be non-negative")

    def rate(self, t: float) -> float:
        return float(self.intensity) if not callable(self.intensity) else self.intensity(t)

    @property
    def max_rate(self) -> float:
        return float(self.intensity) if not callable(self.intensity) else self.intensity.max


def sample_births(spec: NucleationSpec, window: Window, t0: float, T: float,
                  seed: int) -> BirthSchedule:
    """Poisson germs in space-time, by thinning a homogeneous process at the peak rate."""
    lam = spec.max_rate
    if lam == 0:
        return BirthSchedule((), t0, T)
    n = int(stream(seed, _BIRTH_COUNT).poisson(lam * (T - t0) * window.area))
    events = []
    for i in range(n):
        r = stream(seed, _BIRTH_EVENT, i)
        t, x, y, u = r.random(4)
        t = t0 + t * (T - t0)
        if u * lam >= spec.rate(t):
            continue
        x = window.xmin + x * (window.xmax - window.xmin)
        y = window.ymin + y * (window.ymax - window.ymin)
        events.append((t, i, spec.germ.translate(x, y)))
    events.sort(key=lambda e: (e[0], e[1]))
    return BirthSchedule(tuple((t, g) for t, _, g in events), t0, T)


def _strip(v: tuple[float, float], half_width: float, length: float) -> ConvexBody:
    # rectangle {|<x,v>| <= w, |<x,v_perp>| <= length} through the origin
    vx, vy = v
    px, py = -vy, vx
    pts = [(sa * half_width * vx + sb * length * px, sa * half_width * vy + sb * length * py)
           for sa, sb in ((1, 1), (-1, 1), (-1, -1), (1, -1))]
    return ConvexBody.from_points(pts)


def sample_growth(kind: str, K: ConvexBody, seed: int, t0: float = 0.0, T: float = 1.0,
                  n_pieces: int = 4) -> PiecewiseConstantGrowth:
    """Random growth path whose values contain 0 and lie in ``K`` by construction."""
    if not contains_convex(K, ORIGIN):
        raise ScenarioError("growth bound K must contain the origin")
    if kind == "constant":
        return PiecewiseConstantGrowth.constant(K, t0, T)
    r = stream(seed, _GROWTH)
    if kind == "piecewise_random":
        inner = np.sort(r.uniform(t0, T, n_pieces - 1))
        bp = (t0, *map(float, inner), T)
        pieces = []
        for _ in range(n_pieces):
            body = scale(K, float(r.uniform(0.2, 1.0)))
            if K.n >= 3 and r.random() < 0.5:
                th = float(r.uniform(0, math.pi))
                w = float(r.uniform(0.3, 1.0)) * K.norm
                body = intersection(body, _strip((math.cos(th), math.sin(th)), w, 2 * K.norm + 1))
            pieces.append(body)
    elif kind == "shrinking_anisotropic":
        if K.n < 3:
            raise ScenarioError("anisotropic growth needs a full-dimensional K")
        bp = tuple(float(t) for t in np.linspace(t0, T, n_pieces + 1))
        rx, ry = r.uniform(0.2, 0.9, 2)
        pieces = []
        for j in range(n_pieces):
            f = j / n_pieces
            sx, sy = 1 - rx * f, (1 - ry * f) ** 2
            squeezed = ConvexBody.from_points([(sx * x, sy * y) for x, y in K.vertices])
            pieces.append(intersection(K, squeezed))
    else:
        raise ScenarioError(f"unknown growth kind {kind!r}")
    # guard against boundary rounding from the clipping
    pieces = [p if contains_convex(K, p) else intersection(p, K) for p in pieces]
    return PiecewiseConstantGrowth(bp, tuple(pieces), K)


RADIUS_FUNCTIONS = {
    "constant": lambda s: 1.0,
    "linear_decay": lambda s: 1.0 - s,
    "exp_decay": lambda s: math.exp(-3.0 * s),
    "sqrt_decay": lambda s: 1.0 / math.sqrt(1.0 + 9.0 * s),
}


def ball_growth(radius_fn: str, n_sides: int, r0: float, t0: float, T: float,
                n_quad: int = 256) -> SampledGrowth:
    """Polygonal ball of radius r0 * f((t - t0) / (T - t0)) with a named profile f."""
    try:
        f = RADIUS_FUNCTIONS[radius_fn]
    except KeyError:
        raise ScenarioError(f"unknown radius_fn {radius_fn!r}") from None
    ngon = regular_polygon(n_sides, r0)

    def value(t: float) -> ConvexBody:
        return scale(ngon, max(0.0, f((t - t0) / (T - t0))))

    return SampledGrowth(value, t0, T, ngon, n_quad=n_quad, name=f"ball_approx:{radius_fn}")


def random_K(seed: int, radius: float | None = None) -> ConvexBody:
    """Random convex polygon containing the origin."""
    r = stream(seed, _SCENARIO, 1)
    R = float(r.uniform(0.05, 0.3)) if radius is None else radius
    m = int(r.integers(3, 9))
    ang = np.sort(r.uniform(0, 2 * math.pi, m))
    rad = R * r.uniform(0.4, 1.0, m)
    pts = [(0.0, 0.0)] + [(float(a * math.cos(t)), float(a * math.sin(t))) for a, t in zip(rad, ang)]
    # make sure the origin is well inside by adding a small regular triangle
    pts += list(regular_polygon(3, 0.2 * R).vertices)
    return ConvexBody.from_points(pts)


@dataclass(frozen=True)
class Scenario:
    window: Window
    t0: float
    T: float
    seed: int
    births: BirthSchedule
    growth: GrowthProcess
    config: dict = field(default_factory=dict, compare=False, repr=False)


def _polygon(data: Any, what: str) -> ConvexBody:
    try:
        return ConvexBody.from_json(data)
    except (KeyError, TypeError, ValueError) as err:
        raise ScenarioError(f"bad polygon for {what}: {err}") from err


def _intensity(data: Any) -> float | PiecewiseIntensity:
    if isinstance(data, (int, float)):
        if data < 0:
            raise ScenarioError("intensity must be non-negative")
        return float(data)
    return PiecewiseIntensity(tuple(map(float, data["breakpoints"])), tuple(map(float, data["rates"])))


def _build_births(cfg: dict, window: Window, t0: float, T: float, seed: int) -> BirthSchedule:
    kind = cfg.get("type", "poisson")
    if kind == "poisson":
        germ = _polygon(cfg["germ"], "births.germ") if "germ" in cfg else point()
        spec = NucleationSpec(_intensity(cfg.get("intensity", 0.0)), germ)
        return sample_births(spec, window, t0, T, seed)
    if kind == "explicit":
        evs = tuple((float(e["t"]), _polygon(e["germ"], "births.events")) for e in cfg["events"])
        return BirthSchedule(evs, t0, T)
    raise ScenarioError(f"unknown births type {kind!r}")


def _build_growth(cfg: dict, t0: float, T: float, seed: int) -> GrowthProcess:
    kind = cfg.get("type")
    if kind == "constant":
        return PiecewiseConstantGrowth.constant(_polygon(cfg["K"], "growth.K"), t0, T)
    if kind == "piecewise":
        pieces = tuple(_polygon(p, "growth.pieces") for p in cfg["pieces"])
        init = _polygon(cfg["initial"], "growth.initial") if "initial" in cfg else None
        bp = tuple(map(float, cfg["breakpoints"]))
        if bp[0] != t0 or bp[-1] != T:
            raise ScenarioError("growth breakpoints must span [t0, T]")
        return PiecewiseConstantGrowth(bp, pieces, _polygon(cfg["K"], "growth.K"), init)
    if kind == "random":
        return sample_growth(cfg.get("kind", "piecewise_random"), _polygon(cfg["K"], "growth.K"),
                             seed, t0, T, int(cfg.get("n_pieces", 4)))
    if kind == "ball_approx":
        return ball_growth(cfg["radius_fn"], int(cfg.get("n_sides", 16)),
                           float(cfg.get("r0", 0.1)), t0, T, int(cfg.get("n_quad", 256)))
    raise ScenarioError(f"unknown growth type {kind!r}")


SCENARIO_KEYS = {"window", "t0", "T", "seed", "births", "growth"}


def build_scenario(cfg: dict, seed: int | None = None) -> Scenario:
    """Scenario from a config mapping; ``seed`` overrides the config seed."""
    extra = set(cfg) - SCENARIO_KEYS
    missing = SCENARIO_KEYS - set(cfg) - {"seed"}
    if extra or missing:
        raise ScenarioError(f"config keys: unexpected {sorted(extra)}, missing {sorted(missing)}")
    try:
        window = Window(*map(float, cfg["window"]))
        t0, T = float(cfg["t0"]), float(cfg["T"])
        if not T > t0:
            raise ScenarioError("need t0 < T")
        seed = int(cfg.get("seed", 0) if seed is None else seed)
        births = _build_births(cfg["births"], window, t0, T, seed)
        growth = _build_growth(cfg["growth"], t0, T, seed)
    except ScenarioError:
        raise
    except (KeyError, TypeError, ValueError) as err:
        raise ScenarioError(f"invalid scenario: {err!r}") from err
    return Scenario(window, t0, T, seed, births, growth, dict(cfg))


def load_scenario(path: str | Path, seed: int | None = None) -> Scenario:
    with open(path) as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as err:
            raise ScenarioError(f"{path}: not valid JSON ({err})") from err
    return build_scenario(cfg, seed)


def random_scenario_config(seed: int) -> dict:
    """Config for a random test scenario on the unit window over [0, 1]."""
    r = stream(seed, _SCENARIO, 0)
    K = random_K(seed)
    kind = GROWTH_KINDS[int(r.integers(0, 3))]
    lam = float(r.uniform(3.0, 12.0))
    germ = point() if r.random() < 0.6 else scale(random_K(seed + 1), 0.2)
    births: dict = {"type": "poisson", "intensity": lam, "germ": germ.to_json()}
    if r.random() < 0.5:
        # add an initial germ so B_{t0} is nonempty
        births = {
            "type": "explicit",
            "events": [{"t": 0.0, "germ": point(0.5, 0.5).to_json()}] + [
                {"t": t, "germ": g.to_json()}
                for t, g in sample_births(NucleationSpec(lam, germ), Window(0, 0, 1, 1), 0.0, 1.0,
                                          seed).events
            ],
        }
    return {
        "window": [0.0, 0.0, 1.0, 1.0], "t0": 0.0, "T": 1.0, "seed": seed,
        "births": births,
        "growth": {"type": "random", "kind": kind, "K": K.to_json(),
                   "n_pieces": int(r.integers(2, 6))},
    }


def random_scenario(seed: int) -> Scenario:
    return build_scenario(random_scenario_config(seed))


EXAMPLE_CONFIGS = {
    "boolean": {
        "window": [0, 0, 1, 1], "t0": 0.0, "T": 1.0, "seed": 7,
        "births": {"type": "poisson", "intensity": 15.0,
                   "germ": regular_polygon(6, 0.04).to_json()},
        "growth": {"type": "constant", "K": point().to_json()},
    },
    "constant": {
        "window": [0, 0, 1, 1], "t0": 0.0, "T": 1.0, "seed": 1,
        "births": {"type": "explicit", "events": [
            {"t": 0.0, "germ": {"vertices": [[0.3, 0.3]]}},
            {"t": 0.5, "germ": {"vertices": [[0.7, 0.6]]}},
        ]},
        "growth": {"type": "constant", "K": box(-0.2, -0.2, 0.2, 0.2).to_json()},
    },
    "piecewise": {
        "window": [0, 0, 1, 1], "t0": 0.0, "T": 2.0, "seed": 3,
        "births": {"type": "poisson", "intensity": {"breakpoints": [0, 1, 2], "rates": [8, 2]}},
        "growth": {"type": "piecewise", "breakpoints": [0, 1, 2],
                   "pieces": [box(-0.1, -0.1, 0.1, 0.1).to_json(),
                              {"vertices": [[-0.1, 0], [0.1, 0]]}],
                   "K": box(-0.1, -0.1, 0.1, 0.1).to_json()},
    },
    "random": {
        "window": [0, 0, 1, 1], "t0": 0.0, "T": 1.0, "seed": 11,
        "births": {"type": "poisson", "intensity": 8.0},
        "growth": {"type": "random", "kind": "shrinking_anisotropic",
                   "K": box(-0.15, -0.1, 0.15, 0.1).to_json(), "n_pieces": 4},
    },
    "ball": {
        "window": [0, 0, 1, 1], "t0": 0.0, "T": 1.0, "seed": 5,
        "births": {"type": "poisson", "intensity": 6.0},
        "growth": {"type": "ball_approx", "radius_fn": "exp_decay", "n_sides": 12, "r0": 0.15},
    },
}
