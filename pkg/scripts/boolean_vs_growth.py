"""Covered area over time: null growth against anisotropic growth, same germs.

    python3 scripts/boolean_vs_growth.py --seed 7 --out out/compare

Writes one SVG per time for each model and prints a table of covered
fractions of the window, estimated on a regular point grid.
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from birthgrowth import engine, export
from birthgrowth.convex import box, point, regular_polygon
from birthgrowth.growth import PiecewiseConstantGrowth
from birthgrowth.scenarios import NucleationSpec, Window, sample_births, sample_growth


@dataclass
class CompareConfig:
    seed: int = 7
    intensity: float = 12.0
    n_times: int = 5
    tol: float = 1e-3
    grid: int = 200
    out: Path = Path("out/compare")


def covered_fraction(region, n: int) -> float:
    xs = (np.arange(n) + 0.5) / n
    return float(np.mean([region.contains_point((x, y)) for x in xs for y in xs]))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f, v in vars(CompareConfig()).items():
        ap.add_argument(f"--{f}", type=type(v), default=v)
    cfg = CompareConfig(**vars(ap.parse_args()))
    win = Window(0, 0, 1, 1)
    births = sample_births(NucleationSpec(cfg.intensity, regular_polygon(8, 0.03)), win, 0.0, 1.0, cfg.seed)
    models = {
        "boolean": PiecewiseConstantGrowth.constant(point(), 0.0, 1.0),
        "anisotropic": sample_growth("shrinking_anisotropic", box(-0.2, -0.08, 0.2, 0.08),
                                     cfg.seed, 0.0, 1.0, 4),
    }
    cfg.out.mkdir(parents=True, exist_ok=True)
    print(f"{'t':>5} " + " ".join(f"{m:>12}" for m in models))
    for k, t in enumerate(np.linspace(0.0, 1.0, cfg.n_times)):
        row = []
        for name, g in models.items():
            region, _ = engine.theta(births, g, float(t), cfg.tol)
            marks = [tuple(np.mean(g0.vertices, axis=0)) for s, g0 in births.events if s <= t]
            (cfg.out / f"{name}_{k:03d}.svg").write_text(
                export.region_svg(region, win.to_json(), marks, title=f"{name} t={t:g}"))
            row.append(covered_fraction(region, cfg.grid))
        print(f"{t:5.2f} " + " ".join(f"{v:12.4f}" for v in row))


if __name__ == "__main__":
    main()
