"""Run the full property suite over many seeded random scenarios.

    python3 scripts/property_sweep.py --count 200 --depth 6

Prints per-check pass counts and the worst measured quantities; exits 1 if
any scenario fails a check.
"""
from __future__ import annotations

import argparse
import sys
import time
from collections import defaultdict
from dataclasses import dataclass

from birthgrowth import engine
from birthgrowth.scenarios import random_scenario


@dataclass
class SweepConfig:
    start: int = 0
    count: int = 200
    depth: int = 6
    tol: float = 1e-3


def sweep(cfg: SweepConfig) -> dict[str, list[tuple[int, bool, dict]]]:
    results: dict[str, list] = defaultdict(list)
    for seed in range(cfg.start, cfg.start + cfg.count):
        sc = random_scenario(seed)
        rep = engine.proposition_suite(sc.births, sc.growth, sc.T, cfg.depth, tol=cfg.tol)
        for c in rep.checks:
            results[c.name].append((seed, c.passed, c.measured))
    return results


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f, v in vars(SweepConfig()).items():
        ap.add_argument(f"--{f}", type=type(v), default=v)
    cfg = SweepConfig(**vars(ap.parse_args()))
    t = time.perf_counter()
    results = sweep(cfg)
    bad = False
    for name, rows in results.items():
        fails = [s for s, ok, _ in rows if not ok]
        bad |= bool(fails)
        print(f"{'PASS' if not fails else 'FAIL'}  {name:24s} {len(rows) - len(fails)}/{len(rows)}"
              + (f"  failing seeds {fails[:10]}" if fails else ""))
    print(f"elapsed {time.perf_counter() - t:.1f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
