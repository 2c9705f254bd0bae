"""Command-line interface.

    birthgrowth simulate   --scenario S.json [--times 0.5,1] [--tol 1e-3] --out DIR
    birthgrowth converge   --scenario S.json [--depth 8] --out DIR
    birthgrowth validate   --scenario S.json [--seeds-count 200] --out DIR
    birthgrowth export-svg --scenario S.json [--times ...] --out DIR

Exit codes: 0 ok, 1 a property check failed, 2 invalid input, 3 refinement
budget exhausted. Errors are reported on stderr as JSON.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import engine, export
from .convex import GeometryError
from .engine import RefinementBudgetError, Trajectory
from .growth import AssumptionError, check_assumptions
from .scenarios import Scenario, ScenarioError, load_scenario

log = logging.getLogger("birthgrowth")

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_SUITE_DEPTH = 6


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    scenario: Path
    command: str
    tol: float = 1e-3
    depth: int = 12
    times: list[float] | None = None
    out: Path = Path("out")
    seed: int | None = None
    seeds_count: int = 200
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if not self.tol > 0:
            raise InputError("--tol must be positive")
        if not 1 <= self.depth <= engine.MAX_DEPTH:
            raise InputError(f"--depth must be in [1, {engine.MAX_DEPTH}]")
        if self.seeds_count < 1:
            raise InputError("--seeds-count must be >= 1")


def _times(cfg: RunConfig, sc: Scenario, default_n: int = 5) -> list[float]:
    if cfg.times is None:
        return [float(t) for t in np.linspace(sc.t0, sc.T, default_n)]
    for t in cfg.times:
        if not sc.t0 <= t <= sc.T:
            raise InputError(f"time {t} outside [{sc.t0}, {sc.T}]")
    return sorted(cfg.times)


def _load(cfg: RunConfig, seed: int | None = None) -> Scenario:
    if not cfg.scenario.is_file():
        raise InputError(f"scenario file not found: {cfg.scenario}")
    return load_scenario(cfg.scenario, cfg.seed if seed is None else seed)


def simulate(cfg: RunConfig) -> int:
    sc = _load(cfg)
    times = _times(cfg, sc)
    snaps, certs = [], []
    for t in times:
        region, cert = engine.theta(sc.births, sc.growth, t, cfg.tol, max_depth=cfg.depth)
        snaps.append((t, region))
        certs.append(cert)
    traj = Trajectory(tuple(snaps))
    cfg.out.mkdir(parents=True, exist_ok=True)
    export.write_json(cfg.out / "trajectory.json", export.trajectory_json(traj, certs))
    export.write_json(cfg.out / "certificates.json", export.certificates_json(certs))
    print(export.dumps({
        "schema_version": export.SCHEMA_VERSION, "command": "simulate",
        "snapshots": len(snaps), "monotone": traj.is_monotone(1e-6),
        "out": str(cfg.out),
    }), end="")
    return EXIT_OK


def converge_rows(sc: Scenario, t: float, depth: int, delta: float):
    p = engine.base_partition(sc.births, sc.growth, t)
    rows = []
    integ = engine._Integrals(sc.growth)
    for j in range(depth + 1):
        lo, hi = engine.sums(sc.births, sc.growth, p, integ)
        rows.append((j, p.mesh, engine.measured_gap(lo, hi, delta),
                     engine.a_priori_bound(p, sc.growth)))
        p = engine.refine(p)
    return rows


def converge(cfg: RunConfig) -> int:
    sc = _load(cfg)
    t = _times(cfg, sc, default_n=2)[-1]
    rows = converge_rows(sc, t, cfg.depth, cfg.tol / 10)
    cfg.out.mkdir(parents=True, exist_ok=True)
    text = export.gap_csv(rows)
    (cfg.out / "converge.csv").write_text(text)
    sys.stdout.write(text)
    ok = all(g <= b + cfg.tol / 10 for _, _, g, b in rows)
    return EXIT_OK if ok else EXIT_FAILED


def _probe_times(sc: Scenario) -> list[float]:
    ts = set(np.linspace(sc.t0, sc.T, 33).tolist())
    bp = [sc.t0, *sc.growth.interior_breakpoints, sc.T]
    ts.update(0.5 * (a + b) for a, b in zip(bp, bp[1:]))
    ts.update(t for t, _ in sc.births.events)
    return sorted(ts)


def validate(cfg: RunConfig) -> int:
    base = _load(cfg)
    seed0 = base.seed
    depth = cfg.extra.get("suite_depth", DEFAULT_SUITE_DEPTH)
    results = []
    ok = True
    for k in range(cfg.seeds_count):
        sc = base if k == 0 else _load(cfg, seed0 + k)
        entry: dict = {"seed": sc.seed}
        report = check_assumptions(sc.growth, _probe_times(sc))
        entry["assumptions"] = {
            lab: report.passed(lab) for lab in ("contains_origin", "convex", "within_bound")
        }
        if not report.ok:
            entry["failures"] = [{"t": t, "assumption": lab} for t, lab in report.failures()]
            entry["ok"] = False
        else:
            try:
                suite = engine.proposition_suite(sc.births, sc.growth, sc.T, depth, tol=cfg.tol)
                entry.update(suite.to_json())
            except AssumptionError as err:
                entry.update({"ok": False, "failures": [{"t": err.t, "assumption": err.label}]})
        ok &= entry["ok"]
        results.append(entry)
        if not entry["ok"]:
            log.warning("seed %d failed", sc.seed)
    names: dict[str, list[bool]] = {}
    for e in results:
        for c in e.get("checks", []):
            names.setdefault(c["name"], []).append(c["passed"])
        for lab, passed in e["assumptions"].items():
            names.setdefault(lab, []).append(passed)
    for name, flags in names.items():
        print(f"{'PASS' if all(flags) else 'FAIL'}  {name}  ({sum(flags)}/{len(flags)} scenarios)")
    cfg.out.mkdir(parents=True, exist_ok=True)
    export.write_json(cfg.out / "validate.json", {
        "schema_version": export.SCHEMA_VERSION, "ok": ok, "depth": depth,
        "scenarios": results,
    })
    return EXIT_OK if ok else EXIT_FAILED


def _germ_marks(sc: Scenario, t: float) -> list[tuple[float, float]]:
    marks = []
    for s, g in sc.births.events:
        if s <= t:
            vs = g.vertices
            marks.append((sum(v[0] for v in vs) / len(vs), sum(v[1] for v in vs) / len(vs)))
    return marks


def export_svg(cfg: RunConfig) -> int:
    sc = _load(cfg)
    times = _times(cfg, sc)
    cfg.out.mkdir(parents=True, exist_ok=True)
    for k, t in enumerate(times):
        region, _ = engine.theta(sc.births, sc.growth, t, cfg.tol, max_depth=cfg.depth)
        svg = export.region_svg(region, sc.window.to_json(), _germ_marks(sc, t), title=f"t={t:g}")
        (cfg.out / f"theta_{k:03d}.svg").write_text(svg)
    print(export.dumps({"schema_version": export.SCHEMA_VERSION, "command": "export-svg",
                        "files": len(times), "out": str(cfg.out)}), end="")
    return EXIT_OK


COMMANDS = {"simulate": simulate, "converge": converge, "validate": validate,
            "export-svg": export_svg}


def _float_list(s: str) -> list[float]:
    try:
        return [float(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {s!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="birthgrowth", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--scenario", type=Path, required=True)
        p.add_argument("--tol", type=float, default=1e-3)
        p.add_argument("--depth", type=int, default=None)
        p.add_argument("--times", type=_float_list, default=None)
        p.add_argument("--out", type=Path, default=Path("out"))
        p.add_argument("--seed", type=int, default=None)
        if name == "validate":
            p.add_argument("--seeds-count", type=int, default=200)
    return parser


def _error(kind: str, message: str, **extra) -> None:
    payload = {"schema_version": export.SCHEMA_VERSION, "error": kind, "message": message}
    payload.update(extra)
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code not in (0, None):
            _error("input", "invalid command line")
            return EXIT_INPUT
        return EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = RunConfig(
        scenario=args.scenario, command=args.command, tol=args.tol,
        depth=args.depth if args.depth is not None else 12, times=args.times, out=args.out,
        seed=args.seed, seeds_count=getattr(args, "seeds_count", 200),
    )
    if args.command == "validate" and args.depth is not None:
        cfg.extra["suite_depth"] = args.depth
    if args.command == "converge" and args.depth is None:
        cfg.depth = 8
    try:
        cfg.validate()
        return COMMANDS[args.command](cfg)
    except AssumptionError as err:
        _error("assumption", str(err), assumption=err.label, t=err.t)
        return EXIT_FAILED
    except RefinementBudgetError as err:
        _error("budget", str(err), certificate=err.certificate.to_json())
        return EXIT_BUDGET
    except (InputError, ScenarioError, GeometryError, ValueError, OSError) as err:
        _error("input", str(err))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
