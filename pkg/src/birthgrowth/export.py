"""Deterministic writers: trajectory/certificate JSON, gap CSV, SVG figures."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Sequence

from .convex import ConvexBody
from .engine import Certificate, Trajectory
from .region import Region

SCHEMA_VERSION = 1


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_json(path: Path, obj) -> None:
    Path(path).write_text(dumps(obj))


def certificates_json(certs: Sequence[Certificate]) -> dict:
    return {"schema_version": SCHEMA_VERSION, "certificates": [c.to_json() for c in certs]}


def trajectory_json(traj: Trajectory, certs: Sequence[Certificate] | None = None) -> dict:
    return traj.to_json(certs)


def gap_csv(rows: Sequence[tuple[int, float, float, float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["depth", "mesh", "gap", "bound"])
    for depth, mesh, gap, bound in rows:
        w.writerow([depth, repr(float(mesh)), repr(float(gap)), repr(float(bound))])
    return buf.getvalue()


def _f(x: float) -> str:
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _path(body: ConvexBody) -> str:
    pts = body.vertices
    d = "M " + " L ".join(f"{_f(x)} {_f(y)}" for x, y in pts)
    if len(pts) > 2:
        d += " Z"
    return d


def region_svg(region: Region, window: Sequence[float], germs: Sequence[tuple[float, float]] = (),
               title: str = "", size: int = 480) -> str:
    """SVG 1.1 document: window frame, one filled path per component, germ markers."""
    xmin, ymin, xmax, ymax = window
    w, h = xmax - xmin, ymax - ymin
    pad = 0.05 * max(w, h)
    vb = (xmin - pad, -(ymax + pad), w + 2 * pad, h + 2 * pad)
    stroke = _f(0.003 * max(w, h))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{int(round(size * vb[3] / vb[2]))}" '
        f'viewBox="{" ".join(_f(v) for v in vb)}">',
    ]
    if title:
        out.append(f"<title>{title}</title>")
    out.append('<g transform="scale(1,-1)">')
    out.append(
        f'<rect x="{_f(xmin)}" y="{_f(ymin)}" width="{_f(w)}" height="{_f(h)}" '
        f'fill="none" stroke="black" stroke-width="{stroke}"/>'
    )
    for c in region.components:
        out.append(
            f'<path d="{_path(c)}" fill="#4a90d9" fill-opacity="0.6" '
            f'stroke="#1f4e79" stroke-width="{stroke}"/>'
        )
    r = _f(0.006 * max(w, h))
    for x, y in germs:
        out.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{r}" fill="#c0392b"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
