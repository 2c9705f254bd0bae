"""Compact convex polygons in the plane and their exact calculus.

A :class:`ConvexBody` is stored as a canonical vertex cycle: counter-clockwise,
starting at the lowest (then leftmost) vertex, with duplicate and collinear
vertices removed. Points and segments are legal bodies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

EPS_GEOM = 1e-9

Point = tuple[float, float]


class GeometryError(ValueError):
    """Raised for invalid bodies or infeasible geometric constructions."""


def _eps(eps: float | None) -> float:
    return EPS_GEOM if eps is None else eps


def _cross(o: Point, a: Point, b: Point) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _rotate_canonical(cycle: list[Point]) -> list[Point]:
    k = min(range(len(cycle)), key=lambda i: (cycle[i][1], cycle[i][0]))
    return cycle[k:] + cycle[:k]


def _seam_dist(p: Point, q: Point) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def hull(points: Iterable[Sequence[float]], eps: float | None = None) -> tuple[Point, ...]:
    """Canonical convex hull of a point cloud.

    An exact monotone chain runs first; vertices within ``eps`` of the line
    through their neighbours, and near-duplicates, are then removed from the
    finished cycle, where neighbours are ordered along the boundary.
    """
    eps = _eps(eps)
    pts = sorted({(float(p[0]), float(p[1])) for p in points})
    if not pts:
        raise GeometryError("empty point set")
    if len(pts) == 1:
        return (pts[0],)

    def half(seq: list[Point]) -> list[Point]:
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    cycle = lower[:-1] + upper[:-1]
    i = 0
    while len(cycle) > 1 and i < len(cycle):
        if _seam_dist(cycle[i], cycle[(i + 1) % len(cycle)]) <= eps:
            del cycle[(i + 1) % len(cycle)]
        else:
            i += 1
    # distance to the neighbour segment, not the line: when the neighbours
    # nearly coincide the line is ill-defined and a far extreme vertex must stay
    changed = True
    while changed and len(cycle) >= 3:
        changed = False
        n = len(cycle)
        for i in range(n):
            if _seg_dist(cycle[i], cycle[i - 1], cycle[(i + 1) % n]) <= eps:
                del cycle[i]
                changed = True
                break
    if len(cycle) == 2:
        a, b = cycle
        if (b[1], b[0]) < (a[1], a[0]):
            a, b = b, a
        return (a, b)
    return tuple(_rotate_canonical(cycle))


@dataclass(frozen=True)
class ConvexBody:
    """Compact convex polygon; a single vertex or two vertices are allowed.

    The constructor accepts vertices of a convex polygon in either orientation
    and canonicalizes them. Use :meth:`from_points` for arbitrary point clouds.
    """

    vertices: tuple[Point, ...]
    _checked: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self._checked:
            return
        raw = [(float(x), float(y)) for x, y in self.vertices]
        if not raw:
            raise GeometryError("a convex body needs at least one vertex")
        if not all(math.isfinite(c) for p in raw for c in p):
            raise GeometryError("non-finite vertex coordinate")
        canon = hull(raw)
        body = ConvexBody(canon, _checked=False)
        for p in raw:
            if not _on_boundary(p, body):
                raise GeometryError(f"vertex {p} is not in convex position")
        object.__setattr__(self, "vertices", canon)
        object.__setattr__(self, "_checked", False)

    @classmethod
    def from_points(cls, points: Iterable[Sequence[float]], eps: float | None = None) -> ConvexBody:
        return cls(hull(points, eps), _checked=False)

    @classmethod
    def from_json(cls, data: dict) -> ConvexBody:
        return cls(tuple(tuple(v) for v in data["vertices"]))

    def to_json(self) -> dict:
        return {"vertices": [[x, y] for x, y in self.vertices]}

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.vertices, dtype=float)
        arr.setflags(write=False)
        return arr

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def bbox(self) -> tuple[float, float, float, float]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return (min(xs), min(ys), max(xs), max(ys))

    @cached_property
    def area(self) -> float:
        if self.n < 3:
            return 0.0
        s = 0.0
        vs = self.vertices
        for i in range(self.n):
            x1, y1 = vs[i]
            x2, y2 = vs[(i + 1) % self.n]
            s += x1 * y2 - x2 * y1
        return 0.5 * s

    @cached_property
    def norm(self) -> float:
        """Hausdorff norm: distance from the origin to the farthest point."""
        return max(math.hypot(x, y) for x, y in self.vertices)

    @cached_property
    def diameter(self) -> float:
        vs = self.vertices
        return max(
            (math.hypot(p[0] - q[0], p[1] - q[1]) for p in vs for q in vs), default=0.0
        )

    def edge_normals(self) -> list[Point]:
        """Outward unit normals of the edges (both sides for a segment)."""
        vs = self.vertices
        if self.n == 1:
            return []
        out = []
        m = self.n if self.n > 2 else 2
        for i in range(m):
            a, b = vs[i], vs[(i + 1) % self.n]
            dx, dy = b[0] - a[0], b[1] - a[1]
            ln = math.hypot(dx, dy)
            out.append((dy / ln, -dx / ln))
        return out

    def translate(self, dx: float, dy: float) -> ConvexBody:
        dx, dy = float(dx), float(dy)
        moved = [(x + dx, y + dy) for x, y in self.vertices]
        if len(moved) > 2:
            moved = _rotate_canonical(moved)
        elif len(moved) == 2 and (moved[1][1], moved[1][0]) < (moved[0][1], moved[0][0]):
            moved.reverse()
        return ConvexBody(tuple(moved), _checked=False)


def point(x: float = 0.0, y: float = 0.0) -> ConvexBody:
    return ConvexBody(((float(x), float(y)),), _checked=False)


ORIGIN = point()


def box(xmin: float, ymin: float, xmax: float, ymax: float) -> ConvexBody:
    return ConvexBody.from_points([(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)])


def segment(p: Sequence[float], q: Sequence[float]) -> ConvexBody:
    return ConvexBody.from_points([p, q])


def regular_polygon(n_sides: int, radius: float = 1.0, circumscribe: bool = False) -> ConvexBody:
    """Regular n-gon centred at the origin.

    With ``circumscribe`` the polygon has apothem ``radius`` (it contains the
    disk of that radius); otherwise its vertices lie on the circle.
    """
    if n_sides < 3:
        raise GeometryError("a regular polygon needs at least 3 sides")
    r = radius / math.cos(math.pi / n_sides) if circumscribe else radius
    return ConvexBody.from_points(
        [(r * math.cos(2 * math.pi * k / n_sides), r * math.sin(2 * math.pi * k / n_sides))
         for k in range(n_sides)]
    )


def direction(theta: float) -> Point:
    return (math.cos(theta), math.sin(theta))


def uniform_directions(n: int) -> list[Point]:
    return [direction(2 * math.pi * k / n) for k in range(n)]


def _on_boundary(p: Point, body: ConvexBody, eps: float | None = None) -> bool:
    eps = _eps(eps)
    if body.n < 3:
        return point_distance(p, body) <= eps
    vs = body.vertices
    depth = math.inf
    for i in range(body.n):
        a, b = vs[i], vs[(i + 1) % body.n]
        ln = math.hypot(b[0] - a[0], b[1] - a[1])
        depth = min(depth, _cross(a, b, p) / ln)
    return abs(depth) <= eps


def support(body: ConvexBody, u: Sequence[float]) -> float:
    """Support function value max <v, u> over the body."""
    ux, uy = u
    return max(x * ux + y * uy for x, y in body.vertices)


def support_many(body: ConvexBody, dirs: np.ndarray) -> np.ndarray:
    """Support values for an (n, 2) array of directions."""
    return (np.asarray(dirs) @ body.array.T).max(axis=1)


def _edge_vectors(body: ConvexBody) -> tuple[Point, list[tuple[float, Point]]]:
    """Start vertex and edges (angle, vector), starting at the smallest angle."""
    vs = body.vertices
    n = body.n
    if n == 1:
        return vs[0], []
    m = n if n > 2 else 2
    out = []
    for i in range(m):
        a, b = vs[i], vs[(i + 1) % n]
        dx, dy = b[0] - a[0], b[1] - a[1]
        ang = math.atan2(dy, dx)
        if ang < 0:
            ang += 2 * math.pi
        out.append((ang, (dx, dy)))
    k = min(range(m), key=lambda i: out[i][0])
    return vs[k], out[k:] + out[:k]


def minkowski_sum(a: ConvexBody, b: ConvexBody) -> ConvexBody:
    """Exact Minkowski sum by merging the edge sequences in angular order."""
    if b.n == 1:
        return a.translate(*b.vertices[0])
    if a.n == 1:
        return b.translate(*a.vertices[0])
    sa, ea = _edge_vectors(a)
    sb, eb = _edge_vectors(b)
    edges = sorted(ea + eb, key=lambda e: e[0])
    x, y = sa[0] + sb[0], sa[1] + sb[1]
    pts = [(x, y)]
    for _, (dx, dy) in edges[:-1]:
        x += dx
        y += dy
        pts.append((x, y))
    return ConvexBody.from_points(pts)


def scale(a: ConvexBody, alpha: float) -> ConvexBody:
    """Scalar multiple alpha*A for alpha >= 0 (0*A is the origin)."""
    if alpha < 0:
        raise GeometryError(f"scalar multiple requires alpha >= 0, got {alpha}")
    if alpha == 0:
        return ORIGIN
    if alpha == 1:
        return a
    return ConvexBody.from_points([(alpha * x, alpha * y) for x, y in a.vertices])


def _seg_dist(p: Point, a: Point, b: Point) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    L2 = dx * dx + dy * dy
    if L2 == 0.0:
        return math.hypot(p[0] - a[0], p[1] - a[1])
    t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / L2
    t = 0.0 if t < 0.0 else 1.0 if t > 1.0 else t
    return math.hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy)


def point_distance(p: Sequence[float], a: ConvexBody) -> float:
    """Euclidean distance from ``p`` to the body (0 inside)."""
    p = (float(p[0]), float(p[1]))
    vs = a.vertices
    n = a.n
    if n == 1:
        return math.hypot(p[0] - vs[0][0], p[1] - vs[0][1])
    if n == 2:
        return _seg_dist(p, vs[0], vs[1])
    inside = True
    best = math.inf
    for i in range(n):
        u, v = vs[i], vs[(i + 1) % n]
        if _cross(u, v, p) < 0:
            inside = False
        best = min(best, _seg_dist(p, u, v))
    return 0.0 if inside else best


def distances(points: np.ndarray, a: ConvexBody) -> np.ndarray:
    """Vectorized :func:`point_distance` for a (k, 2) array of points."""
    P = np.asarray(points, dtype=float)
    V = a.array
    if a.n == 1:
        return np.hypot(P[:, 0] - V[0, 0], P[:, 1] - V[0, 1])
    A = V if a.n > 2 else V[:1]
    B = np.roll(V, -1, axis=0) if a.n > 2 else V[1:]
    E = B - A
    L2 = (E * E).sum(axis=1)
    D = P[:, None, :] - A[None, :, :]
    t = np.clip((D * E[None]).sum(axis=2) / L2[None], 0.0, 1.0)
    R = D - t[..., None] * E[None]
    dist = np.sqrt((R * R).sum(axis=2)).min(axis=1)
    if a.n > 2:
        cross = E[None, :, 0] * D[..., 1] - E[None, :, 1] * D[..., 0]
        dist = np.where((cross >= 0).all(axis=1), 0.0, dist)
    return dist


def hausdorff(a: ConvexBody, b: ConvexBody) -> float:
    """Exact Hausdorff distance; the sup is attained at a vertex by convexity."""
    d1 = max(point_distance(v, b) for v in a.vertices)
    d2 = max(point_distance(w, a) for w in b.vertices)
    return max(d1, d2)


def directed_hausdorff_convex(a: ConvexBody, b: ConvexBody) -> float:
    """sup over a of dist(., b)."""
    return max(point_distance(v, b) for v in a.vertices)


def hausdorff_dual(a: ConvexBody, b: ConvexBody, grid: Sequence[Sequence[float]]) -> float:
    """max over the grid of |s(a,u) - s(b,u)|."""
    if len(grid) == 0:
        raise GeometryError("empty direction grid")
    U = np.asarray(grid, dtype=float).reshape(-1, 2)
    return float(np.abs(support_many(a, U) - support_many(b, U)).max())


def dual_grid(a: ConvexBody, b: ConvexBody) -> list[Point]:
    """Direction grid on which :func:`hausdorff_dual` is exact.

    Contains the edge normals of both bodies and, on every arc between
    consecutive normals, the maximizers of the linear difference of the two
    support functions.
    """
    angs = set()
    for u in a.edge_normals() + b.edge_normals():
        angs.add(math.atan2(u[1], u[0]) % (2 * math.pi))
    angs.update({0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi})
    breaks = sorted(angs)
    extra = []
    for i, lo in enumerate(breaks):
        hi = breaks[i + 1] if i + 1 < len(breaks) else breaks[0] + 2 * math.pi
        mid = direction(0.5 * (lo + hi))
        va = max(a.vertices, key=lambda v: v[0] * mid[0] + v[1] * mid[1])
        vb = max(b.vertices, key=lambda v: v[0] * mid[0] + v[1] * mid[1])
        dx, dy = va[0] - vb[0], va[1] - vb[1]
        if dx == 0.0 and dy == 0.0:
            continue
        for th in (math.atan2(dy, dx), math.atan2(-dy, -dx)):
            th %= 2 * math.pi
            if lo <= th <= hi or lo <= th + 2 * math.pi <= hi:
                extra.append(th)
    return [direction(t) for t in breaks + extra]


def contains_convex(outer: ConvexBody, inner: ConvexBody, eps: float | None = None) -> bool:
    """True iff every vertex of ``inner`` lies in ``outer`` up to ``eps``."""
    eps = _eps(eps)
    ob, ib = outer.bbox, inner.bbox
    if (ib[0] < ob[0] - eps or ib[1] < ob[1] - eps or ib[2] > ob[2] + eps
            or ib[3] > ob[3] + eps):
        return False
    if outer.n < 3:
        return all(point_distance(v, outer) <= eps for v in inner.vertices)
    vs = outer.vertices
    n = outer.n
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        ln = math.hypot(b[0] - a[0], b[1] - a[1])
        for p in inner.vertices:
            if _cross(a, b, p) < -eps * ln:
                return False
    return True


def _clip(poly: list[tuple[Point, int]], u: Point, h: float, label: int,
          eps: float) -> list[tuple[Point, int]]:
    """Clip a labelled convex cycle by {x : <x,u> <= h}.

    Each entry is (vertex, label of the edge leaving that vertex).
    """
    out: list[tuple[Point, int]] = []
    n = len(poly)
    vals = [p[0] * u[0] + p[1] * u[1] - h for p, _ in poly]
    for i in range(n):
        (p, lab) = poly[i]
        (q, _) = poly[(i + 1) % n]
        fp, fq = vals[i], vals[(i + 1) % n]
        if fp <= eps:
            out.append((p, lab))
            if fq > eps and fp < -eps:
                t = fp / (fp - fq)
                out.append(((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])), label))
            elif fq > eps:
                # p sits on the cutting line; the new boundary leaves from p
                out[-1] = (p, label)
        elif fq <= eps:
            t = fp / (fp - fq)
            if fq < -eps:
                out.append(((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])), lab))
    return out


def _line_meet(u1: Point, h1: float, u2: Point, h2: float) -> Point | None:
    det = u1[0] * u2[1] - u1[1] * u2[0]
    if abs(det) < 1e-12:
        return None
    return ((h1 * u2[1] - h2 * u1[1]) / det, (u1[0] * h2 - u2[0] * h1) / det)


def from_support_samples(samples: Sequence[tuple[Sequence[float], float]],
                         eps: float | None = None) -> ConvexBody:
    """Intersection of the halfplanes {x : <x,u> <= h(u)}.

    Raises :class:`GeometryError` when the system is unbounded (directions do
    not surround the origin) or empty.
    """
    eps = _eps(eps)
    if len(samples) < 3:
        raise GeometryError("at least 3 directions are needed for a bounded intersection")
    dirs = []
    for u, h in samples:
        ln = math.hypot(u[0], u[1])
        dirs.append(((u[0] / ln, u[1] / ln), float(h)))
    angs = sorted(math.atan2(u[1], u[0]) % (2 * math.pi) for u, _ in dirs)
    gaps = [angs[i + 1] - angs[i] for i in range(len(angs) - 1)]
    gaps.append(angs[0] + 2 * math.pi - angs[-1])
    if max(gaps) >= math.pi - 1e-12:
        raise GeometryError("support samples do not bound the intersection")
    # every feasible x has |x| <= max h / cos(max_gap / 2)
    M = 2.0 * (max(abs(h) for _, h in dirs) + 1.0) / math.cos(0.5 * max(gaps))
    poly = [((-M, -M), -1), ((M, -M), -1), ((M, M), -1), ((-M, M), -1)]
    for k, (u, h) in enumerate(dirs):
        poly = _clip(poly, u, h, k, eps)
        if not poly:
            raise GeometryError("empty halfplane intersection")
    # recompute vertices exactly as meets of their two supporting lines
    pts = []
    n = len(poly)
    for i in range(n):
        p, out_lab = poly[i]
        in_lab = poly[i - 1][1]
        q = None
        if out_lab >= 0 and in_lab >= 0 and out_lab != in_lab:
            (u1, h1), (u2, h2) = dirs[in_lab], dirs[out_lab]
            q = _line_meet(u1, h1, u2, h2)
        if q is None or math.hypot(q[0] - p[0], q[1] - p[1]) > 1e-6 * (1 + M):
            q = p
        pts.append(q)
    for u, h in dirs:
        if min(p[0] * u[0] + p[1] * u[1] for p in pts) > h + eps:
            raise GeometryError("empty halfplane intersection")
    return ConvexBody.from_points(pts, eps)


def intersection(a: ConvexBody, b: ConvexBody, eps: float | None = None) -> ConvexBody:
    """Intersection of two convex bodies; ``b`` must have nonempty interior."""
    eps = _eps(eps)
    if b.n < 3:
        raise GeometryError("intersection requires a full-dimensional clipping body")
    poly = [(p, -1) for p in a.vertices]
    vs = b.vertices
    for i, u in enumerate(b.edge_normals()):
        h = u[0] * vs[i][0] + u[1] * vs[i][1]
        if len(poly) == 1:
            p = poly[0][0]
            if p[0] * u[0] + p[1] * u[1] > h + eps:
                raise GeometryError("empty intersection")
            continue
        poly = _clip(poly, u, h, i, eps)
        if not poly:
            raise GeometryError("empty intersection")
    return ConvexBody.from_points([p for p, _ in poly], eps)
