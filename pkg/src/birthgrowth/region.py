"""Finite unions of convex bodies.

Regions carry the lower and upper sums and the simulated process. Coverage
comparisons between unions are certified: :func:`directed_hausdorff` returns a
value ``v`` with ``v <= true <= v + delta`` using a branch-and-bound over
convex cells. On a convex cell the distance to any single convex body is
maximized at a vertex, which gives an exact upper bound per cell.
"""
from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import convex
from .convex import ConvexBody, GeometryError, contains_convex, distances, minkowski_sum

MAX_CELLS = 200_000


class BudgetExceeded(RuntimeError):
    """Branch-and-bound ran out of cells before reaching the requested accuracy."""


def _sort_key(c: ConvexBody):
    return c.vertices


def _prune(components: Iterable[ConvexBody], eps: float | None = None) -> tuple[ConvexBody, ...]:
    # larger bodies first, so containers are kept before what they contain
    cands = sorted(set(components), key=lambda c: (-c.area, -c.diameter, c.vertices))
    kept: list[ConvexBody] = []
    for c in cands:
        if not any(contains_convex(k, c, eps) for k in kept):
            kept.append(c)
    return tuple(sorted(kept, key=_sort_key))


@dataclass(frozen=True)
class Region:
    """Union of convex components with pairwise-dominance pruning.

    The empty region (no components) stands for the process before the
    first birth.
    """

    components: tuple[ConvexBody, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", _prune(self.components))

    @classmethod
    def empty(cls) -> Region:
        return cls(())

    @property
    def is_empty(self) -> bool:
        return not self.components

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def contains_point(self, p: Sequence[float], eps: float | None = None) -> bool:
        eps = convex._eps(eps)
        return any(convex.point_distance(p, c) <= eps for c in self.components)

    @property
    def bbox(self) -> tuple[float, float, float, float] | None:
        if self.is_empty:
            return None
        bs = np.array([c.bbox for c in self.components])
        return (bs[:, 0].min(), bs[:, 1].min(), bs[:, 2].max(), bs[:, 3].max())

    @property
    def diameter(self) -> float:
        bb = self.bbox
        return 0.0 if bb is None else math.hypot(bb[2] - bb[0], bb[3] - bb[1])

    def to_json(self) -> dict:
        return {"components": [c.to_json() for c in self.components]}

    @classmethod
    def from_json(cls, data: dict) -> Region:
        return cls(tuple(ConvexBody.from_json(c) for c in data["components"]))


def union(a: Region, b: Region) -> Region:
    return Region(a.components + b.components)


def dilate(r: Region, g: ConvexBody) -> Region:
    """Component-wise Minkowski sum with a convex body."""
    return Region(tuple(minkowski_sum(c, g) for c in r.components))


def _bbox_dist(a: tuple, b: np.ndarray) -> np.ndarray:
    dx = np.maximum(0.0, np.maximum(b[:, 0] - a[2], a[0] - b[:, 2]))
    dy = np.maximum(0.0, np.maximum(b[:, 1] - a[3], a[1] - b[:, 3]))
    return np.hypot(dx, dy)


def _split(cell: np.ndarray, ax: int) -> list[np.ndarray]:
    """Cut a convex cell at the midline of its extent along axis ``ax``."""
    lo, hi = cell.min(axis=0), cell.max(axis=0)
    m = 0.5 * (lo[ax] + hi[ax])
    out = []
    for sign in (1.0, -1.0):
        pts = []
        n = len(cell)
        for i in range(n):
            p, q = cell[i], cell[(i + 1) % n]
            fp, fq = sign * (p[ax] - m), sign * (q[ax] - m)
            if fp <= 0:
                pts.append(p)
            if (fp < 0 < fq) or (fq < 0 < fp):
                t = fp / (fp - fq)
                pts.append(p + t * (q - p))
        if pts:
            out.append(np.array(pts))
    return out


def directed_hausdorff(a: Region, b: Region, delta: float,
                       max_cells: int = MAX_CELLS) -> float:
    """Certified sup over ``a`` of the distance to ``b``.

    Returns ``v`` with ``v <= true <= v + delta``.
    """
    if not delta > 0:
        raise ValueError(f"sample spacing must be positive, got {delta}")
    if a.is_empty:
        return 0.0
    if b.is_empty:
        return math.inf
    bcomps = b.components
    bboxes = np.array([c.bbox for c in bcomps])
    best = 0.0
    heap: list = []
    counter = itertools.count()
    cells_used = 0

    def evaluate(cell: np.ndarray, cand: np.ndarray):
        D = np.stack([distances(cell, bcomps[f]) for f in cand], axis=1)
        lb = float(D.min(axis=1).max())
        ub_per = D.max(axis=0)
        ub = float(ub_per.min())
        return lb, ub

    for comp in a.components:
        # fast path: component inside a single component of b
        bd = _bbox_dist(comp.bbox, bboxes)
        order = np.argsort(bd, kind="stable")
        ub = math.inf
        for f in order:
            if bd[f] > ub:
                break
            ub = min(ub, convex.directed_hausdorff_convex(comp, bcomps[f]))
            if ub == 0.0:
                break
        if ub == 0.0:
            continue
        # slack guards against bbox rounding dropping the minimizer itself
        cand = np.array([f for f in order if bd[f] <= ub * (1 + 1e-12) + 1e-12], dtype=int)
        cell = comp.array
        lb, ub = evaluate(cell, cand)
        best = max(best, lb)
        if ub > best + delta:
            heapq.heappush(heap, (-ub, next(counter), cell, cand))
        while heap and -heap[0][0] > best + delta:
            neg_ub, _, cell, cand = heapq.heappop(heap)
            ext = np.ptp(cell, axis=0)
            longer = 0 if ext[0] >= ext[1] else 1
            # Split along the axis whose children have the smaller upper bound.
            # Maxima on ridges of the distance function need thin cells, which
            # longest-side bisection alone never produces.
            axes = (longer,) if min(ext) <= 1e-6 * max(ext) else (longer, 1 - longer)
            best_kids = None
            for ax in axes:
                kids = []
                for child in _split(cell, ax):
                    cells_used += 1
                    if cells_used > max_cells:
                        raise BudgetExceeded(
                            f"directed_hausdorff exceeded {max_cells} cells "
                            f"(best={best}, bound={-neg_ub})"
                        )
                    lo, hi = child.min(axis=0), child.max(axis=0)
                    cb = _bbox_dist((lo[0], lo[1], hi[0], hi[1]), bboxes[cand])
                    sub = cand[cb <= -neg_ub]
                    if len(sub) == 0:
                        sub = cand
                    clb, cub = evaluate(child, sub)
                    # centroid sample tightens the lower bound only
                    cen = child.mean(axis=0, keepdims=True)
                    clb = max(clb, float(min(distances(cen, bcomps[f])[0] for f in sub)))
                    best = max(best, clb)
                    kids.append((cub, child, sub))
                score = (max(k[0] for k in kids), sum(k[0] for k in kids))
                if best_kids is None or score < best_kids[0]:
                    best_kids = (score, kids)
            for cub, child, sub in best_kids[1]:
                if cub > best + delta:
                    heapq.heappush(heap, (-cub, next(counter), child, sub))
    return best


def region_hausdorff(a: Region, b: Region, delta: float) -> float:
    """Two-sided Hausdorff distance between regions, certified to ``delta``."""
    return max(directed_hausdorff(a, b, delta), directed_hausdorff(b, a, delta))


def _fast_subset(a: Region, b: Region, eps: float) -> bool:
    return all(any(contains_convex(c, x, eps) for c in b.components) for x in a.components)


def region_subset(a: Region, b: Region, tol: float) -> bool:
    """``a`` is inside ``b`` up to ``tol``.

    Fast path: each component of ``a`` sits in one component of ``b``.
    Otherwise the certified directed distance decides.
    """
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    if a.is_empty:
        return True
    if _fast_subset(a, b, max(tol, convex.EPS_GEOM)):
        return True
    if tol == 0:
        return False
    return directed_hausdorff(a, b, tol / 2) <= tol


__all__ = [
    "BudgetExceeded", "GeometryError", "Region", "union", "dilate", "directed_hausdorff",
    "region_hausdorff", "region_subset",
]
