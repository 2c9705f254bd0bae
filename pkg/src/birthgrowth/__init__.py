"""Set-valued birth-and-growth processes in the plane.

Convex-body calculus (Minkowski sums, support functions, Hausdorff distance,
Aumann integrals of growth paths) and the lower/upper partition sums whose
common limit defines the simulated process.
"""
from .convex import (
    EPS_GEOM,
    ConvexBody,
    GeometryError,
    box,
    contains_convex,
    from_support_samples,
    hausdorff,
    hausdorff_dual,
    minkowski_sum,
    point,
    point_distance,
    regular_polygon,
    scale,
    segment,
    support,
)
from .engine import (
    BirthSchedule,
    Partition,
    Trajectory,
    discrete_step,
    lower_sum,
    proposition_suite,
    refine,
    run_discrete,
    theta,
    upper_sum,
)
from .growth import (
    AssumptionError,
    PiecewiseConstantGrowth,
    SampledGrowth,
    aumann_integral,
    check_assumptions,
    integral_monotone_check,
)
from .region import Region, dilate, directed_hausdorff, region_hausdorff, region_subset, union

__version__ = "0.1.0"
