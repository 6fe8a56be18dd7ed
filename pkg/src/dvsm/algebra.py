"""Spatio-temporal relation algebra over intervals, boxes and trajectories.

Temporal relations follow Allen's 13-relation interval algebra, exact on
closed-open integer-millisecond intervals. Topological relations classify
axis-aligned boxes under the 9-intersection model. Directional relations
compare centroids in image coordinates (y grows downward, so "above" means
smaller cy). Motion relations classify the trend of inter-centroid
distance over the shared time span.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from enum import Enum

from .errors import NoOverlapError, OutOfSpanError
from .model import Box, Interval, Trajectory


class AllenRelation(str, Enum):
    BEFORE = "before"
    MEETS = "meets"
    OVERLAPS = "overlaps"
    STARTS = "starts"
    DURING = "during"
    FINISHES = "finishes"
    EQUALS = "equals"
    AFTER = "after"
    MET_BY = "met_by"
    OVERLAPPED_BY = "overlapped_by"
    STARTED_BY = "started_by"
    CONTAINS = "contains"
    FINISHED_BY = "finished_by"


ALLEN_INVERSE = {
    AllenRelation.BEFORE: AllenRelation.AFTER,
    AllenRelation.MEETS: AllenRelation.MET_BY,
    AllenRelation.OVERLAPS: AllenRelation.OVERLAPPED_BY,
    AllenRelation.STARTS: AllenRelation.STARTED_BY,
    AllenRelation.DURING: AllenRelation.CONTAINS,
    AllenRelation.FINISHES: AllenRelation.FINISHED_BY,
    AllenRelation.EQUALS: AllenRelation.EQUALS,
    AllenRelation.AFTER: AllenRelation.BEFORE,
    AllenRelation.MET_BY: AllenRelation.MEETS,
    AllenRelation.OVERLAPPED_BY: AllenRelation.OVERLAPS,
    AllenRelation.STARTED_BY: AllenRelation.STARTS,
    AllenRelation.CONTAINS: AllenRelation.DURING,
    AllenRelation.FINISHED_BY: AllenRelation.FINISHES,
}


def allen_relation(i1: Interval, i2: Interval) -> AllenRelation:
    """The unique Allen relation holding from i1 to i2."""
    s1, e1, s2, e2 = i1.start, i1.end, i2.start, i2.end
    if e1 < s2:
        return AllenRelation.BEFORE
    if e1 == s2:
        return AllenRelation.MEETS
    if e2 < s1:
        return AllenRelation.AFTER
    if e2 == s1:
        return AllenRelation.MET_BY
    if s1 == s2 and e1 == e2:
        return AllenRelation.EQUALS
    if s1 == s2:
        return AllenRelation.STARTS if e1 < e2 else AllenRelation.STARTED_BY
    if e1 == e2:
        return AllenRelation.FINISHES if s1 > s2 else AllenRelation.FINISHED_BY
    if s2 < s1 and e1 < e2:
        return AllenRelation.DURING
    if s1 < s2 and e2 < e1:
        return AllenRelation.CONTAINS
    return AllenRelation.OVERLAPS if s1 < s2 else AllenRelation.OVERLAPPED_BY


#: Relations under which two intervals share at least a boundary instant.
ALLEN_DISJOINT = frozenset({AllenRelation.BEFORE, AllenRelation.AFTER})


# --------------------------------------------------------------------------
# Topological relations (9-intersection over axis-aligned boxes)
# --------------------------------------------------------------------------


class TopoRelation(str, Enum):
    DISJOINT = "disjoint"
    MEET = "meet"
    OVERLAP = "overlap"
    EQUAL = "equal"
    CONTAINS = "contains"
    INSIDE = "inside"
    COVERS = "covers"
    COVERED_BY = "covered_by"


TOPO_INVERSE = {
    TopoRelation.DISJOINT: TopoRelation.DISJOINT,
    TopoRelation.MEET: TopoRelation.MEET,
    TopoRelation.OVERLAP: TopoRelation.OVERLAP,
    TopoRelation.EQUAL: TopoRelation.EQUAL,
    TopoRelation.CONTAINS: TopoRelation.INSIDE,
    TopoRelation.INSIDE: TopoRelation.CONTAINS,
    TopoRelation.COVERS: TopoRelation.COVERED_BY,
    TopoRelation.COVERED_BY: TopoRelation.COVERS,
}


def topological_relation(a: Box, b: Box) -> TopoRelation:
    """Classify two closed boxes per the 9-intersection model."""
    if a == b:
        return TopoRelation.EQUAL
    # closed sets never touch
    if a.xmax < b.xmin or b.xmax < a.xmin or a.ymax < b.ymin or b.ymax < a.ymin:
        return TopoRelation.DISJOINT
    # interiors intersect iff the open overlap has positive area
    interiors = (
        min(a.xmax, b.xmax) > max(a.xmin, b.xmin)
        and min(a.ymax, b.ymax) > max(a.ymin, b.ymin)
    )
    if not interiors:
        return TopoRelation.MEET
    a_in_b = (
        b.xmin <= a.xmin and a.xmax <= b.xmax
        and b.ymin <= a.ymin and a.ymax <= b.ymax
    )
    b_in_a = (
        a.xmin <= b.xmin and b.xmax <= a.xmax
        and a.ymin <= b.ymin and b.ymax <= a.ymax
    )
    if a_in_b:
        strict = (
            b.xmin < a.xmin and a.xmax < b.xmax
            and b.ymin < a.ymin and a.ymax < b.ymax
        )
        return TopoRelation.INSIDE if strict else TopoRelation.COVERED_BY
    if b_in_a:
        strict = (
            a.xmin < b.xmin and b.xmax < a.xmax
            and a.ymin < b.ymin and b.ymax < a.ymax
        )
        return TopoRelation.CONTAINS if strict else TopoRelation.COVERS
    return TopoRelation.OVERLAP


# --------------------------------------------------------------------------
# Directional relations (9-sector centroid comparison)
# --------------------------------------------------------------------------


class DirRelation(str, Enum):
    LEFT_OF = "left_of"
    RIGHT_OF = "right_of"
    ABOVE = "above"
    BELOW = "below"
    UPPER_LEFT = "upper_left"
    UPPER_RIGHT = "upper_right"
    LOWER_LEFT = "lower_left"
    LOWER_RIGHT = "lower_right"
    SAME_POSITION = "same_position"


DIR_INVERSE = {
    DirRelation.LEFT_OF: DirRelation.RIGHT_OF,
    DirRelation.RIGHT_OF: DirRelation.LEFT_OF,
    DirRelation.ABOVE: DirRelation.BELOW,
    DirRelation.BELOW: DirRelation.ABOVE,
    DirRelation.UPPER_LEFT: DirRelation.LOWER_RIGHT,
    DirRelation.UPPER_RIGHT: DirRelation.LOWER_LEFT,
    DirRelation.LOWER_LEFT: DirRelation.UPPER_RIGHT,
    DirRelation.LOWER_RIGHT: DirRelation.UPPER_LEFT,
    DirRelation.SAME_POSITION: DirRelation.SAME_POSITION,
}


def directional_relation(
    p: tuple[float, float], q: tuple[float, float], eps_d: float = 0.01
) -> DirRelation:
    """Where p sits relative to q: p is left_of q when p.cx + eps_d < q.cx."""
    px, py = p
    qx, qy = q
    left = px + eps_d < qx
    right = qx + eps_d < px
    upper = py + eps_d < qy  # image y grows downward
    lower = qy + eps_d < py
    if left and upper:
        return DirRelation.UPPER_LEFT
    if left and lower:
        return DirRelation.LOWER_LEFT
    if right and upper:
        return DirRelation.UPPER_RIGHT
    if right and lower:
        return DirRelation.LOWER_RIGHT
    if left:
        return DirRelation.LEFT_OF
    if right:
        return DirRelation.RIGHT_OF
    if upper:
        return DirRelation.ABOVE
    if lower:
        return DirRelation.BELOW
    return DirRelation.SAME_POSITION


# --------------------------------------------------------------------------
# Trajectory interpolation, distance and motion classification
# --------------------------------------------------------------------------


class MotionRelation(str, Enum):
    APPROACH = "approach"
    DIVERGE = "diverge"
    STATIONARY = "stationary"


@dataclass(frozen=True)
class MotionParams:
    """Thresholds for the motion and directional classifiers."""

    eps_slope: float = 0.01  # normalized units per second
    min_samples: int = 2
    eps_d: float = 0.01

    def __post_init__(self):
        if self.eps_slope <= 0:
            raise ValueError("eps_slope must be positive")
        if self.eps_d < 0:
            raise ValueError("eps_d must be non-negative")
        if self.min_samples < 2:
            raise ValueError("min_samples must be at least 2")


def interpolate(traj: Trajectory, t: int) -> tuple[float, float]:
    """Centroid at time t, linearly interpolated between bracketing samples."""
    lo, hi = traj.span
    if not lo <= t <= hi:
        raise OutOfSpanError(f"time {t} outside trajectory span [{lo}, {hi}]")
    times = traj.times
    i = bisect_left(times, t)
    p = traj.points[i]
    if p.t == t:
        return (p.cx, p.cy)
    prev = traj.points[i - 1]
    frac = (t - prev.t) / (p.t - prev.t)
    return (
        prev.cx + frac * (p.cx - prev.cx),
        prev.cy + frac * (p.cy - prev.cy),
    )


def distance_at(t1: Trajectory, t2: Trajectory, t: int) -> float:
    """Euclidean distance between the two interpolated centroids at t."""
    x1, y1 = interpolate(t1, t)
    x2, y2 = interpolate(t2, t)
    return ((x1 - x2) ** 2 + (y1 - y2) ** 2) ** 0.5


def shared_sample_times(t1: Trajectory, t2: Trajectory) -> list[int]:
    """Union of both sample-time sets restricted to the span overlap."""
    lo = max(t1.span[0], t2.span[0])
    hi = min(t1.span[1], t2.span[1])
    if lo > hi:
        return []
    return sorted(t for t in set(t1.times) | set(t2.times) if lo <= t <= hi)


def motion_relation(
    t1: Trajectory, t2: Trajectory, params: MotionParams = MotionParams()
) -> MotionRelation:
    """Classify relative motion by the least-squares slope of distance vs time."""
    times = shared_sample_times(t1, t2)
    if len(times) < params.min_samples:
        raise NoOverlapError(
            f"trajectories share {len(times)} sample(s); "
            f"need {params.min_samples}"
        )
    # centered least squares keeps the slope exactly invariant under time shift
    secs = [t / 1000.0 for t in times]
    dists = [distance_at(t1, t2, t) for t in times]
    mean_t = sum(secs) / len(secs)
    mean_d = sum(dists) / len(dists)
    num = sum((s - mean_t) * (d - mean_d) for s, d in zip(secs, dists))
    den = sum((s - mean_t) ** 2 for s in secs)
    slope = num / den
    if slope < -params.eps_slope:
        return MotionRelation.APPROACH
    if slope > params.eps_slope:
        return MotionRelation.DIVERGE
    return MotionRelation.STATIONARY
