"""
Geometry Primitives
-------------------

Points, segments and the circle-segment intersection that every free-space
computation reduces to. Distances are compared in squared form wherever possible;
the only square root on the hot path is the discriminant of the intersection
quadratic, and it is taken after the discriminant is known to be non-negative.
"""

import math
from typing import NamedTuple

from frechet_certify import constants as fcc


class Point(NamedTuple):
    x: float
    y: float


class Segment(NamedTuple):
    start: Point
    end: Point


class ParamPair(NamedTuple):
    """A point (p, q) of the parameter space: pi at p against sigma at q."""

    p: float
    q: float


class UnitInterval(NamedTuple):
    """A closed sub-interval of [0, 1], or the empty interval when lo > hi."""

    lo: float
    hi: float

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi


EMPTY_INTERVAL = UnitInterval(math.inf, -math.inf)
FULL_INTERVAL = UnitInterval(0.0, 1.0)


def sq_dist(a: Point, b: Point) -> float:
    dx = a.x - b.x
    dy = a.y - b.y
    return dx * dx + dy * dy


def dist(a: Point, b: Point) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def interpolate(s: Segment, t: float) -> Point:
    """Evaluate the segment at parameter t in [0, 1].

    The endpoints are returned unchanged for t = 0 and t = 1 so that integer
    curve indices always evaluate to the stored vertex.
    """
    if t == 0.0:
        return s.start
    if t == 1.0:  # noqa: PLR2004
        return s.end
    sx, sy = s.start
    ex, ey = s.end
    return Point(sx + t * (ex - sx), sy + t * (ey - sy))


def circle_segment_params(center: Point, radius: float, s: Segment) -> UnitInterval:
    """Compute the parameters of the segment lying in the closed disk.

    Parameters
    ----------
    center
        Center of the disk.
    radius
        Radius of the disk, non-negative.
    s
        The segment, possibly degenerate.

    Returns
    -------
    UnitInterval
        ``{t in [0, 1] : |s(t) - center| <= radius}``, which is a single
        (possibly empty) interval because the disk is convex.
    """
    sx, sy = s.start
    dx = s.end.x - sx
    dy = s.end.y - sy
    fx = sx - center.x
    fy = sy - center.y

    a = dx * dx + dy * dy
    b = fx * dx + fy * dy
    c = fx * fx + fy * fy - radius * radius

    if a == 0.0:
        return FULL_INTERVAL if c <= 0.0 else EMPTY_INTERVAL
    if c > 0.0 and b >= 0.0:
        # Starts outside and moves away from the center.
        return EMPTY_INTERVAL

    mid = -b / a
    disc = mid * mid - c / a
    if disc < -fcc.TANGENCY_TOL:
        return EMPTY_INTERVAL
    root = math.sqrt(disc) if disc > 0.0 else 0.0

    lo = mid - root
    hi = mid + root
    if hi < -fcc.PARAM_TOL or lo > 1.0 + fcc.PARAM_TOL:
        return EMPTY_INTERVAL
    return UnitInterval(min(max(lo, 0.0), 1.0), min(max(hi, 0.0), 1.0))
