"""
Free Space
----------

Primitives over the free-space diagram of two curves for a fixed threshold: point
membership, the constant time close/far heuristics built on prefix lengths, free
intervals of boundary pieces, simple-boundary detection with an adaptive step size,
propagation of reachability through a single cell and the exhaustive cell-by-cell
sweep.

A boundary is vertical when its p coordinate is fixed (the point lives on pi and
the boundary runs along sigma) and horizontal when its q coordinate is fixed.
"""

from collections.abc import Callable, Iterable
from dataclasses import dataclass
from typing import NamedTuple

from frechet_certify import constants as fcc
from frechet_certify.curves import Curve, point_at, subcurve_len
from frechet_certify.geometry import (
    ParamPair,
    Point,
    Segment,
    circle_segment_params,
    sq_dist,
)

# Number of inward halvings tried when an endpoint computed from the circle
# intersection does not evaluate as free (or as strictly non-free) on its own.
_SETTLE_STEPS = 52
_EXTERIOR_STEPS = 40


def dedupe_consecutive(points: Iterable[ParamPair]) -> list[ParamPair]:
    """Drop every point equal to its predecessor."""
    kept: list[ParamPair] = []
    for point in points:
        if not kept or kept[-1] != point:
            kept.append(point)
    return kept


@dataclass(slots=True, eq=False)
class BoundaryInterval:
    """A closed interval on a boundary line of the diagram.

    Reachable intervals carry a predecessor tag: ``kind`` says how their first
    point was reached and ``pred`` is the interval responsible for it.
    """

    axis: str
    fixed: float
    lo: float
    hi: float
    kind: str | None = None
    pred: "BoundaryInterval | None" = None

    def at(self, coord: float) -> ParamPair:
        if self.axis == fcc.AXES.vertical:
            return ParamPair(self.fixed, coord)
        return ParamPair(coord, self.fixed)

    @property
    def start(self) -> ParamPair:
        return self.at(self.lo)

    @property
    def end(self) -> ParamPair:
        return self.at(self.hi)

    @property
    def lower_right(self) -> ParamPair:
        if self.axis == fcc.AXES.vertical:
            return ParamPair(self.fixed, self.lo)
        return ParamPair(self.hi, self.fixed)

    @property
    def upper_left(self) -> ParamPair:
        if self.axis == fcc.AXES.vertical:
            return ParamPair(self.fixed, self.hi)
        return ParamPair(self.lo, self.fixed)

    def contains(self, coord: float) -> bool:
        return self.lo <= coord <= self.hi


ReachSet = list[BoundaryInterval]


class SimpleBoundaryResult(NamedTuple):
    simple: bool
    interval: tuple[float, float] | None = None

    @property
    def is_empty(self) -> bool:
        return self.simple and self.interval is None


NOT_SIMPLE = SimpleBoundaryResult(simple=False)

# (axis, fixed coordinate, lo, hi) of a recorded non-free piece.
NonFreeKey = tuple[str, float, float, float]

# Receives (lo, hi) of a closed piece of a boundary that is strictly non-free.
NonFreeSink = Callable[[float, float], None]


##############
# Heuristics #
##############


def _span(c: Curve, i: int, i2: int) -> tuple[int, float]:
    mid = (i + i2) // 2
    return mid, max(subcurve_len(c, i, mid), subcurve_len(c, mid, i2))


def heur_close(
    pi: Curve, i: int, i2: int, sigma: Curve, j: int, j2: int, delta: float
) -> bool:
    """Check an upper bound on all distances between pi[i..i2] and sigma[j..j2].

    Every point of a subcurve lies within the longer half (measured from the middle
    vertex) of the middle vertex, so the middle-vertex distance plus both half
    lengths bounds the distance of every pair. True implies the subcurves are
    within Frechet distance delta, false means nothing.
    """
    ic, r_pi = _span(pi, i, i2)
    jc, r_sigma = _span(sigma, j, j2)
    slack = delta - r_pi - r_sigma
    if slack < 0:
        return False
    return sq_dist(pi.vertices[ic - 1], sigma.vertices[jc - 1]) <= slack * slack


def heur_far(
    pi: Curve, i: int, i2: int, sigma: Curve, j: int, j2: int, delta: float
) -> bool:
    """Check a lower bound on all distances between pi[i..i2] and sigma[j..j2].

    True implies every pair of points is strictly farther apart than delta.
    """
    ic, r_pi = _span(pi, i, i2)
    jc, r_sigma = _span(sigma, j, j2)
    reach = delta + r_pi + r_sigma
    return sq_dist(pi.vertices[ic - 1], sigma.vertices[jc - 1]) > reach * reach


def _point_close(point: Point, c: Curve, j: int, j2: int, delta: float) -> bool:
    jc, radius = _span(c, j, j2)
    slack = delta - radius
    if slack < 0:
        return False
    return sq_dist(point, c.vertices[jc - 1]) <= slack * slack


def _point_far(point: Point, c: Curve, j: int, j2: int, delta: float) -> bool:
    jc, radius = _span(c, j, j2)
    reach = delta + radius
    return sq_dist(point, c.vertices[jc - 1]) > reach * reach


##################
# Boundary scans #
##################


def _nudge(is_ok: Callable[[float], bool], start: float, toward: float) -> float:
    # Smallest step (by powers of two) from start toward a known good coordinate.
    for e in range(_SETTLE_STEPS, 0, -1):
        candidate = start + (toward - start) * 2.0**-e
        if is_ok(candidate):
            return candidate
    return toward


def unit_free_interval(
    point: Point, other: Curve, k: int, delta: float, sink: NonFreeSink | None = None
) -> tuple[tuple[float, float] | None, bool]:
    """Free interval of the boundary piece between vertices k and k + 1 of ``other``.

    Returns the interval in coordinates along ``other`` together with a flag that
    is true when an empty result is certified by the circle test itself. Interval
    endpoints are settled so that evaluating the curve at them is free. When a sink
    is given, the closed non-free parts of the piece are reported to it.
    """
    delta_sq = delta * delta

    def free(coord: float) -> bool:
        return sq_dist(point, point_at(other, coord)) <= delta_sq

    params = circle_segment_params(
        point, delta, Segment(other.vertices[k - 1], other.vertices[k])
    )
    if params.is_empty:
        if sink is not None:
            sink(k, k + 1)
        return None, True

    lo = k + params.lo if params.lo > 0.0 else float(k)
    hi = k + params.hi if params.hi < 1.0 else float(k + 1)
    if not (free(lo) and free(hi)):
        mid = 0.5 * (lo + hi)
        if not free(mid):
            # Grazing contact that does not survive evaluation.
            return None, False
        if not free(lo):
            lo = _nudge(free, lo, mid)
        if not free(hi):
            hi = _nudge(free, hi, mid)

    if sink is not None:
        _report_exterior(point, other, k, lo, hi, delta, sink)
    return (lo, hi), False


def _report_exterior(
    point: Point,
    other: Curve,
    k: int,
    lo: float,
    hi: float,
    delta: float,
    sink: NonFreeSink,
) -> None:
    def exterior(a: float, b: float) -> bool:
        piece = Segment(point_at(other, a), point_at(other, b))
        return circle_segment_params(point, delta, piece).is_empty

    if lo > k:
        for e in range(_EXTERIOR_STEPS, 0, -1):
            end = lo - (lo - k) * 2.0**-e
            if exterior(k, end):
                sink(k, end)
                break
    if hi < k + 1:
        for e in range(_EXTERIOR_STEPS, 0, -1):
            start = hi + (k + 1 - hi) * 2.0**-e
            if exterior(start, k + 1):
                sink(start, k + 1)
                break


def _scan(
    point: Point,
    other: Curve,
    q: int,
    q2: int,
    delta: float,
    sink: NonFreeSink | None,
    unit: Callable[[int], tuple[tuple[float, float] | None, bool]],
) -> list[list[float]] | None:
    """Collect the free components of a boundary, giving up once there are two."""
    components: list[list[float]] = []

    def add(a: float, b: float) -> None:
        if components and components[-1][1] >= a:
            components[-1][1] = max(components[-1][1], b)
        else:
            components.append([a, b])

    j = q
    s = 1
    while j < q2:
        s = min(s, q2 - j)
        if _point_close(point, other, j, j + s, delta):
            add(j, j + s)
        elif _point_far(point, other, j, j + s, delta):
            if sink is not None:
                sink(j, j + s)
        elif s > 1:
            s //= 2
            continue
        else:
            interval, certified = unit(j)
            if interval is not None:
                add(*interval)
            elif not certified:
                return None
        if len(components) > 1:
            return None
        j += s
        s *= 2
    return components


def simple_boundary(
    point_curve: Curve,
    p: float,
    other: Curve,
    q: int,
    q2: int,
    delta: float,
    sink: NonFreeSink | None = None,
) -> SimpleBoundaryResult:
    """Decide whether the boundary {p} x [q, q2] meets the free space in one interval.

    The boundary is walked with an adaptive step: whole subcurves certified close or
    far by the heuristics are skipped with a doubled step, otherwise the step is
    halved until single segments are intersected exactly with the circle around the
    point. The walk stops as soon as a second free component (more than two change
    points) appears.

    Parameters
    ----------
    point_curve
        Curve carrying the fixed point, evaluated at the continuous index p.
    p
        Continuous index of the fixed point.
    other
        The curve the boundary runs along.
    q, q2
        Vertex range of the boundary on ``other``.
    delta
        Distance threshold.
    sink
        Optional receiver of strictly non-free closed pieces met on the way.

    Returns
    -------
    SimpleBoundaryResult
        Not simple, or simple with the free interval (None when empty).
    """
    point = point_at(point_curve, p)
    if q == q2:
        free = sq_dist(point, other.vertices[q - 1]) <= delta * delta
        if not free and sink is not None:
            sink(q, q)
        return SimpleBoundaryResult(simple=True, interval=(q, q) if free else None)
    if _point_far(point, other, q, q2, delta):
        if sink is not None:
            sink(q, q2)
        return SimpleBoundaryResult(simple=True)
    if _point_close(point, other, q, q2, delta):
        return SimpleBoundaryResult(simple=True, interval=(q, q2))

    def unit(k: int) -> tuple[tuple[float, float] | None, bool]:
        return unit_free_interval(point, other, k, delta, sink)

    components = _scan(point, other, q, q2, delta, sink, unit)
    if components is None:
        return NOT_SIMPLE
    if not components:
        return SimpleBoundaryResult(simple=True)
    lo, hi = components[0]
    return SimpleBoundaryResult(simple=True, interval=(lo, hi))


def column_free(
    point_curve: Curve,
    p: float,
    other: Curve,
    q: int,
    q2: int,
    delta: float,
    sink: NonFreeSink | None = None,
) -> bool:
    """Whether the whole boundary {p} x [q, q2] lies in the free space."""
    point = point_at(point_curve, p)
    delta_sq = delta * delta
    if q == q2:
        return sq_dist(point, other.vertices[q - 1]) <= delta_sq
    if _point_close(point, other, q, q2, delta):
        return True
    j = q
    s = 1
    while j < q2:
        s = min(s, q2 - j)
        if _point_close(point, other, j, j + s, delta):
            j += s
            s *= 2
            continue
        if _point_far(point, other, j, j + s, delta):
            if sink is not None:
                sink(j, j + s)
            return False
        if s > 1:
            s //= 2
            continue
        interval, _ = unit_free_interval(point, other, j, delta, sink)
        if interval is None or interval[0] > j or interval[1] < j + 1:
            return False
        j += 1
    return True


##################
# Interval lists #
##################


def clip(intervals: ReachSet, lo: float, hi: float) -> ReachSet:
    """Restrict reachable intervals to [lo, hi], keeping shared endpoints."""
    clipped = []
    for interval in intervals:
        if interval.hi < lo or interval.lo > hi:
            continue
        if interval.lo >= lo and interval.hi <= hi:
            clipped.append(interval)
            continue
        new_lo = max(interval.lo, lo)
        clipped.append(
            BoundaryInterval(
                axis=interval.axis,
                fixed=interval.fixed,
                lo=new_lo,
                hi=min(interval.hi, hi),
                kind=fcc.PROPAGATIONS.merge if new_lo > interval.lo else interval.kind,
                pred=interval if new_lo > interval.lo else interval.pred,
            )
        )
    return clipped


def merge(first: ReachSet, second: ReachSet) -> ReachSet:
    """Concatenate the reachable sets of two adjacent boundary pieces."""
    if not first:
        return list(second)
    if not second:
        return list(first)
    last = first[-1]
    head = second[0]
    if last.hi < head.lo:
        return [*first, *second]
    joined = BoundaryInterval(
        axis=last.axis,
        fixed=last.fixed,
        lo=last.lo,
        hi=max(last.hi, head.hi),
        kind=last.kind,
        pred=last.pred,
    )
    return [*first[:-1], joined, *second[1:]]


def find_containing(intervals: ReachSet, coord: float) -> BoundaryInterval | None:
    for interval in intervals:
        if interval.contains(coord):
            return interval
    return None


##############
# Free space #
##############


class FreeSpace:
    """The free-space diagram of two curves at threshold delta.

    Free intervals of unit boundary pieces are cached. When ``record`` is set every
    strictly non-free closed piece met by any computation is kept in
    ``non_free``, keyed so that repeated evaluations do not duplicate it.
    """

    def __init__(
        self, pi: Curve, sigma: Curve, delta: float, *, record: bool = False
    ) -> None:
        self.pi = pi
        self.sigma = sigma
        self.delta = delta
        self.delta_sq = delta * delta
        self.non_free: dict[NonFreeKey, BoundaryInterval] | None = (
            {} if record else None
        )
        self._units: dict[tuple[str, int, int], tuple[float, float] | None] = {}

    @property
    def n(self) -> int:
        return self.pi.n

    @property
    def m(self) -> int:
        return self.sigma.n

    def curves(self, axis: str) -> tuple[Curve, Curve]:
        """The curve carrying the fixed point and the curve the boundary runs along."""
        if axis == fcc.AXES.vertical:
            return self.pi, self.sigma
        return self.sigma, self.pi

    def is_free(self, pp: ParamPair) -> bool:
        point = point_at(self.pi, pp.p)
        return sq_dist(point, point_at(self.sigma, pp.q)) <= self.delta_sq

    def sink(self, axis: str, fixed: float) -> NonFreeSink | None:
        if self.non_free is None:
            return None
        non_free = self.non_free

        def record(lo: float, hi: float) -> None:
            key = (axis, fixed, lo, hi)
            if key not in non_free:
                non_free[key] = BoundaryInterval(axis, fixed, lo, hi)

        return record

    def unit_free(self, axis: str, fixed: int, k: int) -> tuple[float, float] | None:
        key = (axis, fixed, k)
        if key in self._units:
            return self._units[key]
        point_curve, other = self.curves(axis)
        interval, _ = unit_free_interval(
            point_curve.vertices[fixed - 1],
            other,
            k,
            self.delta,
            self.sink(axis, fixed),
        )
        self._units[key] = interval
        return interval

    def simple_boundary(
        self, axis: str, fixed: float, lo: int, hi: int
    ) -> SimpleBoundaryResult:
        point_curve, other = self.curves(axis)
        result = simple_boundary(
            point_curve, fixed, other, lo, hi, self.delta, self.sink(axis, fixed)
        )
        if result.interval is not None:
            a, b = result.interval
            free_ends = self.is_free(self._pair(axis, fixed, a)) and self.is_free(
                self._pair(axis, fixed, b)
            )
            if not free_ends:
                return NOT_SIMPLE
        return result

    def column_free(self, axis: str, fixed: float, lo: int, hi: int) -> bool:
        point_curve, other = self.curves(axis)
        return column_free(
            point_curve, fixed, other, lo, hi, self.delta, self.sink(axis, fixed)
        )

    def free_prefix(self, axis: str) -> float | None:
        """End of the reachable prefix of the left (vertical) or bottom edge."""
        point_curve, other = self.curves(axis)
        point = point_curve.vertices[0]
        end = other.n
        if sq_dist(point, other.vertices[0]) > self.delta_sq:
            return None
        j = 1
        s = 1
        while j < end:
            s = min(s, end - j)
            if _point_close(point, other, j, j + s, self.delta):
                j += s
                s *= 2
                continue
            if s > 1:
                s //= 2
                continue
            interval = self.unit_free(axis, 1, j)
            if interval is None or interval[0] > j:
                return j
            if interval[1] < j + 1:
                return interval[1]
            j += 1
        return end

    def first_free(self, axis: str, fixed: float, lo: float, hi: float) -> float | None:
        """Smallest coordinate from lo on that evaluates as free, given hi is free."""

        def free(coord: float) -> bool:
            return self.is_free(self._pair(axis, fixed, coord))

        if free(lo):
            return lo
        if lo >= hi:
            return None
        return _nudge(free, lo, hi)

    @staticmethod
    def _pair(axis: str, fixed: float, coord: float) -> ParamPair:
        if axis == fcc.AXES.vertical:
            return ParamPair(fixed, coord)
        return ParamPair(coord, fixed)

    def cell_propagate(
        self, i: int, j: int, left_in: ReachSet, bottom_in: ReachSet
    ) -> tuple[ReachSet, ReachSet]:
        """Propagate reachability through the cell [i, i+1] x [j, j+1].

        A point of the right or top boundary is reachable iff it is free and some
        reachable input point is below and to the left of it; the straight segment
        between them is free because the free space of a cell is convex.
        """
        vertical = fcc.AXES.vertical
        horizontal = fcc.AXES.horizontal
        left = left_in[0] if left_in else None
        bottom = bottom_in[0] if bottom_in else None
        if left is None and bottom is None:
            return [], []

        right_out: ReachSet = []
        right_free = self.unit_free(vertical, i + 1, j)
        if right_free is not None:
            lo, hi = right_free
            source = bottom
            if source is None and left is not None:
                source = left
                lo = max(lo, left.lo)
                settled = (
                    self.first_free(vertical, i + 1, lo, hi) if lo <= hi else None
                )
                lo = hi + 1 if settled is None else settled
            if source is not None and lo <= hi:
                right_out.append(
                    BoundaryInterval(
                        vertical, i + 1, lo, hi, fcc.PROPAGATIONS.cell, source
                    )
                )

        top_out: ReachSet = []
        top_free = self.unit_free(horizontal, j + 1, i)
        if top_free is not None:
            lo, hi = top_free
            source = left
            if source is None and bottom is not None:
                source = bottom
                lo = max(lo, bottom.lo)
                settled = (
                    self.first_free(horizontal, j + 1, lo, hi) if lo <= hi else None
                )
                lo = hi + 1 if settled is None else settled
            if source is not None and lo <= hi:
                top_out.append(
                    BoundaryInterval(
                        horizontal, j + 1, lo, hi, fcc.PROPAGATIONS.cell, source
                    )
                )
        return right_out, top_out

    def origin_inputs(self) -> tuple[ReachSet, ReachSet]:
        """Reachable parts of the left and bottom edges of the whole diagram."""
        inputs = []
        for axis in fcc.AXES:
            end = self.free_prefix(axis)
            inputs.append(
                []
                if end is None
                else [BoundaryInterval(axis, 1, 1, end, fcc.PROPAGATIONS.origin)]
            )
        left, bottom = inputs
        return left, bottom

    def degenerate_reach(self) -> BoundaryInterval | None:
        """Reachable interval ending in (n, m) when one curve is a single vertex."""
        axis = fcc.AXES.vertical if self.n == 1 else fcc.AXES.horizontal
        length = self.m if self.n == 1 else self.n
        if not self.column_free(axis, 1, 1, length):
            return None
        return BoundaryInterval(axis, 1, 1, length, fcc.PROPAGATIONS.origin)

    def sweep(self) -> BoundaryInterval | None:
        """Propagate reachability through every cell, column by column.

        Returns the reachable interval containing (n, m), or None when (n, m) is not
        reachable.
        """
        n, m = self.n, self.m
        if n == 1 or m == 1:
            return self.degenerate_reach()
        if self.non_free is not None:
            # Edges of the diagram are not outputs of any cell.
            for k in range(1, m):
                self.unit_free(fcc.AXES.vertical, 1, k)
            for k in range(1, n):
                self.unit_free(fcc.AXES.horizontal, 1, k)

        origin_left, origin_bottom = self.origin_inputs()
        lefts = [clip(origin_left, j, j + 1) for j in range(1, m)]
        for i in range(1, n):
            bottom = clip(origin_bottom, i, i + 1)
            for j in range(1, m):
                right, bottom = self.cell_propagate(i, j, lefts[j - 1], bottom)
                lefts[j - 1] = right
        last = lefts[-1]
        if last and last[-1].hi >= m:
            return last[-1]
        return None
