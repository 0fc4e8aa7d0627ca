"""
Certificate Checker
-------------------

Independent verification of YES and NO certificates. The checker only evaluates
curve points and compares distances; it shares nothing with the decider beyond the
geometry primitives, so a bug in the decider cannot make a wrong certificate pass.

A YES certificate is a monotone sequence of free parameter pairs from (1, 1) to
(n, m) where each step runs along a single row or column, or stays inside one
cell. A NO certificate is a chain of strictly non-free vertical pieces (walked
upwards) and horizontal pieces (walked leftwards), joined by jumps to the lower
right, that separates (1, 1) from (n, m): it starts on the bottom or right
boundary of the diagram and ends on its top or left boundary.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

from frechet_certify import constants as fcc
from frechet_certify.curves import Curve
from frechet_certify.geometry import (
    ParamPair,
    Point,
    Segment,
    circle_segment_params,
    interpolate,
    sq_dist,
)


@dataclass(frozen=True)
class Certificate:
    kind: str
    points: tuple[ParamPair, ...]

    def __len__(self) -> int:
        return len(self.points)


class CheckResult(NamedTuple):
    accepted: bool
    reason: str | None = None
    # Index of the offending point, or of the first point of the offending step.
    index: int | None = None

    def describe(self) -> str:
        if self.accepted:
            return "accept"
        if self.index is None:
            return f"reject {self.reason}"
        return f"reject {self.reason} {self.index}"


ACCEPT = CheckResult(accepted=True)


def _reject(reason: str, index: int | None = None) -> CheckResult:
    return CheckResult(accepted=False, reason=reason, index=index)


def _point(c: Curve, p: float) -> Point:
    i = int(p)
    if i >= c.n:
        return c.vertices[-1]
    if p == i:
        return c.vertices[i - 1]
    return interpolate(Segment(c.vertices[i - 1], c.vertices[i]), p - i)


def _breakpoints(a: float, b: float) -> list[float]:
    """a, every integer strictly between a and b, and b, for a < b."""
    inner = range(math.floor(a) + 1, math.ceil(b))
    return [a, *(float(k) for k in inner), b]


def _in_range(pp: ParamPair, n: int, m: int) -> bool:
    return 1 <= pp.p <= n and 1 <= pp.q <= m


#######
# YES #
#######


def check_yes(pi: Curve, sigma: Curve, delta: float, cert: Certificate) -> CheckResult:
    """Verify a YES certificate, comparing distances with <= delta."""
    if cert.kind != fcc.CERTIFICATE_KINDS.yes:
        return _reject(fcc.REJECT_REASONS.wrong_kind)
    n, m = pi.n, sigma.n
    points = cert.points
    if not points or points[0] != (1, 1):
        return _reject(fcc.REJECT_REASONS.bad_start, 0)
    if points[-1] != (n, m):
        return _reject(fcc.REJECT_REASONS.bad_end, len(points) - 1)

    delta_sq = delta * delta

    def free(p: float, q: float) -> bool:
        return sq_dist(_point(pi, p), _point(sigma, q)) <= delta_sq

    for k, pp in enumerate(points):
        if not _in_range(pp, n, m):
            return _reject(fcc.REJECT_REASONS.out_of_range, k)
        if not free(*pp):
            return _reject(fcc.REJECT_REASONS.non_free_point, k)

    for k, ((p, q), (p2, q2)) in enumerate(zip(points, points[1:], strict=False)):
        if p == p2 and q2 > q:
            inner = _breakpoints(q, q2)[1:-1]
            if not all(free(p, b) for b in inner):
                return _reject(fcc.REJECT_REASONS.non_free_point, k)
        elif q == q2 and p2 > p:
            inner = _breakpoints(p, p2)[1:-1]
            if not all(free(a, q) for a in inner):
                return _reject(fcc.REJECT_REASONS.non_free_point, k)
        elif p2 > p and q2 > q:
            # Both points must lie in the cell whose upper right corner is
            # (ceil(p2), ceil(q2)).
            if p < math.ceil(p2) - 1 or q < math.ceil(q2) - 1:
                return _reject(fcc.REJECT_REASONS.cell_violation, k)
        else:
            return _reject(fcc.REJECT_REASONS.non_monotone_step, k)
    return ACCEPT


######
# NO #
######


def _exterior(center: Point, delta: float, c: Curve, a: float, b: float) -> bool:
    """Whether every point of c between a and b is strictly farther than delta."""
    for lo, hi in zip(_breakpoints(a, b), _breakpoints(a, b)[1:], strict=False):
        piece = Segment(_point(c, lo), _point(c, hi))
        if not circle_segment_params(center, delta, piece).is_empty:
            return False
    return True


def check_no(pi: Curve, sigma: Curve, delta: float, cert: Certificate) -> CheckResult:
    """Verify a NO certificate, requiring distances strictly larger than delta."""
    if cert.kind != fcc.CERTIFICATE_KINDS.no:
        return _reject(fcc.REJECT_REASONS.wrong_kind)
    n, m = pi.n, sigma.n
    points = cert.points
    if not points:
        return _reject(fcc.REJECT_REASONS.bad_start, 0)
    for k, pp in enumerate(points):
        if not _in_range(pp, n, m):
            return _reject(fcc.REJECT_REASONS.out_of_range, k)

    delta_sq = delta * delta

    def far(pp: ParamPair) -> bool:
        return sq_dist(_point(pi, pp.p), _point(sigma, pp.q)) > delta_sq

    start, end = points[0], points[-1]
    if not ((start.q == 1 or start.p == n) and far(start)):
        return _reject(fcc.REJECT_REASONS.bad_start, 0)
    if not ((end.q == m or end.p == 1) and far(end)):
        return _reject(fcc.REJECT_REASONS.bad_end, len(points) - 1)

    for k, ((p, q), (p2, q2)) in enumerate(zip(points, points[1:], strict=False)):
        if p == p2 and q2 > q:
            if not _exterior(_point(pi, p), delta, sigma, q, q2):
                return _reject(fcc.REJECT_REASONS.free_piece, k)
        elif q == q2 and p2 < p:
            if not _exterior(_point(sigma, q), delta, pi, p2, p):
                return _reject(fcc.REJECT_REASONS.free_piece, k)
        elif not (p2 >= p and q2 <= q and (p2, q2) != (p, q)):
            return _reject(fcc.REJECT_REASONS.bad_step, k)
    return ACCEPT


def check_certificate(
    pi: Curve, sigma: Curve, delta: float, cert: Certificate
) -> CheckResult:
    if cert.kind == fcc.CERTIFICATE_KINDS.yes:
        return check_yes(pi, sigma, delta, cert)
    return check_no(pi, sigma, delta, cert)
