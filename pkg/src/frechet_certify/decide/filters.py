"""
Filters
-------

Fast, incomplete deciders that run before the complete decider. Positive filters
(bounding box, greedy, equal-time) answer close or unknown and return the
traversal they found; the negative filter answers far or unknown and returns a
vertex that is far from the entire other curve.

Every answer other than unknown is sound: a close witness is a monotone sequence
of free parameter pairs whose consecutive steps stay inside the free space, and a
far witness is a full row or column of the diagram without a free point.
"""

from collections.abc import Callable
from dataclasses import dataclass

from loguru import logger

from frechet_certify import constants as fcc
from frechet_certify.curves import Curve, bbox_max_sq_dist
from frechet_certify.decide.freespace import (
    FreeSpace,
    dedupe_consecutive,
    heur_close,
)
from frechet_certify.geometry import ParamPair, sq_dist


@dataclass(frozen=True)
class FilterVerdict:
    value: str
    witness: tuple[ParamPair, ...] | None = None
    # ("pi", p) when vertex p of pi is far from all of sigma, ("sigma", q) likewise.
    far_witness: tuple[str, int] | None = None
    stuck: ParamPair | None = None
    steps: int = 0

    @property
    def decided(self) -> bool:
        return self.value != fcc.VERDICTS.unknown


UNKNOWN = FilterVerdict(fcc.VERDICTS.unknown)


def bbox_filter(pi: Curve, sigma: Curve, delta: float) -> FilterVerdict:
    """Close when every point of one bounding box is within delta of the other's."""
    if bbox_max_sq_dist(pi.bbox, sigma.bbox) > delta * delta:
        return UNKNOWN
    n, m = pi.n, sigma.n
    witness = dedupe_consecutive([ParamPair(1, 1), ParamPair(n, 1), ParamPair(n, m)])
    return FilterVerdict(fcc.VERDICTS.close, witness=tuple(witness))


#####################
# Positive searches #
#####################

# (i, j, s) -> candidate big steps for step size s > 1.
_BigSteps = Callable[[int, int, int], list[tuple[int, int]]]


def _unit_steps(n: int, m: int, i: int, j: int) -> list[tuple[int, int]]:
    steps = [(i + 1, j + 1), (i + 1, j), (i, j + 1)]
    return [(a, b) for a, b in steps if a <= n and b <= m]


def _search(
    pi: Curve, sigma: Curve, delta: float, big_steps: _BigSteps
) -> tuple[list[tuple[int, int]], bool, int]:
    """Walk from (1, 1) towards (n, m) with an adaptive step size.

    Unit steps are accepted when the target vertex pair is within delta: a step
    along a boundary or across one cell then stays free because distances along a
    segment are convex and the free space of a cell is convex. Larger steps are
    accepted only when the swept subcurves are certified close by the heuristic.
    Among the accepted steps the one with the closest target vertex pair wins.

    Returns the visited positions, whether (n, m) was reached and the number of
    loop iterations.
    """
    n, m = pi.n, sigma.n
    delta_sq = delta * delta
    i, j = 1, 1
    s = 1
    path = [(i, j)]
    iterations = 0

    def distance(a: int, b: int) -> float:
        return sq_dist(pi.vertices[a - 1], sigma.vertices[b - 1])

    while (i, j) != (n, m):
        iterations += 1
        if s == 1:
            valid = [
                (a, b) for a, b in _unit_steps(n, m, i, j) if distance(a, b) <= delta_sq
            ]
        else:
            valid = [
                (a, b)
                for a, b in big_steps(i, j, s)
                if heur_close(pi, i, a, sigma, j, b, delta)
            ]
        if not valid:
            if s == 1:
                return path, False, iterations
            s //= 2
            continue

        def rank(step: tuple[int, int]) -> tuple[float, bool, int]:
            a, b = step
            diagonal = a > i and b > j
            remaining = 0 if diagonal else (n - i if a > i else m - j)
            return distance(a, b), not diagonal, -remaining

        i, j = min(valid, key=rank)
        path.append((i, j))
        s *= 2
    return path, True, iterations


def _greedy_big_steps(n: int, m: int) -> _BigSteps:
    def steps(i: int, j: int, s: int) -> list[tuple[int, int]]:
        candidates = []
        if i < n:
            candidates.append((min(i + s, n), j))
        if j < m:
            candidates.append((i, min(j + s, m)))
        return candidates

    return steps


def _equal_time_big_steps(n: int, m: int) -> _BigSteps:
    def steps(i: int, j: int, s: int) -> list[tuple[int, int]]:
        if n == i:
            return [(i, min(j + s, m))]
        s = min(s, n - i)
        return [(i + s, j + ((m - j) * s) // (n - i))]

    return steps


def _positive_verdict(
    name: str,
    points: list[ParamPair],
    reached: bool,  # noqa: FBT001
    iterations: int,
) -> FilterVerdict:
    if reached:
        logger.debug(f"{name} filter: close after {iterations} steps")
        return FilterVerdict(
            fcc.VERDICTS.close, witness=tuple(points), steps=iterations
        )
    return FilterVerdict(fcc.VERDICTS.unknown, stuck=points[-1], steps=iterations)


def greedy_filter(pi: Curve, sigma: Curve, delta: float) -> FilterVerdict:
    """Greedy traversal with adaptive step size.

    Assumes both endpoint pairs are within delta. An unknown verdict carries the
    position where the walk got stuck, for the negative filter.
    """
    path, reached, iterations = _search(
        pi, sigma, delta, _greedy_big_steps(pi.n, sigma.n)
    )
    points = [ParamPair(a, b) for a, b in path]
    return _positive_verdict(fcc.STAGES.greedy, points, reached, iterations)


def equal_time_filter(pi: Curve, sigma: Curve, delta: float) -> FilterVerdict:
    """Traversal staying close to the diagonal of the diagram.

    Big steps advance both curves at the same relative speed. In the witness every
    big step (i, j) -> (i', j') is expanded to (i, j), (i', j), (i', j') so that
    each step runs along a single row or column.
    """
    path, reached, iterations = _search(
        pi, sigma, delta, _equal_time_big_steps(pi.n, sigma.n)
    )
    points = [ParamPair(*path[0])]
    for (a, b), (a2, b2) in zip(path, path[1:], strict=False):
        if a2 - a > 1 or b2 - b > 1:
            points.append(ParamPair(a2, b))
        points.append(ParamPair(a2, b2))
    points = dedupe_consecutive(points)
    return _positive_verdict(fcc.STAGES.equal_time, points, reached, iterations)


###################
# Negative filter #
###################


def negative_filter(
    pi: Curve,
    sigma: Curve,
    delta: float,
    stuck: ParamPair,
    space: FreeSpace | None = None,
) -> FilterVerdict:
    """Look for a vertex beyond the stuck position that is far from the whole
    other curve.

    Vertices pi_{i+1}, pi_{i+2}, pi_{i+4}, ... are tested first, then the same for
    sigma starting at j. A vertex whose full row or column of the diagram is empty
    proves that no traversal exists.
    """
    space = space if space is not None else FreeSpace(pi, sigma, delta)
    i, j = int(stuck.p), int(stuck.q)
    n, m = pi.n, sigma.n
    scans = [
        (fcc.AXES.vertical, "pi", i, n, m),
        (fcc.AXES.horizontal, "sigma", j, m, n),
    ]
    for axis, name, start, length, other_length in scans:
        s = 1
        while start + s <= length:
            vertex = start + s
            if space.simple_boundary(axis, vertex, 1, other_length).is_empty:
                logger.debug(f"negative filter: {name} vertex {vertex} is far")
                return FilterVerdict(fcc.VERDICTS.far, far_witness=(name, vertex))
            s *= 2
    return UNKNOWN
