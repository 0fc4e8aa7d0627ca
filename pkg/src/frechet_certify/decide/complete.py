"""
Complete Decider
----------------

The recursive free-space exploration. A box of the diagram receives the reachable
parts of its left and bottom boundaries and computes the reachable parts of its
right and top boundaries, either directly through a pruning rule or by splitting
the longer side in half and recursing on both halves.

Pruning rules:

- I: no reachable input, so no reachable output.
- II: when only one input is reachable and it starts high up (or far right), the
  box is shrunk to the part that can still be reached.
- III: an output boundary whose free space is a single interval is resolved when
  it is empty (a), when its first point is the reachable corner (b) or when its
  first point is connected to a reachable input by a free column (c).
- IV: outputs on the top or right edge of the diagram are only needed for the
  corner (n, m).
"""

import math
from collections.abc import Collection
from dataclasses import dataclass, field
from typing import NamedTuple

from loguru import logger

from frechet_certify import constants as fcc
from frechet_certify.curves import Curve
from frechet_certify.decide.freespace import (
    BoundaryInterval,
    FreeSpace,
    ReachSet,
    clip,
    find_containing,
    merge,
)
from frechet_certify.geometry import ParamPair


class BoxRecord(NamedTuple):
    i: int
    i2: int
    j: int
    j2: int
    rule: str
    depth: int

    def to_line(self) -> str:
        return f"{self.i} {self.i2} {self.j} {self.j2} {self.rule}"


@dataclass
class ExplorationLog:
    """Scratch state and statistics of one decider run."""

    boxes_visited: int = 0
    max_depth: int = 0
    non_free_segments: list[BoundaryInterval] = field(default_factory=list)
    final_interval: BoundaryInterval | None = None
    boxes: list[BoxRecord] | None = None

    def visit(self, i: int, i2: int, j: int, j2: int, depth: int) -> None:
        self.boxes_visited += 1
        self.max_depth = max(self.max_depth, depth)

    def note(self, i: int, i2: int, j: int, j2: int, rule: str, depth: int) -> None:
        if self.boxes is not None:
            self.boxes.append(BoxRecord(i, i2, j, j2, rule, depth))


_Outputs = tuple[ReachSet | None, ReachSet | None]


def _clip_known(known: ReachSet | None, lo: float, hi: float) -> ReachSet | None:
    return None if known is None else clip(known, lo, hi)


def _merge_known(first: ReachSet | None, second: ReachSet | None) -> ReachSet | None:
    if first is None:
        return second
    if second is None:
        return first
    return merge(first, second)


class _Explorer:
    def __init__(
        self, space: FreeSpace, disabled_rules: Collection[str], log: ExplorationLog
    ) -> None:
        self.space = space
        self.log = log
        self.rules = {rule for rule in fcc.RULES if rule not in disabled_rules}

    def run(self) -> BoundaryInterval | None:
        space = self.space
        n, m = space.n, space.m
        self.log.visit(1, n, 1, m, 1)
        if n == 1 or m == 1:
            self.log.note(1, n, 1, m, fcc.BOX_OUTCOMES.simple, 1)
            return space.degenerate_reach()
        left, bottom = space.origin_inputs()
        right, top = self._compute(1, n, 1, m, left, bottom, None, None, 1)
        if right is not None:
            last = right[-1] if right else None
            reached = last is not None and last.hi >= m
        else:
            last = top[-1] if top else None
            reached = last is not None and last.hi >= n
        return last if reached else None

    def _needs(self, i2: int, j2: int) -> tuple[bool, bool]:
        if fcc.RULES.diagram_edge not in self.rules:
            return True, True
        if j2 == self.space.m:
            return True, False
        if i2 == self.space.n:
            return False, True
        return True, True

    def _compute(  # noqa: C901, PLR0911
        self,
        i: int,
        i2: int,
        j: int,
        j2: int,
        left: ReachSet,
        bottom: ReachSet,
        known_right: ReachSet | None,
        known_top: ReachSet | None,
        depth: int,
        *,
        visited: bool = True,
    ) -> _Outputs:
        log = self.log
        if visited and depth > 1:
            log.visit(i, i2, j, j2, depth)

        if i2 - i == 1 and j2 - j == 1:
            log.note(i, i2, j, j2, fcc.BOX_OUTCOMES.cell, depth)
            right, top = self.space.cell_propagate(i, j, left, bottom)
            return (
                right if known_right is None else known_right,
                top if known_top is None else known_top,
            )

        if not left and not bottom:
            log.note(i, i2, j, j2, fcc.BOX_OUTCOMES.empty_inputs, depth)
            return [], []

        shrunk = self._shrink(i, i2, j, j2, left, bottom)
        if shrunk is not None:
            log.note(i, i2, j, j2, fcc.BOX_OUTCOMES.shrink, depth)
            si, sj = shrunk
            return self._compute(
                si,
                i2,
                sj,
                j2,
                left,
                bottom,
                _clip_known(known_right, sj, j2),
                _clip_known(known_top, si, i2),
                depth,
                visited=False,
            )

        need_right, need_top = self._needs(i2, j2)
        right = known_right
        top = known_top
        if need_top and top is None:
            top = self._simple_top(i, i2, j, j2, left, bottom)
        if need_right and right is None:
            right = self._simple_right(i, i2, j, j2, left, bottom)
        if (top is not None or not need_top) and (right is not None or not need_right):
            excused = not (need_top and need_right)
            rule = fcc.BOX_OUTCOMES.diagram_edge if excused else fcc.BOX_OUTCOMES.simple
            log.note(i, i2, j, j2, rule, depth)
            return right, top

        log.note(i, i2, j, j2, fcc.BOX_OUTCOMES.split, depth)
        if j2 - j > i2 - i:
            jm = (j + j2) // 2
            r1, t1 = self._compute(
                i,
                i2,
                j,
                jm,
                clip(left, j, jm),
                bottom,
                _clip_known(right, j, jm),
                None,
                depth + 1,
            )
            r2, t2 = self._compute(
                i,
                i2,
                jm,
                j2,
                clip(left, jm, j2),
                t1 or [],
                _clip_known(right, jm, j2),
                top,
                depth + 1,
            )
            out_right = right if right is not None else _merge_known(r1, r2)
            out_top = top if top is not None else t2
        else:
            im = (i + i2) // 2
            r1, t1 = self._compute(
                i,
                im,
                j,
                j2,
                left,
                clip(bottom, i, im),
                None,
                _clip_known(top, i, im),
                depth + 1,
            )
            r2, t2 = self._compute(
                im,
                i2,
                j,
                j2,
                r1 or [],
                clip(bottom, im, i2),
                right,
                _clip_known(top, im, i2),
                depth + 1,
            )
            out_right = right if right is not None else r2
            out_top = top if top is not None else _merge_known(t1, t2)
        return out_right, out_top

    def _shrink(
        self, i: int, i2: int, j: int, j2: int, left: ReachSet, bottom: ReachSet
    ) -> tuple[int, int] | None:
        if fcc.RULES.shrink not in self.rules:
            return None
        if not bottom and left and left[0].lo > j:
            new_j = min(math.floor(left[0].lo), j2 - 1)
            if new_j > j:
                return i, new_j
        if not left and bottom and bottom[0].lo > i:
            new_i = min(math.floor(bottom[0].lo), i2 - 1)
            if new_i > i:
                return new_i, j
        return None

    def _resolve_simple(
        self,
        axis: str,
        fixed: int,
        lo: int,
        hi: int,
        corner_side: ReachSet,
        column_side: ReachSet,
        column_span: tuple[int, int],
    ) -> ReachSet | None:
        """Try rule III on one output boundary.

        ``corner_side`` is the input sharing the output's first corner, the input
        opposite the output is ``column_side``, and ``column_span`` is the extent of
        the column (or row) joining them.
        """
        rules = self.rules
        if not rules & {
            fcc.RULES.simple_empty,
            fcc.RULES.simple_corner,
            fcc.RULES.simple_column,
        }:
            return None
        result = self.space.simple_boundary(axis, fixed, lo, hi)
        if not result.simple:
            return None
        if result.interval is None:
            return [] if fcc.RULES.simple_empty in rules else None

        first, last = result.interval
        if first == lo:
            if (
                fcc.RULES.simple_corner in rules
                and corner_side
                and corner_side[-1].hi >= fixed
            ):
                return [
                    BoundaryInterval(
                        axis,
                        fixed,
                        first,
                        last,
                        fcc.PROPAGATIONS.corner,
                        corner_side[-1],
                    )
                ]
            return None

        if fcc.RULES.simple_column not in rules:
            return None
        source = find_containing(column_side, first)
        if source is None:
            return None
        cross_axis = (
            fcc.AXES.vertical if axis == fcc.AXES.horizontal else fcc.AXES.horizontal
        )
        if not self.space.column_free(cross_axis, first, *column_span):
            return None
        return [
            BoundaryInterval(axis, fixed, first, last, fcc.PROPAGATIONS.column, source)
        ]

    def _simple_top(
        self, i: int, i2: int, j: int, j2: int, left: ReachSet, bottom: ReachSet
    ) -> ReachSet | None:
        return self._resolve_simple(
            fcc.AXES.horizontal, j2, i, i2, left, bottom, (j, j2)
        )

    def _simple_right(
        self, i: int, i2: int, j: int, j2: int, left: ReachSet, bottom: ReachSet
    ) -> ReachSet | None:
        return self._resolve_simple(
            fcc.AXES.vertical, i2, j, j2, bottom, left, (i, i2)
        )


def explore(
    space: FreeSpace,
    disabled_rules: Collection[str] = (),
    *,
    dump_boxes: bool = False,
) -> tuple[str, ExplorationLog]:
    """Run the complete decider on a prepared free space."""
    log = ExplorationLog(boxes=[] if dump_boxes else None)
    start = ParamPair(1, 1)
    end = ParamPair(space.n, space.m)
    if not (space.is_free(start) and space.is_free(end)):
        log.visit(1, space.n, 1, space.m, 1)
        final = None
    else:
        final = _Explorer(space, disabled_rules, log).run()
    log.final_interval = final
    if space.non_free is not None:
        log.non_free_segments = list(space.non_free.values())
    verdict = fcc.VERDICTS.close if final is not None else fcc.VERDICTS.far
    logger.debug(
        f"complete decider: {verdict} after {log.boxes_visited} boxes "
        f"(depth {log.max_depth})"
    )
    return verdict, log


def complete_decide(
    pi: Curve,
    sigma: Curve,
    delta: float,
    *,
    disabled_rules: Collection[str] = (),
    record: bool = False,
    dump_boxes: bool = False,
) -> tuple[str, ExplorationLog]:
    """Decide whether the Frechet distance of pi and sigma is at most delta.

    Parameters
    ----------
    pi, sigma
        The curves.
    delta
        Distance threshold.
    disabled_rules
        Pruning rules to leave out (any of "2", "3a", "3b", "3c", "4").
    record
        Keep the non-free segments needed to build a NO certificate.
    dump_boxes
        Keep one record per visited box.

    Returns
    -------
    tuple[str, ExplorationLog]
        The verdict ("close" or "far") and the log of the exploration.
    """
    space = FreeSpace(pi, sigma, delta, record=record)
    return explore(space, disabled_rules, dump_boxes=dump_boxes)
