"""
Reference Oracle
----------------

The quadratic decider that propagates reachability through every cell of the
free-space diagram, row by row. It computes the free intervals of all cell
boundaries at once with numpy and shares no code with the deciders it checks, so
it serves as ground truth for tests and benchmarks.
"""

import sys

import click
import numpy as np

from frechet_certify import cli_options as clio
from frechet_certify import constants as fcc
from frechet_certify.curves import Curve

# (lo, hi) of a reachable boundary piece in segment parameters, None when empty.
_Reach = tuple[float, float] | None


def _free_intervals(
    centers: np.ndarray, path: np.ndarray, delta: float
) -> tuple[np.ndarray, np.ndarray]:
    """Parameters of every segment of ``path`` inside the disk around every center.

    Entry [c, k] is the interval {t in [0, 1] : |path_k(t) - centers_c| <= delta},
    with lo > hi when it is empty. Segment ends inside the disk are kept exactly.
    """
    start = path[:-1]
    direction = path[1:] - start
    offset = start[None, :, :] - centers[:, None, :]
    end_offset = path[1:][None, :, :] - centers[:, None, :]
    a = np.broadcast_to((direction * direction).sum(axis=-1), offset.shape[:2])
    b = (offset * direction[None, :, :]).sum(axis=-1)
    c = (offset * offset).sum(axis=-1) - delta * delta
    start_in = c <= 0.0
    end_in = (end_offset * end_offset).sum(axis=-1) <= delta * delta

    disc = b * b - a * c
    root = np.sqrt(np.maximum(disc, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        lo = (-b - root) / a
        hi = (-b + root) / a
    point = a == 0.0
    empty = np.where(point, c > 0.0, (disc < 0.0) | (lo > 1.0) | (hi < 0.0))
    empty &= ~(start_in | end_in)
    lo = np.where(point | start_in, 0.0, np.clip(lo, 0.0, 1.0))
    hi = np.where(point | end_in, 1.0, np.clip(hi, 0.0, 1.0))
    return np.where(empty, np.inf, lo), np.where(empty, -np.inf, hi)


def _propagate(lo: float, hi: float, across: _Reach, along: _Reach) -> _Reach:
    # A reachable point on the perpendicular input reaches all of the free part,
    # one on the parallel input only what lies at or above it.
    if lo > hi:
        return None
    if across is not None:
        return lo, hi
    if along is None:
        return None
    lo = max(lo, along[0])
    return (lo, hi) if lo <= hi else None


def _edge(lo: list[float], hi: list[float]) -> list[_Reach]:
    reach: list[_Reach] = []
    open_edge = True
    for a, b in zip(lo, hi, strict=True):
        if open_edge and a == 0.0 and a <= b:
            reach.append((a, b))
            open_edge = b == 1.0
        else:
            reach.append(None)
            open_edge = False
    return reach


def _unreached(count: int) -> list[_Reach]:
    return [None] * count


def naive_dp_decide(pi: Curve, sigma: Curve, delta: float) -> str:
    """Decide whether the Frechet distance of pi and sigma is at most delta.

    Every cell is visited once; the reachable parts of its right and top
    boundaries follow from the reachable parts of its left and bottom ones by
    convexity of the free space inside a cell.
    """
    p = np.asarray(pi.vertices, dtype=float)
    s = np.asarray(sigma.vertices, dtype=float)
    delta_sq = delta * delta
    for a, b in ((p[0], s[0]), (p[-1], s[-1])):
        if float(((a - b) ** 2).sum()) > delta_sq:
            return fcc.VERDICTS.far
    n, m = len(p), len(s)
    if n == 1 and m == 1:
        return fcc.VERDICTS.close

    # Boundary {i} x [j, j+1] is v[i, j], boundary [i, i+1] x {j} is h[j, i].
    v_lo, v_hi = (x.tolist() for x in _free_intervals(p, s, delta))
    h_lo, h_hi = (x.tolist() for x in _free_intervals(s, p, delta))

    left = [_edge(v_lo[0], v_hi[0])] + [_unreached(m - 1) for _ in range(n - 1)]
    bottom = [_edge(h_lo[0], h_hi[0])] + [_unreached(n - 1) for _ in range(m - 1)]
    for i in range(n - 1):
        for j in range(m - 1):
            from_left, from_bottom = left[i][j], bottom[j][i]
            left[i + 1][j] = _propagate(
                v_lo[i + 1][j], v_hi[i + 1][j], from_bottom, from_left
            )
            bottom[j + 1][i] = _propagate(
                h_lo[j + 1][i], h_hi[j + 1][i], from_left, from_bottom
            )

    last = left[n - 1][m - 2] if m > 1 else bottom[m - 1][n - 2]
    reached = last is not None and last[1] == 1.0
    return fcc.VERDICTS.close if reached else fcc.VERDICTS.far


def oracle_decide_main(curve_a: str, curve_b: str, delta: float) -> int:
    pi = clio.read_curve(curve_a)
    sigma = clio.read_curve(curve_b)
    verdict = naive_dp_decide(pi, sigma, delta)
    click.echo(verdict)
    return 0 if verdict == fcc.VERDICTS.close else 1


@click.command()  # type: ignore[arg-type]
@click.argument("curve_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("curve_b", type=click.Path(exists=True, dir_okay=False))
@click.argument("delta", type=click.FloatRange(min=0))
@clio.with_verbose()
def oracle_decide(curve_a: str, curve_b: str, delta: float, verbose: int) -> None:
    """Decide with the exhaustive cell-by-cell propagation."""
    clio.configure_logging(verbose)
    sys.exit(oracle_decide_main(curve_a, curve_b, delta))
