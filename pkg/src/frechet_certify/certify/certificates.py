"""
Certificates
------------

Construction of YES and NO certificates from the output of the deciders, and the
certificate file format.

YES certificates are read off the predecessor tags of the reachable intervals: the
interval containing (n, m) is traced back to the origin and every interval
contributes the point where it was entered. NO certificates are assembled from the
strictly non-free boundary pieces met during the exploration by a breadth-first
search for a chain of pieces that starts on the bottom or right boundary of the
diagram and ends on its top or left boundary.

When (1, 1) or (n, m) itself is not free the NO certificate is that single point.
This is the degenerate chain: the corner lies on the bottom and the left boundary
(or on the right and the top one), so one point both starts and ends the cut, as a
cut ((p, 1), (1, q)) does when p = q = 1.

Certificate files are plain text::

    YES
    n m delta
    p q
    ...
"""

import sys
from collections import deque
from collections.abc import Callable, Iterable, Sequence
from pathlib import Path
from typing import Protocol

import click
from loguru import logger
from rra_tools.shell_tools import touch

from frechet_certify import cli_options as clio
from frechet_certify import constants as fcc
from frechet_certify.certify.checker import Certificate, check_certificate
from frechet_certify.certify.report_delete import PrioritySearchTree
from frechet_certify.curves import Curve
from frechet_certify.decide.complete import ExplorationLog
from frechet_certify.decide.filters import FilterVerdict
from frechet_certify.decide.freespace import (
    BoundaryInterval,
    FreeSpace,
    dedupe_consecutive,
)
from frechet_certify.geometry import ParamPair


class MissingPredecessorError(RuntimeError):
    pass


class CutNotFoundError(RuntimeError):
    pass


class CertificateFormatError(ValueError):
    pass


class ReportDeleteIndex(Protocol):
    def __len__(self) -> int: ...

    def report_and_delete(self, point: ParamPair) -> list[BoundaryInterval]: ...


IndexFactory = Callable[
    [Iterable[tuple[ParamPair, BoundaryInterval]]], ReportDeleteIndex
]


def _yes(points: Iterable[ParamPair]) -> Certificate:
    return Certificate(fcc.CERTIFICATE_KINDS.yes, tuple(dedupe_consecutive(points)))


def _no(points: Iterable[ParamPair]) -> Certificate:
    return Certificate(fcc.CERTIFICATE_KINDS.no, tuple(dedupe_consecutive(points)))


###################
# YES certificate #
###################


def build_yes_certificate(log: ExplorationLog, n: int, m: int) -> Certificate:
    """Trace the predecessor tags from the interval containing (n, m) to (1, 1)."""
    final = log.final_interval
    if final is None:
        msg = "The exploration did not reach (n, m)."
        raise MissingPredecessorError(msg)

    chain: list[BoundaryInterval] = []
    interval: BoundaryInterval | None = final
    while interval is not None:
        if interval.kind is None:
            msg = f"Reachable interval {interval} has no predecessor tag."
            raise MissingPredecessorError(msg)
        chain.append(interval)
        interval = interval.pred
    chain.reverse()
    if chain[0].kind != fcc.PROPAGATIONS.origin:
        msg = f"Predecessor chain ends in {chain[0]} instead of the origin."
        raise MissingPredecessorError(msg)

    points = [ParamPair(1, 1)]
    for previous, current in zip(chain, chain[1:], strict=False):
        if current.kind == fcc.PROPAGATIONS.column:
            # Up the free column (or along the free row) from the opposite input.
            points.append(previous.at(current.lo))
        points.append(current.start)
    points.append(ParamPair(n, m))
    return _yes(points)


def certificate_from_filter(verdict: FilterVerdict, n: int, m: int) -> Certificate:
    """Turn the witness of a deciding filter into a certificate."""
    if verdict.witness is not None:
        return _yes(verdict.witness)
    if verdict.far_witness is None:
        msg = f"Filter verdict {verdict.value} carries no witness."
        raise ValueError(msg)
    curve, vertex = verdict.far_witness
    if curve == "pi":
        return _no([ParamPair(vertex, 1), ParamPair(vertex, m)])
    return _no([ParamPair(n, vertex), ParamPair(1, vertex)])


##################
# NO certificate #
##################


def endpoint_certificate(space: FreeSpace) -> Certificate | None:
    """The single point NO certificate when (1, 1) or (n, m) is not free.

    A corner lies on a start side and an end side of a cut at once, so the
    one-point sequence is already a complete cut.
    """
    for corner in (ParamPair(1, 1), ParamPair(space.n, space.m)):
        if not space.is_free(corner):
            return _no([corner])
    return None


def find_cut(
    segments: Sequence[BoundaryInterval],
    n: int,
    m: int,
    index_factory: IndexFactory = PrioritySearchTree,
) -> Certificate | None:
    """Search a chain of non-free segments separating (1, 1) from (n, m).

    Segments whose lower right endpoint lies on the bottom or right boundary seed
    the search. From each segment the search continues with every segment whose
    lower right endpoint lies to the lower right of its upper left endpoint, and
    it stops at the first segment whose upper left endpoint lies on the top or
    left boundary.
    """
    index = index_factory((s.lower_right, s) for s in segments)
    parents: dict[int, BoundaryInterval | None] = {}
    queue: deque[BoundaryInterval] = deque()
    for s in segments:
        lower_right = s.lower_right
        if lower_right.q == 1 or lower_right.p == n:
            parents[id(s)] = None
            queue.append(s)

    while queue:
        s = queue.popleft()
        upper_left = s.upper_left
        if upper_left.q == m or upper_left.p == 1:
            cut: list[BoundaryInterval] = []
            link: BoundaryInterval | None = s
            while link is not None:
                cut.append(link)
                link = parents[id(link)]
            cut.reverse()
            return _no(point for c in cut for point in (c.lower_right, c.upper_left))
        for t in index.report_and_delete(upper_left):
            if id(t) not in parents:
                parents[id(t)] = s
                queue.append(t)
    return None


def build_no_certificate(
    log: ExplorationLog,
    pi: Curve,
    sigma: Curve,
    delta: float,
    index_factory: IndexFactory = PrioritySearchTree,
) -> Certificate:
    """Build a NO certificate from the non-free segments recorded in the log.

    When the recorded segments do not contain a cut, the non-free parts of every
    cell boundary are harvested with a full sweep and the search is repeated.
    """
    space = FreeSpace(pi, sigma, delta, record=True)
    endpoint = endpoint_certificate(space)
    if endpoint is not None:
        return endpoint

    cert = find_cut(log.non_free_segments, pi.n, sigma.n, index_factory)
    if cert is not None:
        return cert

    logger.debug(
        f"no cut among {len(log.non_free_segments)} recorded segments, "
        "harvesting the full diagram"
    )
    space.sweep()
    assert space.non_free is not None
    harvested = [*log.non_free_segments, *space.non_free.values()]
    cert = find_cut(harvested, pi.n, sigma.n, index_factory)
    if cert is None:
        msg = f"No cut found among {len(harvested)} non-free segments."
        raise CutNotFoundError(msg)
    return cert


###############
# File format #
###############


def format_certificate(cert: Certificate, n: int, m: int, delta: float) -> str:
    lines = [cert.kind, f"{n} {m} {delta!r}"]
    lines.extend(f"{pp.p!r} {pp.q!r}" for pp in cert.points)
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> tuple[Certificate, int, int, float]:
    """Parse a certificate file, returning the certificate, n, m and delta."""
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if len(lines) < 2 or lines[0] not in fcc.CERTIFICATE_KINDS:  # noqa: PLR2004
        msg = "A certificate starts with YES or NO followed by 'n m delta'."
        raise CertificateFormatError(msg)
    try:
        n_text, m_text, delta_text = lines[1].split()
        n, m, delta = int(n_text), int(m_text), float(delta_text)
        points = []
        for line in lines[2:]:
            p_text, q_text = line.split()
            points.append(ParamPair(float(p_text), float(q_text)))
    except ValueError as e:
        msg = f"Malformed certificate line: {e}"
        raise CertificateFormatError(msg) from e
    return Certificate(lines[0], tuple(points)), n, m, delta


def save_certificate(
    cert: Certificate, n: int, m: int, delta: float, output_path: str | Path
) -> None:
    touch(output_path, clobber=True)
    Path(output_path).write_text(format_certificate(cert, n, m, delta))


def load_certificate(path: str | Path) -> tuple[Certificate, int, int, float]:
    return parse_certificate(Path(path).read_text(encoding="utf-8"))


#######
# CLI #
#######


def check_certificate_file_main(
    curve_a: str, curve_b: str, delta: float, cert_path: str
) -> int:
    pi = clio.read_curve(curve_a)
    sigma = clio.read_curve(curve_b)
    try:
        cert, n, m, cert_delta = load_certificate(cert_path)
    except (CertificateFormatError, UnicodeDecodeError, OSError) as e:
        msg = f"Cannot read certificate {cert_path}: {e}"
        raise clio.InputError(msg) from e
    if (n, m) != (pi.n, sigma.n) or cert_delta != delta:
        logger.warning(
            f"certificate header '{n} {m} {cert_delta!r}' does not match the "
            f"instance '{pi.n} {sigma.n} {delta!r}'"
        )
    result = check_certificate(pi, sigma, delta, cert)
    click.echo(result.describe())
    return 0 if result.accepted else 1


@click.command()  # type: ignore[arg-type]
@click.argument("curve_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("curve_b", type=click.Path(exists=True, dir_okay=False))
@click.argument("delta", type=click.FloatRange(min=0))
@click.argument("cert_path", type=click.Path(exists=True, dir_okay=False))
@clio.with_verbose()
def check_certificate_file(
    curve_a: str, curve_b: str, delta: float, cert_path: str, verbose: int
) -> None:
    """Check a YES or NO certificate for the instance (CURVE_A, CURVE_B, DELTA)."""
    clio.configure_logging(verbose)
    sys.exit(check_certificate_file_main(curve_a, curve_b, delta, cert_path))
