"""
Decider
-------

The high-level Frechet decider: the endpoint check, the filters and finally the
complete decider, each only consulted when everything before it was inconclusive.
On request the decider also returns a certificate for its answer. The exact
distance is computed by a binary search over the decider.
"""

import math
import sys
import time
from dataclasses import dataclass

import click
from loguru import logger
from pydantic import BaseModel, ConfigDict, field_validator

from frechet_certify import cli_options as clio
from frechet_certify import constants as fcc
from frechet_certify.certify import certificates as fcert
from frechet_certify.certify.checker import Certificate
from frechet_certify.curves import Curve, bbox_max_sq_dist
from frechet_certify.decide.complete import BoxRecord, ExplorationLog, explore
from frechet_certify.decide.filters import (
    FilterVerdict,
    bbox_filter,
    equal_time_filter,
    greedy_filter,
    negative_filter,
)
from frechet_certify.decide.freespace import FreeSpace
from frechet_certify.geometry import dist


class DeciderConfig(BaseModel):
    """Which parts of the decider run.

    With ``use_complete`` off the decider only runs the endpoint check and the
    filters and answers "unknown" when they are inconclusive.
    """

    model_config = ConfigDict(frozen=True)

    use_filters: bool = True
    use_complete: bool = True
    disabled_rules: frozenset[str] = frozenset()

    @field_validator("disabled_rules")
    @classmethod
    def _known_rules(cls, value: frozenset[str]) -> frozenset[str]:
        unknown = value - set(fcc.RULES)
        if unknown:
            msg = f"Unknown pruning rules: {sorted(unknown)}"
            raise ValueError(msg)
        return value

    @property
    def label(self) -> str:
        if not self.use_complete:
            return "filters-only"
        parts = [] if self.use_filters else ["no-filters"]
        parts.extend(f"no-{rule}" for rule in fcc.RULES if rule in self.disabled_rules)
        return "+".join(parts) or "all"

    @classmethod
    def from_ablation(cls, label: str) -> "DeciderConfig":
        if label == "all":
            return cls()
        if label == "filters-only":
            return cls(use_complete=False)
        disabled: set[str] = set()
        use_filters = True
        for part in label.split("+"):
            if part == "no-filters":
                use_filters = False
            elif part.startswith("no-") and part[3:] in fcc.RULES:
                disabled.add(part[3:])
            else:
                msg = f"Unknown ablation {label!r}."
                raise ValueError(msg)
        return cls(use_filters=use_filters, disabled_rules=frozenset(disabled))

    def rule_enabled(self, rule: str) -> bool:
        return rule not in self.disabled_rules


DEFAULT_CONFIG = DeciderConfig()


@dataclass(frozen=True)
class DecideStats:
    stage: str
    boxes: int = 0
    max_depth: int = 0
    time_ns: int = 0


@dataclass(frozen=True)
class DecideResult:
    verdict: str
    certificate: Certificate | None
    stats: DecideStats
    log: ExplorationLog | None = None

    @property
    def is_close(self) -> bool:
        return self.verdict == fcc.VERDICTS.close


def _run_filters(
    pi: Curve,
    sigma: Curve,
    delta: float,
    space: FreeSpace,
) -> tuple[str, FilterVerdict] | None:
    verdict = bbox_filter(pi, sigma, delta)
    if verdict.decided:
        return fcc.STAGES.bbox, verdict
    greedy = greedy_filter(pi, sigma, delta)
    if greedy.decided:
        return fcc.STAGES.greedy, greedy
    verdict = equal_time_filter(pi, sigma, delta)
    if verdict.decided:
        return fcc.STAGES.equal_time, verdict
    assert greedy.stuck is not None
    verdict = negative_filter(pi, sigma, delta, greedy.stuck, space)
    if verdict.decided:
        return fcc.STAGES.negative, verdict
    return None


def decide(
    pi: Curve,
    sigma: Curve,
    delta: float,
    want_certificate: bool = False,
    config: DeciderConfig = DEFAULT_CONFIG,
    *,
    dump_boxes: bool = False,
) -> DecideResult:
    """Decide whether the Frechet distance of pi and sigma is at most delta.

    Parameters
    ----------
    pi, sigma
        The curves.
    delta
        Distance threshold, non-negative.
    want_certificate
        Attach a YES or NO certificate to the answer.
    config
        Which filters and pruning rules to use.
    dump_boxes
        Keep the box tree explored by the complete decider in the returned log.

    Returns
    -------
    DecideResult
        The verdict ("close", "far", or "unknown" when the complete decider is
        disabled), the certificate if requested and the statistics of the call.
    """
    start = time.perf_counter_ns()
    space = FreeSpace(pi, sigma, delta, record=want_certificate)
    n, m = pi.n, sigma.n
    certificate: Certificate | None = None
    log: ExplorationLog | None = None

    endpoint = fcert.endpoint_certificate(space)
    if endpoint is not None:
        stage, verdict = fcc.STAGES.endpoints, fcc.VERDICTS.far
        certificate = endpoint
    else:
        decided = _run_filters(pi, sigma, delta, space) if config.use_filters else None
        if decided is not None:
            stage, filter_verdict = decided
            verdict = filter_verdict.value
            if want_certificate:
                certificate = fcert.certificate_from_filter(filter_verdict, n, m)
        elif config.use_complete:
            stage = fcc.STAGES.complete
            verdict, log = explore(space, config.disabled_rules, dump_boxes=dump_boxes)
            if want_certificate and verdict == fcc.VERDICTS.close:
                certificate = fcert.build_yes_certificate(log, n, m)
            elif want_certificate:
                certificate = fcert.build_no_certificate(log, pi, sigma, delta)
        else:
            stage, verdict = fcc.NO_STAGE, fcc.VERDICTS.unknown

    stats = DecideStats(
        stage=stage,
        boxes=log.boxes_visited if log is not None else 0,
        max_depth=log.max_depth if log is not None else 0,
        time_ns=time.perf_counter_ns() - start,
    )
    logger.debug(f"decide n={n} m={m} delta={delta!r}: {verdict} at {stage}")
    return DecideResult(
        verdict=verdict,
        certificate=certificate if want_certificate else None,
        stats=stats,
        log=log,
    )


def compute_distance(
    pi: Curve,
    sigma: Curve,
    rel_tol: float = fcc.DEFAULT_REL_TOL,
    abs_tol: float | None = None,
    config: DeciderConfig = DEFAULT_CONFIG,
) -> float:
    """Approximate the Frechet distance by binary search over the decider.

    The search starts from the bracket [larger endpoint distance, farthest
    bounding box distance] and returns a threshold the decider answers close for,
    while max(d * (1 - rel_tol), d - abs_tol) is answered far. ``abs_tol``
    defaults to a tiny fraction of the upper bracket.
    """

    def close(delta: float) -> bool:
        return decide(pi, sigma, delta, config=config).is_close

    lo = max(dist(pi.start, sigma.start), dist(pi.end, sigma.end))
    if close(lo):
        return lo
    hi_sq = bbox_max_sq_dist(pi.bbox, sigma.bbox)
    hi = math.sqrt(hi_sq)
    while hi * hi < hi_sq:
        hi = math.nextafter(hi, math.inf)
    if abs_tol is None:
        abs_tol = fcc.DEFAULT_ABS_TOL_FACTOR * hi

    while hi - lo > min(rel_tol * hi, abs_tol):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if close(mid):
            hi = mid
        else:
            lo = mid
    return hi


#######
# CLI #
#######


def format_boxes(boxes: list[BoxRecord]) -> str:
    return "".join(box.to_line() + "\n" for box in boxes)


def decide_pair_main(
    curve_a: str,
    curve_b: str,
    delta: float,
    *,
    certify: bool = False,
    cert_out: str | None = None,
    config: DeciderConfig = DEFAULT_CONFIG,
    dump_boxes: str | None = None,
) -> int:
    pi = clio.read_curve(curve_a)
    sigma = clio.read_curve(curve_b)
    want_certificate = certify or cert_out is not None
    result = decide(
        pi,
        sigma,
        delta,
        want_certificate,
        config,
        dump_boxes=dump_boxes is not None,
    )
    click.echo(result.verdict)
    if result.certificate is not None and cert_out is not None:
        fcert.save_certificate(result.certificate, pi.n, sigma.n, delta, cert_out)
    elif result.certificate is not None:
        text = fcert.format_certificate(result.certificate, pi.n, sigma.n, delta)
        click.echo(text, nl=False)
    if dump_boxes is not None:
        boxes = result.log.boxes if result.log is not None else None
        clio.write_text(dump_boxes, format_boxes(boxes or []))
    logger.info(
        f"stage={result.stats.stage} boxes={result.stats.boxes} "
        f"time_ns={result.stats.time_ns}"
    )
    return 0 if result.is_close else 1


@click.command()  # type: ignore[arg-type]
@click.argument("curve_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("curve_b", type=click.Path(exists=True, dir_okay=False))
@click.argument("delta", type=click.FloatRange(min=0))
@click.option("--certify", is_flag=True, help="Print a certificate for the answer.")
@click.option(
    "--cert-out",
    type=click.Path(dir_okay=False),
    help="Write the certificate to this file instead of stdout.",
)
@clio.with_no_filters()
@clio.with_disable_rule()
@click.option(
    "--dump-boxes",
    type=click.Path(dir_okay=False),
    help="Write the explored box tree, one 'i i2 j j2 rule' line per box.",
)
@clio.with_verbose()
def decide_pair(
    curve_a: str,
    curve_b: str,
    delta: float,
    certify: bool,
    cert_out: str | None,
    no_filters: bool,
    disable_rule: tuple[str, ...],
    dump_boxes: str | None,
    verbose: int,
) -> None:
    """Decide whether the Frechet distance of two curves is at most DELTA."""
    clio.configure_logging(verbose)
    config = DeciderConfig(
        use_filters=not no_filters, disabled_rules=frozenset(disable_rule)
    )
    sys.exit(
        decide_pair_main(
            curve_a,
            curve_b,
            delta,
            certify=certify,
            cert_out=cert_out,
            config=config,
            dump_boxes=dump_boxes,
        )
    )


@click.command()  # type: ignore[arg-type]
@click.argument("curve_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("curve_b", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--rel-tol",
    type=click.FloatRange(min=0, min_open=True),
    default=fcc.DEFAULT_REL_TOL,
    show_default=True,
    help="Relative tolerance of the binary search.",
)
@click.option(
    "--abs-tol",
    type=click.FloatRange(min=0, min_open=True),
    default=None,
    help="Absolute tolerance of the binary search. Defaults to a tiny fraction "
    "of the largest bounding box distance.",
)
@clio.with_verbose()
def frechet_distance(
    curve_a: str,
    curve_b: str,
    rel_tol: float,
    abs_tol: float | None,
    verbose: int,
) -> None:
    """Compute the Frechet distance of two curves by binary search."""
    clio.configure_logging(verbose)
    pi = clio.read_curve(curve_a)
    sigma = clio.read_curve(curve_b)
    click.echo(repr(compute_distance(pi, sigma, rel_tol, abs_tol)))
