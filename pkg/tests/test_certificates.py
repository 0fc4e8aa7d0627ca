from pathlib import Path

import numpy as np
import pytest

from frechet_certify import constants as fcc
from frechet_certify.certify.certificates import (
    CertificateFormatError,
    build_no_certificate,
    build_yes_certificate,
    endpoint_certificate,
    find_cut,
    format_certificate,
    load_certificate,
    parse_certificate,
    save_certificate,
)
from frechet_certify.certify.checker import Certificate, check_certificate
from frechet_certify.certify.report_delete import LinearScanIndex, PrioritySearchTree
from frechet_certify.decide.complete import complete_decide
from frechet_certify.decide.freespace import BoundaryInterval, FreeSpace
from frechet_certify.geometry import ParamPair
from tests.conftest import CurvePairs, make_curve

YES = fcc.CERTIFICATE_KINDS.yes
NO = fcc.CERTIFICATE_KINDS.no
REASONS = fcc.REJECT_REASONS


def _cert(kind: str, *points: tuple[float, float]) -> Certificate:
    return Certificate(kind, tuple(ParamPair(*pp) for pp in points))


###########
# Checker #
###########


def test_yes_certificate_on_translated_segments() -> None:
    pi = make_curve((0, 0), (1, 0))
    sigma = make_curve((0, 1), (1, 1))
    cert = _cert(YES, (1, 1), (2, 2))
    assert check_certificate(pi, sigma, 1.0, cert).accepted
    rejected = check_certificate(pi, sigma, 0.5, cert)
    assert rejected == (False, REASONS.non_free_point, 0)


@pytest.mark.parametrize(
    ("points", "reason", "index"),
    [
        (((1, 2), (3, 3)), REASONS.bad_start, 0),
        (((1, 1), (3, 2)), REASONS.bad_end, 1),
        (((1, 1), (2, 1), (1.5, 1), (3, 3)), REASONS.non_monotone_step, 1),
        (((1, 1), (3, 3)), REASONS.cell_violation, 0),
        (((1, 1), (1, 4), (3, 3)), REASONS.out_of_range, 1),
    ],
)
def test_yes_certificate_rejections(
    points: tuple[tuple[float, float], ...], reason: str, index: int
) -> None:
    pi = make_curve((0, 0), (1, 0), (2, 0))
    result = check_certificate(pi, pi, 5.0, _cert(YES, *points))
    assert result == (False, reason, index)
    assert result.describe() == f"reject {reason} {index}"


def test_yes_step_through_a_non_free_vertex_is_rejected() -> None:
    pi = make_curve((0, 0), (1, 0))
    sigma = make_curve((0, 0), (0, 5), (0, 0))
    cert = _cert(YES, (1, 1), (1, 3), (2, 3))
    result = check_certificate(pi, sigma, 1.0, cert)
    assert result == (False, REASONS.non_free_point, 0)


def test_wrong_kind_is_rejected() -> None:
    pi = make_curve((0, 0), (1, 0))
    result = check_certificate(pi, pi, 1.0, _cert("MAYBE", (1, 1), (2, 2)))
    assert result.reason == REASONS.wrong_kind


def test_single_point_no_certificate() -> None:
    pi = make_curve((0, 0), (1, 0))
    sigma = make_curve((0, 5), (1, 5))
    assert check_certificate(pi, sigma, 1.0, _cert(NO, (1, 1))).accepted
    assert check_certificate(pi, sigma, 1.0, _cert(NO, (2, 2))).accepted
    assert not check_certificate(pi, sigma, 6.0, _cert(NO, (1, 1))).accepted


@pytest.mark.parametrize(
    ("sigma_points", "corner"),
    [
        (((0, 5), (0, 0), (1, 0)), (1, 1)),
        (((0, 0), (1, 0), (1, 5)), (2, 3)),
    ],
)
def test_endpoint_certificate_is_one_corner(
    sigma_points: tuple[tuple[float, float], ...], corner: tuple[int, int]
) -> None:
    pi = make_curve((0, 0), (1, 0))
    sigma = make_curve(*sigma_points)
    cert = endpoint_certificate(FreeSpace(pi, sigma, 1.0))
    assert cert == _cert(NO, corner)
    assert check_certificate(pi, sigma, 1.0, cert).accepted


def test_endpoint_certificate_needs_a_non_free_corner() -> None:
    pi = make_curve((0, 0), (1, 0))
    sigma = make_curve((0, 0), (0.5, 3), (1, 0))
    assert endpoint_certificate(FreeSpace(pi, sigma, 1.0)) is None


def test_no_certificate_row() -> None:
    pi = make_curve((0, 0), (0, 0.1))
    sigma = make_curve((0, 0), (10, 10), (0, 0))
    cert = _cert(NO, (2, 2), (1, 2))
    assert check_certificate(pi, sigma, 1.0, cert).accepted
    reversed_cert = _cert(NO, (1, 2), (2, 2))
    assert check_certificate(pi, sigma, 1.0, reversed_cert).reason == REASONS.bad_start


def test_no_certificate_with_free_piece_is_rejected() -> None:
    pi = make_curve((0, 0), (1, 0), (2, 0))
    sigma = make_curve((0, 0), (1, 0.5), (2, 0))
    cert = _cert(NO, (2, 1), (2, 3))
    assert check_certificate(pi, sigma, 0.1, cert).accepted
    result = check_certificate(pi, sigma, 0.6, cert)
    assert result == (False, REASONS.free_piece, 0)


################
# Construction #
################


def test_certificates_of_the_complete_decider(random_instances: CurvePairs) -> None:
    for pi, sigma, delta in random_instances(200):
        verdict, log = complete_decide(pi, sigma, delta, record=True)
        if verdict == fcc.VERDICTS.close:
            cert = build_yes_certificate(log, pi.n, sigma.n)
            assert cert.kind == YES
        else:
            cert = build_no_certificate(log, pi, sigma, delta)
            assert cert.kind == NO
        result = check_certificate(pi, sigma, delta, cert)
        assert result.accepted, (result.describe(), pi, sigma, delta)


def test_certificates_do_not_survive_a_threshold_change(
    random_instances: CurvePairs,
) -> None:
    for pi, sigma, delta in random_instances(100):
        verdict, log = complete_decide(pi, sigma, delta, record=True)
        if verdict == fcc.VERDICTS.close:
            cert = build_yes_certificate(log, pi.n, sigma.n)
            other_delta = delta / 4
        else:
            cert = build_no_certificate(log, pi, sigma, delta)
            other_delta = delta * 4
        other_verdict, _ = complete_decide(pi, sigma, other_delta)
        if other_verdict != verdict:
            assert not check_certificate(pi, sigma, other_delta, cert).accepted


def test_find_cut_without_segments() -> None:
    assert find_cut([], 3, 3) is None


def test_find_cut_chains_segments() -> None:
    vertical = fcc.AXES.vertical
    horizontal = fcc.AXES.horizontal
    segments = [
        BoundaryInterval(vertical, 1.2, 1.5, 3),
        BoundaryInterval(horizontal, 1.5, 1.2, 2),
        BoundaryInterval(vertical, 2, 1, 1.5),
    ]
    expected = ((2, 1), (2, 1.5), (1.2, 1.5), (1.2, 3))
    for factory in (PrioritySearchTree, LinearScanIndex):
        cert = find_cut(segments, 3, 3, factory)
        assert cert is not None
        assert cert.kind == NO
        assert cert.points == expected


def test_find_cut_without_a_seed() -> None:
    segments = [BoundaryInterval(fcc.AXES.vertical, 2, 1.5, 3)]
    assert find_cut(segments, 3, 3) is None


###########################
# Report-and-delete index #
###########################


def test_priority_search_tree_matches_linear_scan(rng: np.random.Generator) -> None:
    keys = [ParamPair(*map(float, rng.integers(0, 20, size=2))) for _ in range(300)]
    items = list(enumerate(keys))
    tree = PrioritySearchTree((key, k) for k, key in items)
    scan = LinearScanIndex((key, k) for k, key in items)
    assert len(tree) == len(scan) == 300  # noqa: PLR2004
    for _ in range(100):
        point = ParamPair(*map(float, rng.integers(0, 20, size=2)))
        assert sorted(tree.report_and_delete(point)) == sorted(
            scan.report_and_delete(point)
        )
        assert len(tree) == len(scan)


def test_report_and_delete_reports_once() -> None:
    tree = PrioritySearchTree([(ParamPair(2, 1), "a"), (ParamPair(1, 2), "b")])
    assert tree.report_and_delete(ParamPair(1, 1)) == ["a"]
    assert tree.report_and_delete(ParamPair(1, 1)) == []
    assert tree.report_and_delete(ParamPair(0, 5)) == ["b"]
    assert len(tree) == 0


###############
# File format #
###############


def test_certificate_file(tmp_path: Path) -> None:
    cert = _cert(YES, (1, 1), (1.5, 1), (2, 3))
    path = tmp_path / "cert.txt"
    save_certificate(cert, 2, 3, 0.25, path)
    assert path.read_text().splitlines()[:2] == ["YES", "2 3 0.25"]
    assert load_certificate(path) == (cert, 2, 3, 0.25)


@pytest.mark.parametrize(
    "text",
    ["", "MAYBE\n1 1 0.5\n", "YES\n1 1\n", "NO\n2 2 0.5\n1 x\n", "YES\n2 2 0.5\n1\n"],
)
def test_malformed_certificate_files(text: str) -> None:
    with pytest.raises(CertificateFormatError):
        parse_certificate(text)


def test_format_certificate_keeps_full_precision() -> None:
    cert = _cert(NO, (1 / 3, 1))
    text = format_certificate(cert, 2, 2, 0.1)
    assert parse_certificate(text)[0] == cert
