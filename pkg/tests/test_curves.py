from pathlib import Path

import pytest

from frechet_certify.curves import (
    BBox,
    CurveEncodingError,
    EmptyCurveError,
    MalformedVertexError,
    bbox_max_sq_dist,
    format_curve,
    load_curve,
    load_dataset,
    parse_curve,
    point_at,
    read_dataset_paths,
    resample,
    subcurve_len,
)
from frechet_certify.geometry import Point
from tests.conftest import make_curve


def test_parse_skips_header_comments_and_blank_lines() -> None:
    c = parse_curve("x y\n0 0\n\n# comment\n3 4\n", curve_id="c")
    assert c.vertices == (Point(0, 0), Point(3, 4))
    assert c.curve_id == "c"


def test_parse_accepts_bytes_and_line_iterables() -> None:
    assert parse_curve(b"0 0\n1 1\n").n == 2  # noqa: PLR2004
    assert parse_curve(["0 0", "1 1", "2 2"]).n == 3  # noqa: PLR2004


@pytest.mark.parametrize(
    ("text", "line_number"),
    [
        ("0 0\n1 a\n", 2),
        ("0 0 0\n", 1),
        ("0 0\nheader\n", 2),
        ("x y\nnan 0\n", 2),
        ("0 inf\n", 1),
    ],
)
def test_parse_rejects_malformed_vertices(text: str, line_number: int) -> None:
    with pytest.raises(MalformedVertexError) as excinfo:
        parse_curve(text)
    assert excinfo.value.line_number == line_number


def test_parse_rejects_empty_curves() -> None:
    with pytest.raises(EmptyCurveError):
        parse_curve("x y\n# nothing here\n")


def test_parse_rejects_bytes_that_are_not_utf8(tmp_path: Path) -> None:
    with pytest.raises(CurveEncodingError):
        parse_curve(b"\xff\xfe 1 2\n")
    dataset = tmp_path / "dataset.txt"
    dataset.write_bytes(b"a.txt\n\xff\n")
    with pytest.raises(CurveEncodingError):
        read_dataset_paths(dataset)


def test_preprocessing_keeps_degenerate_segments() -> None:
    c = make_curve((0, 0), (3, 4), (3, 4), (0, 4))
    assert c.n == 4  # noqa: PLR2004
    assert c.prefix_len == (0.0, 5.0, 5.0, 8.0)
    assert c.bbox == BBox(0, 0, 3, 4)
    assert subcurve_len(c, 2, 4) == 3  # noqa: PLR2004
    assert subcurve_len(c, 3, 3) == 0


def test_point_at_continuous_indices() -> None:
    c = make_curve((0, 0), (2, 0), (2, 2))
    assert point_at(c, 1) == (0, 0)
    assert point_at(c, 1.5) == (1, 0)
    assert point_at(c, 2.25) == (2, 0.5)
    assert point_at(c, 3) == (2, 2)


def test_bbox_max_sq_dist() -> None:
    a = BBox(0, 0, 1, 1)
    b = BBox(3, 0, 4, 2)
    assert bbox_max_sq_dist(a, b) == 4 * 4 + 2 * 2
    assert bbox_max_sq_dist(b, a) == bbox_max_sq_dist(a, b)


def test_resample_by_arc_length() -> None:
    points = [Point(0, 0), Point(1, 0), Point(4, 0)]
    coords = [x for point in resample(points, 5) for x in point]
    assert coords == pytest.approx([0, 0, 1, 0, 2, 0, 3, 0, 4, 0])
    assert resample(points, 1) == [(0, 0)]


def test_format_curve_is_parseable() -> None:
    c = make_curve((0.1, 0.2), (1 / 3, 2 / 3))
    assert parse_curve(format_curve(c)).vertices == c.vertices


def test_load_curve_uses_the_path_as_id(fixtures_dir: Path) -> None:
    path = fixtures_dir / "a.txt"
    c = load_curve(path)
    assert c.curve_id == str(path)
    assert c.n == 6  # noqa: PLR2004


def test_load_dataset_resolves_relative_paths(fixtures_dir: Path) -> None:
    path = fixtures_dir / "dataset.txt"
    entries = read_dataset_paths(path)
    assert entries[:2] == ["a.txt", "curves/a_shifted.txt"]
    dataset = load_dataset(path)
    assert [c.curve_id for c in dataset] == entries
    assert dataset[0].vertices == load_curve(fixtures_dir / "a.txt").vertices
