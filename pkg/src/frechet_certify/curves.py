"""
Curves
------

Polygonal curves with the single-pass preprocessing the deciders rely on: prefix
lengths, so that the length of any subcurve between two vertices is a constant time
difference, and the bounding box.

Indices are 1-based and continuous: ``p = i + lam`` denotes the point at fraction
``lam`` along the segment from vertex ``i`` to vertex ``i + 1``.
"""

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

from frechet_certify.geometry import Point, Segment, dist, interpolate


class EmptyCurveError(ValueError):
    pass


class CurveEncodingError(ValueError):
    """A curve or dataset file that is not UTF-8 text."""


class MalformedVertexError(ValueError):
    def __init__(self, line_number: int, line: str) -> None:
        self.line_number = line_number
        self.line = line
        msg = f"Line {line_number} is not a vertex of two reals: {line!r}"
        super().__init__(msg)


class BBox(NamedTuple):
    min_x: float
    min_y: float
    max_x: float
    max_y: float


@dataclass(frozen=True)
class Curve:
    vertices: tuple[Point, ...]
    prefix_len: tuple[float, ...]
    bbox: BBox
    curve_id: str = ""

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def start(self) -> Point:
        return self.vertices[0]

    @property
    def end(self) -> Point:
        return self.vertices[-1]

    @property
    def length(self) -> float:
        return self.prefix_len[-1]

    @classmethod
    def from_points(
        cls, points: Iterable[tuple[float, float]], curve_id: str = ""
    ) -> "Curve":
        """Build a curve, computing prefix lengths and the bounding box in one pass."""
        vertices: list[Point] = []
        prefix_len: list[float] = []
        min_x = min_y = math.inf
        max_x = max_y = -math.inf
        for x, y in points:
            point = Point(float(x), float(y))
            if vertices:
                prefix_len.append(prefix_len[-1] + dist(vertices[-1], point))
            else:
                prefix_len.append(0.0)
            vertices.append(point)
            min_x, max_x = min(min_x, point.x), max(max_x, point.x)
            min_y, max_y = min(min_y, point.y), max(max_y, point.y)
        if not vertices:
            msg = f"Curve {curve_id!r} has no vertices."
            raise EmptyCurveError(msg)
        return cls(
            vertices=tuple(vertices),
            prefix_len=tuple(prefix_len),
            bbox=BBox(min_x, min_y, max_x, max_y),
            curve_id=curve_id,
        )


def _parse_pair(line: str) -> tuple[float, float] | None:
    tokens = line.split()
    values: list[float | None] = []
    for token in tokens:
        try:
            values.append(float(token))
        except ValueError:
            values.append(None)
    if all(v is None for v in values):
        return None
    if len(values) != 2 or None in values:  # noqa: PLR2004
        raise ValueError
    x, y = values
    assert x is not None
    assert y is not None
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError
    return x, y


def _decode(data: bytes, source: str) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        msg = f"{source} is not UTF-8 text (byte {e.start})"
        raise CurveEncodingError(msg) from e


def parse_curve(text: str | bytes | Iterable[str], curve_id: str = "") -> Curve:
    """Parse a curve from "x y" lines.

    Blank lines and lines starting with '#' are ignored. A single non-numeric line
    before the first vertex is treated as a header and skipped.

    Parameters
    ----------
    text
        The curve file contents, or an iterable of its lines.
    curve_id
        Identifier to attach to the curve.

    Returns
    -------
    Curve
        The parsed and preprocessed curve.
    """
    if isinstance(text, bytes):
        text = _decode(text, curve_id or "curve")
    lines = text.splitlines() if isinstance(text, str) else text

    points: list[tuple[float, float]] = []
    header_allowed = True
    for line_number, raw_line in enumerate(lines, start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            pair = _parse_pair(line)
        except ValueError as e:
            raise MalformedVertexError(line_number, raw_line) from e
        if pair is None:
            if header_allowed:
                header_allowed = False
                continue
            raise MalformedVertexError(line_number, raw_line)
        header_allowed = False
        points.append(pair)
    return Curve.from_points(points, curve_id=curve_id)


def load_curve(path: str | Path, curve_id: str | None = None) -> Curve:
    path = Path(path)
    return parse_curve(
        path.read_bytes(), curve_id=str(path) if curve_id is None else curve_id
    )


def read_dataset_paths(path: str | Path) -> list[str]:
    """Read the curve paths listed in a dataset file, in file order."""
    entries = []
    for raw_line in _decode(Path(path).read_bytes(), str(path)).splitlines():
        line = raw_line.strip()
        if line and not line.startswith("#"):
            entries.append(line)
    return entries


def load_dataset(path: str | Path) -> list[Curve]:
    """Load every curve of a dataset file.

    Curve paths are resolved relative to the dataset file and the curve id is the
    path exactly as listed.
    """
    path = Path(path)
    return [
        load_curve(path.parent / entry, curve_id=entry)
        for entry in read_dataset_paths(path)
    ]


def format_curve(curve: Curve) -> str:
    return "".join(f"{v.x!r} {v.y!r}\n" for v in curve.vertices)


def segment(c: Curve, i: int) -> Segment:
    """The segment from vertex i to vertex i + 1."""
    return Segment(c.vertices[i - 1], c.vertices[i])


def point_at(c: Curve, p: float) -> Point:
    i = int(p)
    if i >= c.n:
        return c.vertices[-1]
    if p == i:
        return c.vertices[i - 1]
    return interpolate(Segment(c.vertices[i - 1], c.vertices[i]), p - i)


def subcurve_len(c: Curve, i: int, i2: int) -> float:
    return c.prefix_len[i2 - 1] - c.prefix_len[i - 1]


def bbox_max_sq_dist(a: BBox, b: BBox) -> float:
    """Squared distance between the farthest points of two bounding boxes."""
    dx = max(a.max_x - b.min_x, b.max_x - a.min_x)
    dy = max(a.max_y - b.min_y, b.max_y - a.min_y)
    return dx * dx + dy * dy


def resample(points: Sequence[Point], n: int) -> list[Point]:
    """Place n vertices evenly by arc length along a polyline."""
    curve = Curve.from_points(points)
    if n == 1 or curve.n == 1:
        return [curve.start] * n
    vertices = []
    i = 1
    for k in range(n):
        target = curve.length * k / (n - 1)
        while i < curve.n - 1 and curve.prefix_len[i] < target:
            i += 1
        seg_len = curve.prefix_len[i] - curve.prefix_len[i - 1]
        lam = 0.0 if seg_len == 0 else (target - curve.prefix_len[i - 1]) / seg_len
        vertices.append(interpolate(segment(curve, i), min(max(lam, 0.0), 1.0)))
    return vertices
