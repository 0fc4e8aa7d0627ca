from collections.abc import Callable, Iterator
from pathlib import Path

import numpy as np
import pytest

from frechet_certify.bench.synthetic import random_walk_curve
from frechet_certify.curves import Curve

FIXTURES = Path(__file__).parent / "fixtures"

CurvePairs = Callable[[int], Iterator[tuple[Curve, Curve, float]]]


def make_curve(*points: tuple[float, float], curve_id: str = "") -> Curve:
    return Curve.from_points(points, curve_id=curve_id)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def random_instances(rng: np.random.Generator) -> CurvePairs:
    """Random-walk pairs with n, m <= 12 and thresholds around their scale.

    Both walks start at the origin; every other sigma is moved so that the end
    points coincide instead.
    """

    def instances(count: int) -> Iterator[tuple[Curve, Curve, float]]:
        for k in range(count):
            n = int(rng.integers(1, 13))
            m = int(rng.integers(1, 13))
            pi = random_walk_curve(rng, n, "pi")
            sigma = random_walk_curve(rng, m, "sigma")
            if k % 2:
                shift = np.asarray(pi.end) - np.asarray(sigma.end)
                sigma = make_curve(
                    *((x + shift[0], y + shift[1]) for x, y in sigma.vertices),
                    curve_id="sigma",
                )
            delta = float(rng.uniform(0.25, 4.0))
            yield pi, sigma, delta

    return instances
