"""
Synthetic Curves
----------------

Random-walk curves for tests and benchmarks. A dataset is a sequence of clusters:
each cluster perturbs one base walk with growing noise and resamples every copy to
its own vertex count, so that every query curve has near neighbors at many
different distances.
"""

from pathlib import Path

import click
import numpy as np
from loguru import logger

from frechet_certify import cli_options as clio
from frechet_certify.curves import Curve, resample
from frechet_certify.data import BenchmarkData
from frechet_certify.geometry import Point

STEP_DISTRIBUTIONS = ("normal", "uniform", "exponential")


def _steps(
    rng: np.random.Generator, count: int, step_scale: float, distribution: str
) -> np.ndarray:
    if distribution == "normal":
        return rng.normal(scale=step_scale, size=(count, 2))
    angles = rng.uniform(0.0, 2 * np.pi, size=count)
    if distribution == "uniform":
        lengths = rng.uniform(0.0, 2 * step_scale, size=count)
    elif distribution == "exponential":
        lengths = rng.exponential(step_scale, size=count)
    else:
        msg = f"Unknown step distribution {distribution!r}."
        raise ValueError(msg)
    return np.column_stack([lengths * np.cos(angles), lengths * np.sin(angles)])


def random_walk(
    rng: np.random.Generator,
    n: int,
    *,
    step_scale: float = 1.0,
    distribution: str = "normal",
    origin: tuple[float, float] = (0.0, 0.0),
) -> np.ndarray:
    """Vertices of an n-vertex random walk as an (n, 2) array."""
    steps = _steps(rng, n - 1, step_scale, distribution)
    walk = np.vstack([np.zeros((1, 2)), np.cumsum(steps, axis=0)])
    return walk + np.asarray(origin)


def random_walk_curve(
    rng: np.random.Generator,
    n: int,
    curve_id: str = "",
    *,
    step_scale: float = 1.0,
    distribution: str = "normal",
) -> Curve:
    walk = random_walk(rng, n, step_scale=step_scale, distribution=distribution)
    return Curve.from_points(
        [(float(x), float(y)) for x, y in walk], curve_id=curve_id
    )


def generate_clustered_dataset(
    num_curves: int,
    seed: int,
    *,
    cluster_size: int = 8,
    min_vertices: int = 5,
    max_vertices: int = 60,
    base_vertices: int | None = None,
    step_scale: float = 1.0,
    noise: float = 0.05,
    distribution: str = "normal",
) -> list[Curve]:
    """Generate clusters of perturbed random walks.

    Parameters
    ----------
    num_curves
        Total number of curves.
    seed
        Seed of the PCG64 generator.
    cluster_size
        Number of curves derived from one base walk.
    min_vertices, max_vertices
        Range of vertex counts, both inclusive.
    base_vertices
        Vertex count of every base walk. By default it is drawn from the vertex
        range like the copies. A small count with a large vertex range gives
        densely sampled curves whose free space is many cells wide.
    step_scale
        Scale of the step lengths of the base walks.
    noise
        Standard deviation of the vertex noise of the first copy in a cluster; the
        c-th copy uses c times this value.
    distribution
        Step length distribution of the base walks, one of ``STEP_DISTRIBUTIONS``.

    Returns
    -------
    list[Curve]
        The curves, with ids ``curves/cNNNNN.txt``.
    """
    rng = np.random.default_rng(seed)
    curves: list[Curve] = []
    while len(curves) < num_curves:
        base_n = (
            int(rng.integers(min_vertices, max_vertices + 1))
            if base_vertices is None
            else base_vertices
        )
        origin = rng.uniform(-10 * step_scale, 10 * step_scale, size=2)
        base = random_walk(
            rng,
            base_n,
            step_scale=step_scale,
            distribution=distribution,
            origin=(float(origin[0]), float(origin[1])),
        )
        for copy in range(min(cluster_size, num_curves - len(curves))):
            perturbed = base + rng.normal(scale=noise * (copy + 1), size=base.shape)
            n = int(rng.integers(min_vertices, max_vertices + 1))
            points = [Point(float(x), float(y)) for x, y in perturbed]
            curves.append(
                Curve.from_points(
                    resample(points, n), curve_id=f"curves/c{len(curves):05d}.txt"
                )
            )
    return curves


def generate_synthetic_main(
    out_dir: str | Path,
    num_curves: int,
    seed: int,
    *,
    cluster_size: int = 8,
    min_vertices: int = 5,
    max_vertices: int = 60,
    base_vertices: int | None = None,
    distribution: str = "normal",
) -> Path:
    curves = generate_clustered_dataset(
        num_curves,
        seed,
        cluster_size=cluster_size,
        min_vertices=min_vertices,
        max_vertices=max_vertices,
        base_vertices=base_vertices,
        distribution=distribution,
    )
    header: dict[str, object] = {
        "seed": seed,
        "num_curves": num_curves,
        "cluster_size": cluster_size,
        "vertices": f"{min_vertices}-{max_vertices}",
        "base_vertices": "drawn" if base_vertices is None else base_vertices,
        "distribution": distribution,
    }
    path = BenchmarkData(out_dir).save_dataset(curves, header)
    logger.info(f"wrote {len(curves)} curves to {path}")
    return path


@click.command()  # type: ignore[arg-type]
@click.option(
    "--out-dir",
    type=click.Path(file_okay=False),
    required=True,
    help="Directory for the curve files and the dataset file.",
)
@click.option(
    "--num-curves",
    type=click.IntRange(min=1),
    required=True,
    help="Number of curves to generate.",
)
@clio.with_seed()
@click.option(
    "--cluster-size",
    type=click.IntRange(min=1),
    default=8,
    show_default=True,
    help="Number of perturbed copies of each base walk.",
)
@click.option(
    "--min-vertices",
    type=click.IntRange(min=1),
    default=5,
    show_default=True,
)
@click.option(
    "--max-vertices",
    type=click.IntRange(min=1),
    default=60,
    show_default=True,
)
@click.option(
    "--base-vertices",
    type=click.IntRange(min=2),
    default=None,
    help="Vertex count of the base walks, drawn like the copies when omitted.",
)
@click.option(
    "--distribution",
    type=click.Choice(STEP_DISTRIBUTIONS),
    default="normal",
    show_default=True,
    help="Step length distribution of the base walks.",
)
@clio.with_overwrite()
@clio.with_verbose()
def generate_synthetic(
    out_dir: str,
    num_curves: int,
    seed: int,
    cluster_size: int,
    min_vertices: int,
    max_vertices: int,
    base_vertices: int | None,
    distribution: str,
    overwrite: bool,
    verbose: int,
) -> None:
    """Write a synthetic dataset of clustered random-walk curves."""
    clio.configure_logging(verbose)
    if min_vertices > max_vertices:
        msg = "--min-vertices must not exceed --max-vertices."
        raise click.UsageError(msg)
    dataset_path = BenchmarkData(out_dir).dataset_path
    if dataset_path.exists() and not overwrite:
        msg = f"{dataset_path} exists, pass --overwrite to replace it."
        raise click.UsageError(msg)
    path = generate_synthetic_main(
        out_dir,
        num_curves,
        seed,
        cluster_size=cluster_size,
        min_vertices=min_vertices,
        max_vertices=max_vertices,
        base_vertices=base_vertices,
        distribution=distribution,
    )
    click.echo(str(path))
