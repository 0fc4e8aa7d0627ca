"""
Near Neighbors
--------------

Range queries over a dataset of curves: all curves within Frechet distance delta
of a query curve. Candidates come from the kd-tree over curve keys and each one is
confirmed by the decider, with the candidates spread over worker processes.
"""

from collections.abc import Sequence

import click
import numpy as np
from loguru import logger
from rra_tools import parallel

from frechet_certify import cli_options as clio
from frechet_certify.curves import Curve
from frechet_certify.decide.decider import DEFAULT_CONFIG, DeciderConfig, decide
from frechet_certify.query.kdtree import FloatArray, KdTree8, curve_key

# Relative widening of the query box, so that rounding in the key arithmetic
# never drops a curve the decider would accept.
_BOX_SLACK = 1e-9


def build_index(dataset: Sequence[Curve]) -> KdTree8:
    if not dataset:
        msg = "Cannot index an empty dataset."
        raise ValueError(msg)
    return KdTree8.from_curves(dataset)


def _query_box(pi: Curve, delta: float) -> tuple[FloatArray, FloatArray]:
    key = curve_key(pi)
    pad = delta * (1 + _BOX_SLACK)
    return np.nextafter(key - pad, -np.inf), np.nextafter(key + pad, np.inf)


def candidate_indices(tree: KdTree8, pi: Curve, delta: float) -> list[int]:
    return tree.range_query(*_query_box(pi, delta))


def candidates(tree: KdTree8, pi: Curve, delta: float) -> set[str]:
    """Ids of all curves whose key lies within delta of the key of pi."""
    return {tree.ids[k] for k in candidate_indices(tree, pi, delta)}


def _is_close(args: tuple[Curve, Curve, float, DeciderConfig]) -> bool:
    pi, sigma, delta, config = args
    return decide(pi, sigma, delta, config=config).is_close


def find_close_curves(
    tree: KdTree8,
    dataset: Sequence[Curve],
    pi: Curve,
    delta: float,
    *,
    num_cores: int = 1,
    config: DeciderConfig = DEFAULT_CONFIG,
    progress_bar: bool = False,
) -> list[str]:
    """Ids of the dataset curves within Frechet distance delta of pi, in dataset order.

    Parameters
    ----------
    tree
        Index built over ``dataset``.
    dataset
        The indexed curves.
    pi
        The query curve.
    delta
        Distance threshold.
    num_cores
        Number of worker processes deciding candidates.
    config
        Decider configuration used for every candidate.
    progress_bar
        Show a progress bar over the candidates.

    Returns
    -------
    list[str]
        Ids of the close curves.
    """
    indices = candidate_indices(tree, pi, delta)
    verdicts = parallel.run_parallel(
        _is_close,
        [(pi, dataset[k], delta, config) for k in indices],
        num_cores=num_cores,
        progress_bar=progress_bar,
    )
    close = [
        dataset[k].curve_id for k, ok in zip(indices, verdicts, strict=True) if ok
    ]
    logger.debug(f"query: {len(indices)} candidates, {len(close)} close")
    return close


#######
# CLI #
#######


def query_dataset_main(
    dataset_path: str, query_curve: str, delta: float, num_cores: int
) -> list[str]:
    dataset = clio.read_dataset(dataset_path)
    if not dataset:
        msg = f"Dataset {dataset_path} lists no curves."
        raise clio.InputError(msg)
    pi = clio.read_curve(query_curve)
    tree = build_index(dataset)
    return find_close_curves(tree, dataset, pi, delta, num_cores=num_cores)


@click.command()  # type: ignore[arg-type]
@clio.with_dataset()
@click.option(
    "--query-curve",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="Curve file of the query.",
)
@click.option(
    "--delta",
    type=click.FloatRange(min=0),
    required=True,
    help="Distance threshold.",
)
@clio.with_threads()
@clio.with_verbose()
def query_dataset(
    dataset: str, query_curve: str, delta: float, threads: int, verbose: int
) -> None:
    """Print the ids of all dataset curves within Frechet distance DELTA."""
    clio.configure_logging(verbose)
    for curve_id in query_dataset_main(dataset, query_curve, delta, threads):
        click.echo(curve_id)
