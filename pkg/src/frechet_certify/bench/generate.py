"""
Benchmark Generation
--------------------

Generators for the two benchmark settings.

Decider benchmarks: for a random query curve pi the dataset is ranked by Frechet
distance to pi. For every rank exponent k a curve sigma is drawn uniformly from
the ranks 2^k to 2^(k+1) - 1 (cut off at the dataset size) and, with the exact
distance d of the pair, two cases (1 - 2^l) * d and (1 + 2^l) * d are added for
every factor exponent l.

Query benchmarks: for a random query curve pi and every k, a threshold is chosen
at which a near-neighbor query returns exactly k + 1 curves (pi itself included).
"""

import math
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import NamedTuple

import click
import numpy as np
import pandas as pd
from loguru import logger
from rra_tools import parallel

from frechet_certify import cli_options as clio
from frechet_certify import constants as fcc
from frechet_certify.curves import Curve
from frechet_certify.data import save_cases
from frechet_certify.decide.decider import compute_distance
from frechet_certify.query.kdtree import KdTree8
from frechet_certify.query.near_neighbors import build_index, find_close_curves

_MAX_BISECTIONS = 100


class DatasetTooSmallError(ValueError):
    pass


class KUnreachableError(ValueError):
    def __init__(self, k: int, size: int) -> None:
        self.k = k
        msg = f"A query cannot return {k + 1} curves from a dataset of {size}."
        super().__init__(msg)


class DeciderBenchmarkCase(NamedTuple):
    case_id: str
    pi_id: str
    sigma_id: str
    delta: float
    k: int
    l: int  # noqa: E741
    side: str


class QueryBenchmarkCase(NamedTuple):
    case_id: str
    pi_id: str
    delta: float
    k: int


def _distance(args: tuple[Curve, Curve, float]) -> float:
    pi, sigma, rel_tol = args
    return compute_distance(pi, sigma, rel_tol)


def distances_to(
    pi: Curve,
    dataset: Sequence[Curve],
    rel_tol: float = fcc.DEFAULT_REL_TOL,
    *,
    num_cores: int = 1,
    progress_bar: bool = False,
) -> np.ndarray:
    """Frechet distance of pi to every dataset curve, in dataset order."""
    distances = parallel.run_parallel(
        _distance,
        [(pi, sigma, rel_tol) for sigma in dataset],
        num_cores=num_cores,
        progress_bar=progress_bar,
    )
    return np.asarray(distances, dtype=float)


def gen_decider_benchmark(
    dataset: Sequence[Curve],
    num_queries: int,
    seed: int,
    rel_tol: float = fcc.DEFAULT_REL_TOL,
    *,
    num_cores: int = 1,
    progress_bar: bool = False,
) -> list[DeciderBenchmarkCase]:
    """Generate decider benchmark cases around exact distances.

    Parameters
    ----------
    dataset
        The curves, at least two.
    num_queries
        Number of query curves drawn from the dataset.
    seed
        Seed of the PCG64 generator.
    rel_tol
        Relative tolerance of the distance computations.
    num_cores
        Number of worker processes computing distances.
    progress_bar
        Show a progress bar per query.

    Returns
    -------
    list[DeciderBenchmarkCase]
        ``num_queries * floor(log2 N) * 2 * len(DECIDER_FACTOR_EXPONENTS)`` cases.
    """
    size = len(dataset)
    if size < 2:  # noqa: PLR2004
        msg = f"A decider benchmark needs at least 2 curves, got {size}."
        raise DatasetTooSmallError(msg)
    rng = np.random.default_rng(seed)
    max_k = int(math.floor(math.log2(size)))

    cases = []
    for query in range(num_queries):
        pi = dataset[int(rng.integers(size))]
        distances = distances_to(
            pi, dataset, rel_tol, num_cores=num_cores, progress_bar=progress_bar
        )
        order = np.argsort(distances, kind="stable")
        for k in range(1, max_k + 1):
            # Ranks are 1-based; rank 1 is the closest curve.
            rank = int(rng.integers(2**k, min(2 ** (k + 1) - 1, size) + 1))
            index = int(order[rank - 1])
            sigma, delta_star = dataset[index], float(distances[index])
            for l in fcc.DECIDER_FACTOR_EXPONENTS:  # noqa: E741
                for side, factor in (
                    (fcc.SIDES.below, 1 - 2.0**l),
                    (fcc.SIDES.above, 1 + 2.0**l),
                ):
                    cases.append(
                        DeciderBenchmarkCase(
                            case_id=f"q{query:04d}-k{k}-l{l}-{side}",
                            pi_id=pi.curve_id,
                            sigma_id=sigma.curve_id,
                            delta=factor * delta_star,
                            k=k,
                            l=l,
                            side=side,
                        )
                    )
        logger.debug(f"decider benchmark: query {query} is {pi.curve_id}")
    return cases


def _query_threshold(
    tree: KdTree8,
    dataset: Sequence[Curve],
    pi: Curve,
    sorted_distances: np.ndarray,
    k: int,
    num_cores: int,
) -> float | None:
    """A threshold at which the query (pi, delta) returns exactly k + 1 curves."""
    size = len(sorted_distances)
    if k + 1 == size:
        farthest = float(sorted_distances[-1])
        return 2 * farthest if farthest > 0 else 1.0
    lo, hi = float(sorted_distances[k]), float(sorted_distances[k + 1])
    if lo >= hi:
        return None

    for _ in range(_MAX_BISECTIONS):
        delta = 0.5 * (lo + hi)
        if delta in (lo, hi):
            break
        count = len(find_close_curves(tree, dataset, pi, delta, num_cores=num_cores))
        if count == k + 1:
            return delta
        if count > k + 1:
            hi = delta
        else:
            lo = delta
    return None


def gen_query_benchmark(
    dataset: Sequence[Curve],
    seed: int,
    num_queries: int = 1,
    ks: Sequence[int] = fcc.QUERY_KS,
    rel_tol: float = fcc.DEFAULT_REL_TOL,
    *,
    num_cores: int = 1,
    progress_bar: bool = False,
) -> list[QueryBenchmarkCase]:
    """Generate query benchmark cases with exactly k + 1 results.

    The threshold starts halfway between the (k + 1)-th and (k + 2)-th smallest
    distance to pi and is bisected on the size of the query result. When k + 1 is
    the dataset size any threshold above the largest distance works. A k whose
    result size cannot be hit because of tied distances is skipped with a warning.
    """
    size = len(dataset)
    for k in ks:
        if k + 1 > size:
            raise KUnreachableError(k, size)
    rng = np.random.default_rng(seed)
    tree = build_index(dataset)

    cases = []
    for query in range(num_queries):
        pi = dataset[int(rng.integers(size))]
        sorted_distances = np.sort(
            distances_to(
                pi, dataset, rel_tol, num_cores=num_cores, progress_bar=progress_bar
            )
        )
        for k in ks:
            delta = _query_threshold(tree, dataset, pi, sorted_distances, k, num_cores)
            if delta is None:
                logger.warning(
                    f"query {query}: no threshold returns exactly {k + 1} curves "
                    f"around {pi.curve_id}, skipping k={k}"
                )
                continue
            cases.append(
                QueryBenchmarkCase(
                    case_id=f"q{query:04d}-k{k}", pi_id=pi.curve_id, delta=delta, k=k
                )
            )
    return cases


def cases_frame(
    cases: Sequence[DeciderBenchmarkCase] | Sequence[QueryBenchmarkCase],
    kind: str,
) -> pd.DataFrame:
    columns = (
        fcc.DECIDER_CASE_COLUMNS
        if kind == fcc.BENCHMARK_KINDS.decider
        else fcc.QUERY_CASE_COLUMNS
    )
    return pd.DataFrame([case._asdict() for case in cases], columns=columns)


def gen_bench_main(
    kind: str,
    dataset_path: str,
    seed: int,
    output_path: str | Path,
    *,
    num_queries: int = 1,
    ks: Sequence[int] | None = None,
    rel_tol: float = fcc.DEFAULT_REL_TOL,
    num_cores: int = 1,
    progress_bar: bool = False,
) -> int:
    dataset = clio.read_dataset(dataset_path)
    header: dict[str, object] = {
        "kind": kind,
        "seed": seed,
        "dataset": dataset_path,
        "num_queries": num_queries,
        "rel_tol": repr(rel_tol),
    }
    cases: list[DeciderBenchmarkCase] | list[QueryBenchmarkCase]
    try:
        if kind == fcc.BENCHMARK_KINDS.decider:
            cases = gen_decider_benchmark(
                dataset,
                num_queries,
                seed,
                rel_tol,
                num_cores=num_cores,
                progress_bar=progress_bar,
            )
        else:
            if ks is None:
                ks = [k for k in fcc.QUERY_KS if k < len(dataset)]
            header["ks"] = ",".join(str(k) for k in ks)
            cases = gen_query_benchmark(
                dataset,
                seed,
                num_queries,
                ks,
                rel_tol,
                num_cores=num_cores,
                progress_bar=progress_bar,
            )
    except (DatasetTooSmallError, KUnreachableError) as e:
        raise clio.InputError(str(e)) from e
    save_cases(cases_frame(cases, kind), output_path, header)
    logger.info(f"wrote {len(cases)} {kind} cases to {output_path}")
    return 0


@click.command()  # type: ignore[arg-type]
@click.argument("kind", type=click.Choice(fcc.BENCHMARK_KINDS))
@clio.with_dataset()
@clio.with_seed()
@click.option(
    "--out",
    type=click.Path(dir_okay=False),
    required=True,
    help="Benchmark case file to write.",
)
@click.option(
    "--num-queries",
    type=click.IntRange(min=1),
    default=1,
    show_default=True,
    help="Number of query curves drawn from the dataset.",
)
@click.option(
    "--k",
    "ks",
    type=click.IntRange(min=0),
    multiple=True,
    help="Result size minus one of the query benchmark. Repeatable. Defaults to "
    "every value of 0, 1, 10, 100, 1000 the dataset can serve.",
)
@click.option(
    "--rel-tol",
    type=click.FloatRange(min=0, min_open=True),
    default=fcc.DEFAULT_REL_TOL,
    show_default=True,
    help="Relative tolerance of the distance computations.",
)
@clio.with_threads()
@clio.with_progress_bar()
@clio.with_verbose()
def gen_bench(  # noqa: PLR0913
    kind: str,
    dataset: str,
    seed: int,
    out: str,
    num_queries: int,
    ks: tuple[int, ...],
    rel_tol: float,
    threads: int,
    progress_bar: bool,
    verbose: int,
) -> None:
    """Generate a decider or query benchmark case file from a dataset."""
    clio.configure_logging(verbose)
    sys.exit(
        gen_bench_main(
            kind,
            dataset,
            seed,
            out,
            num_queries=num_queries,
            ks=list(ks) or None,
            rel_tol=rel_tol,
            num_cores=threads,
            progress_bar=progress_bar,
        )
    )
