"""
Benchmark Runner
----------------

Runs a benchmark case file through the decider once per decider configuration and
collects one report row per decider call. Query cases are expanded into one
decide call per kd-tree candidate of the query, so that every row times a single
decision.
"""

import sys
from collections.abc import Mapping, Sequence
from pathlib import Path

import click
import pandas as pd
from loguru import logger
from rra_tools import parallel

from frechet_certify import cli_options as clio
from frechet_certify import constants as fcc
from frechet_certify.curves import Curve
from frechet_certify.data import (
    BenchmarkFormatError,
    is_decider_cases,
    load_cases,
    save_report,
)
from frechet_certify.decide.decider import DEFAULT_CONFIG, DeciderConfig, decide
from frechet_certify.query.near_neighbors import build_index, candidate_indices

_Call = tuple[str, Curve, Curve, float, DeciderConfig, bool]


def _run_call(call: _Call) -> tuple[str, int, int, float, str, str, int, int, str]:
    case_id, pi, sigma, delta, config, want_certificate = call
    result = decide(pi, sigma, delta, want_certificate, config)
    return (
        case_id,
        pi.n,
        sigma.n,
        delta,
        result.verdict,
        result.stats.stage,
        result.stats.boxes,
        result.stats.time_ns,
        config.label,
    )


def _lookup(curves_by_id: Mapping[str, Curve], curve_id: str) -> Curve:
    try:
        return curves_by_id[curve_id]
    except KeyError as e:
        msg = f"Curve {curve_id} of the benchmark is not in the dataset."
        raise BenchmarkFormatError(msg) from e


def _decider_calls(
    cases: pd.DataFrame,
    curves_by_id: Mapping[str, Curve],
    config: DeciderConfig,
    want_certificate: bool,
) -> list[_Call]:
    return [
        (
            str(row.case_id),
            _lookup(curves_by_id, str(row.pi_id)),
            _lookup(curves_by_id, str(row.sigma_id)),
            float(row.delta),
            config,
            want_certificate,
        )
        for row in cases.itertuples(index=False)
    ]


def _query_calls(
    cases: pd.DataFrame,
    curves_by_id: Mapping[str, Curve],
    config: DeciderConfig,
    want_certificate: bool,
) -> list[_Call]:
    dataset = list(curves_by_id.values())
    tree = build_index(dataset)
    calls: list[_Call] = []
    for row in cases.itertuples(index=False):
        pi = _lookup(curves_by_id, str(row.pi_id))
        delta = float(row.delta)
        for k in candidate_indices(tree, pi, delta):
            sigma = dataset[k]
            calls.append(
                (
                    f"{row.case_id}:{sigma.curve_id}",
                    pi,
                    sigma,
                    delta,
                    config,
                    want_certificate,
                )
            )
    return calls


def run_benchmark(
    cases: pd.DataFrame,
    curves_by_id: Mapping[str, Curve],
    configs: Sequence[DeciderConfig] = (DEFAULT_CONFIG,),
    *,
    want_certificate: bool = False,
    num_cores: int = 1,
    progress_bar: bool = False,
) -> pd.DataFrame:
    """Time every decider call of a benchmark under every configuration.

    Parameters
    ----------
    cases
        Decider or query benchmark cases, as loaded by ``load_cases``.
    curves_by_id
        The dataset curves keyed by curve id, in dataset order.
    configs
        Decider configurations; the cases run once per configuration.
    want_certificate
        Build a certificate in every call.
    num_cores
        Number of worker processes. Times are per call and measured inside the
        worker, so they are only comparable between runs with one core.
    progress_bar
        Show a progress bar over the calls of each configuration.

    Returns
    -------
    pd.DataFrame
        One row per decider call with the ``REPORT_COLUMNS``.
    """
    make_calls = _decider_calls if is_decider_cases(cases) else _query_calls
    rows = []
    for config in configs:
        calls = make_calls(cases, curves_by_id, config, want_certificate)
        logger.info(f"running {len(calls)} decider calls with config {config.label}")
        rows.extend(
            parallel.run_parallel(
                _run_call,
                calls,
                num_cores=num_cores,
                progress_bar=progress_bar,
            )
        )
    return pd.DataFrame(rows, columns=fcc.REPORT_COLUMNS)


def run_bench_main(
    cases_path: str,
    output_path: str | Path,
    ablations: Sequence[str],
    *,
    dataset_path: str | None = None,
    want_certificate: bool = False,
    num_cores: int = 1,
    progress_bar: bool = False,
) -> int:
    try:
        cases, header = load_cases(cases_path)
    except (
        BenchmarkFormatError, UnicodeDecodeError, OSError, pd.errors.ParserError
    ) as e:
        msg = f"Cannot read benchmark {cases_path}: {e}"
        raise clio.InputError(msg) from e
    dataset_path = dataset_path or header.get("dataset")
    if dataset_path is None:
        msg = f"{cases_path} records no dataset, pass --dataset."
        raise clio.InputError(msg)
    curves_by_id = {c.curve_id: c for c in clio.read_dataset(dataset_path)}
    configs = [DeciderConfig.from_ablation(label) for label in dict.fromkeys(ablations)]
    try:
        report = run_benchmark(
            cases,
            curves_by_id,
            configs,
            want_certificate=want_certificate,
            num_cores=num_cores,
            progress_bar=progress_bar,
        )
    except BenchmarkFormatError as e:
        raise clio.InputError(str(e)) from e
    run_header: dict[str, object] = {
        key: header[key] for key in ("kind", "seed") if key in header
    }
    run_header.update(
        dataset=dataset_path, cases=cases_path, certify=want_certificate
    )
    save_report(report, output_path, run_header)
    logger.info(f"wrote {len(report)} report rows to {output_path}")
    return 0


@click.command()  # type: ignore[arg-type]
@click.option(
    "--cases",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="Benchmark case file written by gen-bench.",
)
@click.option(
    "--out",
    type=click.Path(dir_okay=False),
    required=True,
    help="CSV report to write.",
)
@clio.with_ablate()
@clio.with_dataset(required=False)
@click.option(
    "--certify",
    is_flag=True,
    help="Build a certificate in every decider call.",
)
@clio.with_threads()
@clio.with_progress_bar()
@clio.with_verbose()
def run_bench(  # noqa: PLR0913
    cases: str,
    out: str,
    ablate: tuple[str, ...],
    dataset: str | None,
    certify: bool,
    threads: int,
    progress_bar: bool,
    verbose: int,
) -> None:
    """Run a benchmark case file and write the timing report."""
    clio.configure_logging(verbose)
    sys.exit(
        run_bench_main(
            cases,
            out,
            ablate,
            dataset_path=dataset,
            want_certificate=certify,
            num_cores=threads,
            progress_bar=progress_bar,
        )
    )
