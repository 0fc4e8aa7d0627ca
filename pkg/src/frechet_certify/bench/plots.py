"""
Plot Data
---------

Aggregates of benchmark reports: the boxes/time pairs of the complete decider with
a linear fit, per-(k, l) tables of mean time and filter share for decider
benchmarks, and stage counts. Tables are written as TSV; the boxes/time scatter
and the explored box tree of a single decision can be rendered as PNG.
"""

from collections.abc import Sequence
from pathlib import Path
from typing import NamedTuple

import click
import numpy as np
import pandas as pd
from loguru import logger
from matplotlib.figure import Figure
from matplotlib.patches import Rectangle
from sklearn.linear_model import LinearRegression

from frechet_certify import cli_options as clio
from frechet_certify import constants as fcc
from frechet_certify.data import (
    BenchmarkData,
    BenchmarkFormatError,
    is_decider_cases,
    load_cases,
    load_report,
    save_table,
)
from frechet_certify.decide.complete import BoxRecord

BOX_COLORS = {
    fcc.BOX_OUTCOMES.cell: "tab:gray",
    fcc.BOX_OUTCOMES.empty_inputs: "tab:blue",
    fcc.BOX_OUTCOMES.shrink: "tab:orange",
    fcc.BOX_OUTCOMES.simple: "tab:green",
    fcc.BOX_OUTCOMES.diagram_edge: "tab:red",
    fcc.BOX_OUTCOMES.split: "none",
}


class Regression(NamedTuple):
    slope: float
    intercept: float
    r2: float


def boxes_time_table(report: pd.DataFrame) -> pd.DataFrame:
    """Boxes and time of every call decided by the complete decider."""
    complete = report.loc[report["stage"] == fcc.STAGES.complete]
    return complete[["case_id", "config", "boxes", "time_ns"]].reset_index(drop=True)


def boxes_time_regression(report: pd.DataFrame) -> Regression:
    """Least squares fit of time_ns on boxes over the complete-decider calls."""
    table = boxes_time_table(report)
    if len(table) < 2:  # noqa: PLR2004
        msg = f"Need at least 2 complete-decider calls to fit, got {len(table)}."
        raise ValueError(msg)
    x = table["boxes"].to_numpy(dtype=float).reshape(-1, 1)
    y = table["time_ns"].to_numpy(dtype=float)
    model = LinearRegression().fit(x, y)
    return Regression(
        slope=float(model.coef_[0]),
        intercept=float(model.intercept_),
        r2=float(model.score(x, y)),
    )


def kl_table(report: pd.DataFrame, cases: pd.DataFrame) -> pd.DataFrame:
    """Mean time and share of filter-decided calls per config, k, l and side."""
    merged = report.merge(
        cases[["case_id", "k", "l", "side"]], on="case_id", how="inner"
    )
    merged["filtered"] = merged["stage"].isin(fcc.STAGES.filters())
    return (
        merged.groupby(["config", "k", "l", "side"])
        .agg(
            cases=("case_id", "size"),
            mean_time_ns=("time_ns", "mean"),
            filter_share=("filtered", "mean"),
        )
        .reset_index()
    )


def stage_table(report: pd.DataFrame) -> pd.DataFrame:
    """Number of calls decided at each stage, per config."""
    return (
        report.groupby(["config", "stage"])
        .size()
        .rename("count")
        .reset_index()
    )


def load_boxes(path: str | Path) -> list[BoxRecord]:
    """Read a box tree dump, one 'i i2 j j2 rule' line per box."""
    boxes = []
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    for line_number, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            i, i2, j, j2, rule = line.split()
            boxes.append(BoxRecord(int(i), int(i2), int(j), int(j2), rule, 0))
        except ValueError as e:
            msg = f"{path}:{line_number}: malformed box line {line!r}"
            raise BenchmarkFormatError(msg) from e
    return boxes


def plot_boxes_time(report: pd.DataFrame, output_path: str | Path) -> None:
    table = boxes_time_table(report)
    fig = Figure(figsize=(6, 4.5))
    ax = fig.add_subplot()
    for config, group in table.groupby("config"):
        ax.scatter(group["boxes"], group["time_ns"] / 1e6, s=6, label=str(config))
    if len(table) >= 2:  # noqa: PLR2004
        fit = boxes_time_regression(report)
        xs = np.linspace(0, table["boxes"].max(), 100)
        ax.plot(
            xs,
            (fit.slope * xs + fit.intercept) / 1e6,
            color="black",
            label=f"fit, r^2 = {fit.r2:.2f}",
        )
    ax.set_xlabel("boxes")
    ax.set_ylabel("time [ms]")
    ax.legend()
    fig.tight_layout()
    fig.savefig(output_path, dpi=150)


def plot_box_tree(boxes: Sequence[BoxRecord], output_path: str | Path) -> None:
    fig = Figure(figsize=(6, 6))
    ax = fig.add_subplot()
    for box in boxes:
        ax.add_patch(
            Rectangle(
                (box.i, box.j),
                box.i2 - box.i,
                box.j2 - box.j,
                facecolor=BOX_COLORS.get(box.rule, "none"),
                edgecolor="black",
                linewidth=0.3,
                alpha=0.6,
            )
        )
    if boxes:
        ax.set_xlim(min(b.i for b in boxes), max(b.i2 for b in boxes))
        ax.set_ylim(min(b.j for b in boxes), max(b.j2 for b in boxes))
    ax.set_xlabel("pi")
    ax.set_ylabel("sigma")
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(output_path, dpi=150)


def plot_data_main(
    report_path: str | None,
    cases_path: str | None,
    output_dir: str | Path,
    *,
    boxes_path: str | None = None,
    png: bool = False,
) -> None:
    bdata = BenchmarkData(output_dir)
    try:
        if report_path is not None:
            report = load_report(report_path)
            save_table(boxes_time_table(report), bdata.boxes_time_path)
            save_table(stage_table(report), bdata.stages_path)
            if cases_path is not None:
                cases, _ = load_cases(cases_path)
                if is_decider_cases(cases):
                    save_table(kl_table(report, cases), bdata.kl_table_path)
            if len(boxes_time_table(report)) >= 2:  # noqa: PLR2004
                fit = boxes_time_regression(report)
                click.echo(
                    f"slope={fit.slope!r} intercept={fit.intercept!r} r2={fit.r2!r}"
                )
            if png:
                plot_boxes_time(report, bdata.boxes_time_plot_path)
        if boxes_path is not None:
            boxes = load_boxes(boxes_path)
            plot_box_tree(boxes, bdata.box_tree_plot_path)
    except (BenchmarkFormatError, UnicodeDecodeError, OSError) as e:
        raise clio.InputError(str(e)) from e
    logger.info(f"wrote plot data to {bdata.root}")


@click.command()  # type: ignore[arg-type]
@click.option(
    "--report",
    "report_path",
    type=click.Path(exists=True, dir_okay=False),
    help="CSV report written by run-bench.",
)
@click.option(
    "--cases",
    "cases_path",
    type=click.Path(exists=True, dir_okay=False),
    help="Decider case file of the report, for the per-(k, l) table.",
)
@click.option(
    "--out-dir",
    type=click.Path(file_okay=False),
    required=True,
    help="Directory for the tables and plots.",
)
@click.option(
    "--boxes",
    "boxes_path",
    type=click.Path(exists=True, dir_okay=False),
    help="Box tree dump written by decide --dump-boxes.",
)
@click.option("--png", is_flag=True, help="Also render the plots as PNG.")
@clio.with_verbose()
def plot_data(
    report_path: str | None,
    cases_path: str | None,
    out_dir: str,
    boxes_path: str | None,
    png: bool,
    verbose: int,
) -> None:
    """Write plot tables for a benchmark report and render the plots."""
    clio.configure_logging(verbose)
    if report_path is None and boxes_path is None:
        msg = "Pass --report, --boxes or both."
        raise click.UsageError(msg)
    plot_data_main(report_path, cases_path, out_dir, boxes_path=boxes_path, png=png)
