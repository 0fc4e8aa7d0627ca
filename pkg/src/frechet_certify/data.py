"""
Benchmark Data Management
-------------------------

Reading and writing the tabular files of the benchmark workflow: benchmark case
files, decider reports and the tables consumed by plotting. Case files are
tab-separated with a block of ``# key=value`` header lines recording how they were
generated (seed, dataset, tolerances); reports are comma-separated and repeat the
seed and dataset of their case file in the same kind of header.

This module also provides ``BenchmarkData``, which fixes the layout of a
benchmark output directory.
"""

from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import TextIO

import pandas as pd
from rra_tools.shell_tools import mkdir, touch

from frechet_certify import constants as fcc
from frechet_certify.curves import Curve, format_curve


class BenchmarkFormatError(ValueError):
    pass


class BenchmarkData:
    """Layout of a directory holding synthetic data, cases, reports and plots."""

    def __init__(self, root: str | Path, *, create_root: bool = True) -> None:
        self._root = Path(root)
        if create_root:
            mkdir(self.root, exist_ok=True, parents=True)

    @property
    def root(self) -> Path:
        return self._root

    @property
    def curves(self) -> Path:
        return self.root / "curves"

    @property
    def dataset_path(self) -> Path:
        return self.root / "dataset.txt"

    @property
    def boxes_time_path(self) -> Path:
        return self.root / "boxes_time.tsv"

    @property
    def kl_table_path(self) -> Path:
        return self.root / "kl_table.tsv"

    @property
    def stages_path(self) -> Path:
        return self.root / "stages.tsv"

    @property
    def boxes_time_plot_path(self) -> Path:
        return self.root / "boxes_time.png"

    @property
    def box_tree_plot_path(self) -> Path:
        return self.root / "box_tree.png"

    def save_dataset(
        self, curves: Sequence[Curve], header: Mapping[str, object]
    ) -> Path:
        """Write one file per curve and the dataset file listing them.

        Curve ids are used as paths relative to the dataset file.
        """
        mkdir(self.curves, exist_ok=True, parents=True)
        for curve in curves:
            path = self.root / curve.curve_id
            touch(path, clobber=True)
            path.write_text(format_curve(curve))
        lines = [f"# {key}={value}" for key, value in header.items()]
        lines.extend(curve.curve_id for curve in curves)
        touch(self.dataset_path, clobber=True)
        self.dataset_path.write_text("\n".join(lines) + "\n")
        return self.dataset_path


def _write_header(f: TextIO, header: Mapping[str, object]) -> None:
    for key, value in header.items():
        f.write(f"# {key}={value}\n")


def read_header(path: str | Path) -> dict[str, str]:
    """The ``# key=value`` lines at the top of a case or report file."""
    header: dict[str, str] = {}
    with Path(path).open(encoding="utf-8") as f:
        for line in f:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].strip().partition("=")
            header[key] = value
    return header


def save_cases(
    cases: pd.DataFrame, output_path: str | Path, header: Mapping[str, object]
) -> None:
    """Save benchmark cases as a header block followed by a tab-separated table."""
    output_path = Path(output_path)
    mkdir(output_path.parent, exist_ok=True, parents=True)
    touch(output_path, clobber=True)
    with output_path.open("w") as f:
        _write_header(f, header)
        cases.to_csv(f, sep="\t", index=False, float_format="%r")


def load_cases(path: str | Path) -> tuple[pd.DataFrame, dict[str, str]]:
    """Load a benchmark case file, returning the cases and the header values."""
    header = read_header(path)
    cases = pd.read_csv(path, sep="\t", comment="#", dtype={"case_id": str})
    columns = set(cases.columns)
    if not (
        set(fcc.DECIDER_CASE_COLUMNS) <= columns
        or set(fcc.QUERY_CASE_COLUMNS) <= columns
    ):
        msg = f"{path} is neither a decider nor a query benchmark file."
        raise BenchmarkFormatError(msg)
    return cases, header


def is_decider_cases(cases: pd.DataFrame) -> bool:
    return "sigma_id" in cases.columns


def save_report(
    report: pd.DataFrame,
    output_path: str | Path,
    header: Mapping[str, object] | None = None,
) -> None:
    """Save a decider report, after the header block of the run that produced it."""
    output_path = Path(output_path)
    mkdir(output_path.parent, exist_ok=True, parents=True)
    touch(output_path, clobber=True)
    with output_path.open("w") as f:
        _write_header(f, header or {})
        report.to_csv(f, index=False, columns=fcc.REPORT_COLUMNS)


def load_report(path: str | Path) -> pd.DataFrame:
    report = pd.read_csv(path, comment="#", dtype={"case_id": str})
    missing = set(fcc.REPORT_COLUMNS) - set(report.columns)
    if missing:
        msg = f"{path} misses report columns {sorted(missing)}."
        raise BenchmarkFormatError(msg)
    return report


def save_table(table: pd.DataFrame, output_path: str | Path) -> None:
    touch(output_path, clobber=True)
    table.to_csv(output_path, sep="\t", index=False)
