from pathlib import Path

import pandas as pd
import pytest
from click.testing import CliRunner, Result

from frechet_certify import constants as fcc
from frechet_certify.cli import frechet
from frechet_certify.data import read_header


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def _run(runner: CliRunner, *args: str | Path) -> Result:
    return runner.invoke(frechet, [str(arg) for arg in args])


def test_subcommands(runner: CliRunner) -> None:
    result = _run(runner, "--help")
    assert result.exit_code == 0
    for name in (
        "decide",
        "distance",
        "check-cert",
        "query",
        "oracle",
        "gen-bench",
        "run-bench",
        "plot-data",
        "gen-synthetic",
    ):
        assert name in result.stdout


##########
# decide #
##########


def test_decide_close(runner: CliRunner, fixtures_dir: Path) -> None:
    a = fixtures_dir / "a.txt"
    result = _run(runner, "decide", a, a, "0")
    assert result.exit_code == 0
    assert result.stdout == "close\n"


def test_decide_far(runner: CliRunner, fixtures_dir: Path) -> None:
    result = _run(runner, "decide", fixtures_dir / "a.txt", fixtures_dir / "b.txt", "1")
    assert result.exit_code == 1
    assert result.stdout == "far\n"


def test_decide_prints_a_certificate(runner: CliRunner, fixtures_dir: Path) -> None:
    low, high = fixtures_dir / "segment_low.txt", fixtures_dir / "segment_high.txt"
    result = _run(runner, "decide", "--certify", low, high, "1")
    assert result.exit_code == 0
    assert result.stdout.splitlines()[:3] == ["close", "YES", "2 2 1.0"]

    result = _run(runner, "decide", "--certify", low, high, "0.5")
    assert result.exit_code == 1
    assert result.stdout.splitlines()[:2] == ["far", "NO"]


def test_certificate_file_is_checked(
    runner: CliRunner, fixtures_dir: Path, tmp_path: Path
) -> None:
    line, peak = fixtures_dir / "line.txt", fixtures_dir / "peak.txt"
    cert = tmp_path / "yes.txt"
    result = _run(runner, "decide", line, peak, "1.5", "--cert-out", cert)
    assert result.exit_code == 0
    assert result.stdout == "close\n"
    assert cert.read_text().startswith("YES\n2 3 1.5\n")

    result = _run(runner, "check-cert", line, peak, "1.5", cert)
    assert result.exit_code == 0
    assert result.stdout == "accept\n"

    result = _run(runner, "check-cert", line, peak, "0.5", cert)
    assert result.exit_code == 1
    assert "reject" in result.stdout


def test_no_certificate_file_is_checked(
    runner: CliRunner, fixtures_dir: Path, tmp_path: Path
) -> None:
    line, peak = fixtures_dir / "line.txt", fixtures_dir / "peak.txt"
    cert = tmp_path / "no.txt"
    result = _run(
        runner, "decide", "--no-filters", line, peak, "0.9", "--cert-out", cert
    )
    assert result.exit_code == 1
    assert cert.read_text().startswith("NO\n")
    result = _run(runner, "check-cert", line, peak, "0.9", cert)
    assert result.exit_code == 0
    assert result.stdout == "accept\n"


def test_unreadable_certificate(
    runner: CliRunner, fixtures_dir: Path, tmp_path: Path
) -> None:
    cert = tmp_path / "cert.txt"
    cert.write_text("MAYBE\n")
    line = fixtures_dir / "line.txt"
    result = _run(runner, "check-cert", line, line, "1", cert)
    assert result.exit_code == 2  # noqa: PLR2004


def test_dump_boxes(runner: CliRunner, fixtures_dir: Path, tmp_path: Path) -> None:
    boxes = tmp_path / "boxes.txt"
    result = _run(
        runner,
        "decide",
        "--no-filters",
        "--disable-rule",
        "2",
        fixtures_dir / "a.txt",
        fixtures_dir / "curves" / "a_coarse.txt",
        "1",
        "--dump-boxes",
        boxes,
    )
    assert result.exit_code in (0, 1)
    assert boxes.read_text().splitlines()[0].split()[:4] == ["1", "6", "1", "3"]


@pytest.mark.parametrize("name", ["malformed.txt", "missing.txt"])
def test_unreadable_curve(runner: CliRunner, fixtures_dir: Path, name: str) -> None:
    result = _run(runner, "decide", fixtures_dir / name, fixtures_dir / "a.txt", "1")
    assert result.exit_code == 2  # noqa: PLR2004


def test_curve_that_is_not_utf8(
    runner: CliRunner, fixtures_dir: Path, tmp_path: Path
) -> None:
    binary = tmp_path / "binary.txt"
    binary.write_bytes(b"\xff\xfe 1 2\n3 4\n")
    result = _run(runner, "decide", binary, fixtures_dir / "a.txt", "1")
    assert result.exit_code == 2  # noqa: PLR2004


def test_dataset_that_is_not_utf8(
    runner: CliRunner, fixtures_dir: Path, tmp_path: Path
) -> None:
    dataset = tmp_path / "dataset.txt"
    dataset.write_bytes(b"\xff\xfe 1 2\n")
    result = _run(
        runner,
        "query",
        "--dataset",
        dataset,
        "--query-curve",
        fixtures_dir / "a.txt",
        "--delta",
        "1",
    )
    assert result.exit_code == 2  # noqa: PLR2004


def test_negative_delta_is_a_usage_error(runner: CliRunner, fixtures_dir: Path) -> None:
    a = fixtures_dir / "a.txt"
    result = _run(runner, "decide", a, a, "--", "-1")
    assert result.exit_code == 2  # noqa: PLR2004


def test_distance(runner: CliRunner, fixtures_dir: Path) -> None:
    result = _run(
        runner,
        "distance",
        fixtures_dir / "segment_low.txt",
        fixtures_dir / "segment_high.txt",
    )
    assert result.exit_code == 0
    assert float(result.stdout) == pytest.approx(1.0, abs=1e-9)


def test_oracle(runner: CliRunner, fixtures_dir: Path) -> None:
    line, peak = fixtures_dir / "line.txt", fixtures_dir / "peak.txt"
    assert _run(runner, "oracle", line, peak, "1").stdout == "close\n"
    result = _run(runner, "oracle", line, peak, "0.5")
    assert result.exit_code == 1
    assert result.stdout == "far\n"


def test_query(runner: CliRunner, fixtures_dir: Path) -> None:
    result = _run(
        runner,
        "query",
        "--dataset",
        fixtures_dir / "dataset.txt",
        "--query-curve",
        fixtures_dir / "a.txt",
        "--delta",
        "0.5",
        "--threads",
        "1",
    )
    assert result.exit_code == 0
    assert result.stdout.splitlines() == ["a.txt", "curves/a_shifted.txt"]


##############
# Benchmarks #
##############


def test_benchmark_pipeline(runner: CliRunner, tmp_path: Path) -> None:
    data = tmp_path / "data"
    result = _run(
        runner,
        "gen-synthetic",
        "--out-dir",
        data,
        "--num-curves",
        "12",
        "--seed",
        "1",
        "--max-vertices",
        "10",
    )
    assert result.exit_code == 0
    dataset = data / "dataset.txt"
    assert result.stdout == f"{dataset}\n"

    cases = tmp_path / "decider.tsv"
    result = _run(
        runner,
        "gen-bench",
        "decider",
        "--dataset",
        dataset,
        "--seed",
        "2",
        "--out",
        cases,
        "--threads",
        "1",
    )
    assert result.exit_code == 0
    assert cases.read_text().startswith("# kind=decider\n# seed=2\n")
    num_cases = 3 * 2 * len(fcc.DECIDER_FACTOR_EXPONENTS)

    report = tmp_path / "report.csv"
    result = _run(
        runner,
        "run-bench",
        "--cases",
        cases,
        "--out",
        report,
        "--ablate",
        "all",
        "--ablate",
        "no-filters",
        "--ablate",
        "all",
        "--threads",
        "1",
    )
    assert result.exit_code == 0
    assert report.read_text().startswith("# kind=decider\n# seed=2\n")
    assert read_header(report)["cases"] == str(cases)
    rows = pd.read_csv(report, comment="#")
    assert list(rows.columns) == fcc.REPORT_COLUMNS
    assert len(rows) == 2 * num_cases

    boxes = tmp_path / "boxes.txt"
    first = pd.read_csv(cases, sep="\t", comment="#").iloc[0]
    _run(
        runner,
        "decide",
        "--no-filters",
        data / first["pi_id"],
        data / first["sigma_id"],
        str(2 * float(first["delta"]) + 1),
        "--dump-boxes",
        boxes,
    )

    plots = tmp_path / "plots"
    result = _run(
        runner,
        "plot-data",
        "--report",
        report,
        "--cases",
        cases,
        "--out-dir",
        plots,
        "--boxes",
        boxes,
        "--png",
    )
    assert result.exit_code == 0
    assert "slope=" in result.stdout
    for name in (
        "boxes_time.tsv",
        "kl_table.tsv",
        "stages.tsv",
        "boxes_time.png",
        "box_tree.png",
    ):
        assert (plots / name).exists(), name


def test_query_benchmark(runner: CliRunner, tmp_path: Path) -> None:
    data = tmp_path / "data"
    args: list[str | Path] = ["--out-dir", data, "--num-curves", "12", "--seed", "3"]
    assert _run(runner, "gen-synthetic", *args).exit_code == 0
    dataset = data / "dataset.txt"
    cases = tmp_path / "query.tsv"
    result = _run(
        runner,
        "gen-bench",
        "query",
        "--dataset",
        dataset,
        "--seed",
        "4",
        "--out",
        cases,
        "--threads",
        "1",
    )
    assert result.exit_code == 0
    assert "# ks=0,1,10\n" in cases.read_text()

    result = _run(
        runner,
        "gen-bench",
        "query",
        "--dataset",
        dataset,
        "--seed",
        "4",
        "--out",
        cases,
        "--k",
        "12",
    )
    assert result.exit_code == 2  # noqa: PLR2004


def test_gen_synthetic_keeps_existing_data(runner: CliRunner, tmp_path: Path) -> None:
    args: list[str | Path] = ["gen-synthetic", "--out-dir", tmp_path, "--num-curves"]
    args += ["3", "--seed", "1"]
    assert _run(runner, *args).exit_code == 0
    assert _run(runner, *args).exit_code == 2  # noqa: PLR2004
    assert _run(runner, *args, "--overwrite").exit_code == 0


def test_plot_data_needs_an_input(runner: CliRunner, tmp_path: Path) -> None:
    result = _run(runner, "plot-data", "--out-dir", tmp_path)
    assert result.exit_code == 2  # noqa: PLR2004
