"""
Frechet Certify CLI Options
---------------------------

Shared click options for the ``frechet`` subcommands, the logging setup driven by
the verbosity flag, and helpers that turn unreadable inputs into exit code 2.
Standard options come from ``rra_tools.cli_tools``.
"""

import os
import sys
from pathlib import Path
from typing import ParamSpec, TypeVar

import click
from loguru import logger
from rra_tools.cli_tools import (
    ClickOption,
    with_overwrite,
    with_progress_bar,
)
from rra_tools.shell_tools import mkdir, touch

from frechet_certify import constants as fcc
from frechet_certify.curves import (
    Curve,
    CurveEncodingError,
    EmptyCurveError,
    MalformedVertexError,
    load_curve,
    load_dataset,
)

_T = TypeVar("_T")
_P = ParamSpec("_P")


class InputError(click.ClickException):
    """An input file exists but cannot be used."""

    exit_code = 2


def read_curve(path: str | Path) -> Curve:
    try:
        return load_curve(path)
    except (
        MalformedVertexError, EmptyCurveError, CurveEncodingError, OSError
    ) as e:
        msg = f"Cannot read curve {path}: {e}"
        raise InputError(msg) from e


def read_dataset(path: str | Path) -> list[Curve]:
    try:
        return load_dataset(path)
    except (
        MalformedVertexError, EmptyCurveError, CurveEncodingError, OSError
    ) as e:
        msg = f"Cannot read dataset {path}: {e}"
        raise InputError(msg) from e


def write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    mkdir(path.parent, exist_ok=True, parents=True)
    touch(path, clobber=True)
    path.write_text(text)


def configure_logging(verbose: int) -> None:
    """Send log records to stderr: warnings by default, -v for info, -vv for debug."""
    level = "WARNING" if verbose == 0 else "INFO" if verbose == 1 else "DEBUG"
    logger.remove()
    logger.add(sys.stderr, level=level)


def with_verbose() -> ClickOption[_P, _T]:
    return click.option(
        "-v",
        "--verbose",
        count=True,
        help="Log to stderr, -v for progress and -vv for decider internals.",
    )


def with_threads() -> ClickOption[_P, _T]:
    return click.option(
        "--threads",
        type=click.IntRange(min=1),
        default=os.cpu_count() or 1,
        show_default=True,
        help="Number of worker processes.",
    )


def with_seed() -> ClickOption[_P, _T]:
    return click.option(
        "--seed",
        type=click.INT,
        required=True,
        help="Seed of the random generator, recorded in every output file.",
    )


def with_no_filters() -> ClickOption[_P, _T]:
    return click.option(
        "--no-filters",
        is_flag=True,
        help="Skip the filters and go straight to the complete decider.",
    )


def with_disable_rule() -> ClickOption[_P, _T]:
    return click.option(
        "--disable-rule",
        type=click.Choice(fcc.RULES.names()),
        multiple=True,
        help="Leave out a pruning rule of the complete decider. Repeatable.",
    )


def with_dataset(*, required: bool = True) -> ClickOption[_P, _T]:
    return click.option(
        "--dataset",
        type=click.Path(exists=True, dir_okay=False),
        required=required,
        help="Dataset file listing one curve file per line.",
    )


def with_ablate() -> ClickOption[_P, _T]:
    return click.option(
        "--ablate",
        type=click.Choice(fcc.ABLATIONS),
        multiple=True,
        default=("all",),
        show_default=True,
        help="Decider configuration to run the cases with. Repeatable.",
    )


__all__ = [
    "ClickOption",
    "InputError",
    "configure_logging",
    "read_curve",
    "read_dataset",
    "with_ablate",
    "with_dataset",
    "with_disable_rule",
    "with_no_filters",
    "with_overwrite",
    "with_progress_bar",
    "with_seed",
    "with_threads",
    "with_verbose",
    "write_text",
]
