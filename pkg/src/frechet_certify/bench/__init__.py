"""
Benchmarks
----------

The exhaustive reference oracle, synthetic datasets, benchmark generation, the
timing runner and plot data.
"""

from frechet_certify.bench.generate import gen_bench
from frechet_certify.bench.oracle import oracle_decide
from frechet_certify.bench.plots import plot_data
from frechet_certify.bench.runner import run_bench
from frechet_certify.bench.synthetic import generate_synthetic

RUNNERS = {
    "oracle": oracle_decide,
    "gen-bench": gen_bench,
    "run-bench": run_bench,
    "plot-data": plot_data,
    "gen-synthetic": generate_synthetic,
}
