import click

from frechet_certify import bench, certify, decide, query


@click.group()
def frechet() -> None:
    """Certifying Frechet decider, near-neighbor queries and benchmarks."""


for module in [decide, certify, query, bench]:
    runners = getattr(module, "RUNNERS", {})
    for name, runner in runners.items():
        frechet.add_command(runner, name)
