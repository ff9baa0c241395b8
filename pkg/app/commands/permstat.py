"""
Weighted random permutation commands
"""
import click

from commands.deps import common_options, run_command


@click.command("mean")
@common_options
def mean(**options):
    """Mean of a multiplicative function and its estimates"""
    run_command("mean", **options)


@click.command("dist")
@common_options
def dist(**options):
    """Exact law of an additive function"""
    run_command("dist", **options)


@click.command("sample")
@common_options
def sample(**options):
    """Seeded cycle types drawn from the weighted measure"""
    run_command("sample", **options)


commands = [mean, dist, sample]
