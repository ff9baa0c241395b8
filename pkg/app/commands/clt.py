"""
Normal approximation and check-suite commands
"""
import click

from commands.deps import common_options, run_command
from services.check_service import SUITES


@click.command("clt")
@common_options
def clt(**options):
    """Corrected Kolmogorov gap against its L-functional budget"""
    run_command("clt", **options)


@click.command("check")
@common_options
@click.option("--suite", type=click.Choice(sorted(SUITES)), required=True)
@click.option("--nmax", type=int, default=None, help="Suite scale")
def check(**options):
    """Run a property suite; exit 1 when it fails"""
    run_command("check", **options)


commands = [clt, check]
