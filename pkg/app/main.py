"""
Command-line entry point
"""
import click

from core.config import settings
from commands import clt, permstat, voronoi


@click.group(
    name=settings.APP_NAME,
    help="Voronoi summation and weighted random permutations: sweeps, exact laws and checks.",
)
@click.version_option(settings.APP_VERSION, prog_name=settings.APP_NAME)
def cli():
    pass


# Register commands
for module in (voronoi, permstat, clt):
    for command in module.commands:
        cli.add_command(command)


if __name__ == "__main__":
    cli()
