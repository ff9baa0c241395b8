"""
Voronoi summation commands
"""
import click

from commands.deps import common_options, run_command


@click.command("weights")
@common_options
def weights(**options):
    """Coefficients p_0..p_n of the weight series"""
    run_command("weights", **options)


@click.command("voronoi")
@common_options
def voronoi(**options):
    """Remainder reports of Voronoi means of g"""
    run_command("voronoi", **options)


@click.command("tauber")
@common_options
def tauber(**options):
    """Voronoi means and the Tauberian ratio S(g;n)/(n p_n)"""
    run_command("tauber", **options)


commands = [weights, voronoi, tauber]
