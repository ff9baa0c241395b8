"""
Options shared by every command
"""
from typing import Any, Callable

import click

from core.config import settings
from core.logging import configure_logging
from services.run_service import RunService

# Order matters only for --help output
_OPTIONS = [
    click.option("--d", "d_spec", default="constant:1", show_default=True,
                 help="Weights: constant:THETA, random:LO:HI[:SEED] or file:PATH"),
    click.option("--n", "n", type=int, default=None, help="Single n"),
    click.option("--n-sweep", "n_sweep", default=None, help="Comma-separated n values"),
    click.option("--p", "p", type=float, default=4.0, show_default=True, help="Exponent p (inf allowed)"),
    click.option("--u", "u", type=float, default=0.5, show_default=True, help="Threshold u of E(u)"),
    click.option("--seed", "seed", type=click.IntRange(0, 2 ** 64 - 1), default=settings.DEFAULT_SEED,
                 show_default=True),
    click.option("--format", "format", type=click.Choice(["csv", "json"]), default="csv", show_default=True),
    click.option("--out", "out", type=click.Path(dir_okay=False), default=None, help="Output file (default stdout)"),
    click.option("--override-guard", "override_guard", is_flag=True, help="Allow enumeration past the guard"),
    click.option("--coeffs", "coeffs", default="log1p", show_default=True, help="Coefficient family of g"),
    click.option("--hhat", "hhat", default="fixedpoints", show_default=True, help="Additive family"),
    click.option("--fhat", "fhat", default="derangement", show_default=True, help="Multiplicative family"),
    click.option("--count", "count", type=int, default=None, help="Number of samples or instances"),
    click.option("--plot-dir", "plot_dir", type=click.Path(file_okay=False), default=None,
                 help="Write two-column plot data here"),
    click.option("--log-level", "log_level", default=None, help="Overrides TAUBERPERM_LOG_LEVEL"),
]


def common_options(func: Callable) -> Callable:
    """Attach the shared options to a command"""
    for option in reversed(_OPTIONS):
        func = option(func)
    return func


def run_command(command: str, **options: Any) -> None:
    """
    Run one command and exit with its status

    Args:
        command: Subcommand name
        **options: Parsed click options
    """
    configure_logging(options.get("log_level"))
    status = RunService().execute({"command": command, **options})
    click.get_current_context().exit(status)
