"""Command-line interface for comparing channels."""

import sys
from pathlib import Path
from typing import List, Optional

import click
from rich.console import Console
from rich.markup import escape

from ..core.exceptions import ChannelCompareError, OracleDimensionError
from ..core.models import Observer, ProbVector
from ..decomposition.oracle import unique_information_oracle
from ..decomposition.unique_information import METHODS, UIResult, unique_information
from ..orders.blackwell import add_symmetric_noise, compare
from ..orders.capability import capacity, more_capable_refute
from ..orders.decision import solve_decision
from ..scenarios.registry import available_scenarios, scenario_by_name
from ..scenarios.verification import verify_bundle
from ..utils.config import Settings, load_settings
from ..utils.logger import LOG_LEVELS, get_logger, setup_rich_logging
from . import display
from .formats import read_channel, read_joint, read_prior, read_utility, write_bundle
from .heatmap import FAMILY_RANGES, compute_heatmap, write_heatmap_csv

console = Console(soft_wrap=True)
logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_INPUT_ERROR = 2
EXIT_INCOMPARABLE = 10
EXIT_NOT_CONVERGED = 11

EXISTING_FILE = click.Path(exists=True, dir_okay=False, path_type=Path)


def _settings(ctx: click.Context) -> Settings:
    return ctx.find_object(Settings) or Settings()


def _pick(flag, default):
    return default if flag is None else flag


class GuardedGroup(click.Group):
    """Command group that reports input errors on standard error with exit code 2."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except (ChannelCompareError, ValueError, OSError) as e:
            logger.debug("command failed", exc_info=True)
            Console(stderr=True).print(f"[red]Error: {escape(str(e))}[/red]")
            sys.exit(EXIT_INPUT_ERROR)


@click.group(cls=GuardedGroup)
@click.option("--config", "config_path", type=click.Path(dir_okay=False, path_type=Path), help="YAML settings file")
@click.option(
    "--log-level",
    type=click.Choice(LOG_LEVELS, case_sensitive=False),
    default=None,
    help="Log level for messages on standard error",
)
@click.version_option(package_name="channel-compare")
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[Path], log_level: Optional[str]):
    """Compare finite information channels: Blackwell order, capability, unique information."""
    settings = load_settings(config_path)
    setup_rich_logging(log_level or settings.log_level)
    ctx.obj = settings


@cli.command(name="compare")
@click.argument("channel_a", type=EXISTING_FILE)
@click.argument("channel_b", type=EXISTING_FILE)
@click.option("--prior", "prior_path", type=EXISTING_FILE, help="Prior file; uniform when omitted")
@click.option("--uniform", is_flag=True, help="Use the uniform prior (the default)")
@click.option("--noise", is_flag=True, help="Garble CHANNEL_B with symmetric noise before comparing")
@click.option("--epsilon", type=float, default=None, help="Noise level for --noise")
@click.pass_context
def compare_command(
    ctx: click.Context,
    channel_a: Path,
    channel_b: Path,
    prior_path: Optional[Path],
    uniform: bool,
    noise: bool,
    epsilon: Optional[float],
):
    """Place CHANNEL_A relative to CHANNEL_B in the Blackwell order."""
    if prior_path is not None and uniform:
        raise click.UsageError("--prior and --uniform are mutually exclusive")
    first = read_channel(channel_a)
    second = read_channel(channel_b)
    if noise:
        level = _pick(epsilon, _settings(ctx).noise_epsilon)
        second = add_symmetric_noise(second, level)
        console.print(f"channel B garbled with symmetric noise {level:g}")
    prior = read_prior(prior_path) if prior_path is not None else ProbVector.uniform(first.input)

    verdict = compare(first, second, prior)
    display.show_verdict(console, verdict)
    sys.exit(EXIT_OK if verdict.relation.comparable else EXIT_INCOMPARABLE)


@cli.command()
@click.argument("channel", type=EXISTING_FILE)
@click.argument("prior_path", metavar="PRIOR", type=EXISTING_FILE)
@click.argument("utility", type=EXISTING_FILE)
def decide(channel: Path, prior_path: Path, utility: Path):
    """Optimal decision rule for CHANNEL under PRIOR and UTILITY."""
    solution = solve_decision(read_channel(channel), read_prior(prior_path), read_utility(utility))
    display.show_decision(console, solution)


@cli.command()
@click.argument("joint", type=EXISTING_FILE)
@click.option("--direction", type=click.Choice(["both", "x1", "x2"]), default="both", show_default=True)
@click.option("--tolerance", type=float, default=None, help="Frank-Wolfe gap tolerance in bits")
@click.option("--max-iterations", type=click.IntRange(min=1), default=None)
@click.option("--method", type=click.Choice(METHODS), default=None)
@click.option("--oracle", is_flag=True, help="Also print the brute-force value (small joints only)")
@click.option("--oracle-density", type=click.IntRange(min=1), default=None, help="Grid density for --oracle")
@click.pass_context
def ui(
    ctx: click.Context,
    joint: Path,
    direction: str,
    tolerance: Optional[float],
    max_iterations: Optional[int],
    method: Optional[str],
    oracle: bool,
    oracle_density: Optional[int],
):
    """Unique information of the joint distribution in JOINT."""
    settings = _settings(ctx)
    j = read_joint(joint)
    directions = [Observer.X1, Observer.X2] if direction == "both" else [Observer(direction)]
    results: List[UIResult] = [
        unique_information(
            j,
            which,
            tolerance_bits=_pick(tolerance, settings.ui_tolerance),
            max_iterations=_pick(max_iterations, settings.ui_max_iterations),
            method=_pick(method, settings.ui_method),
        )
        for which in directions
    ]
    display.show_ui(console, results)
    if oracle:
        density = _pick(oracle_density, settings.oracle_density)
        for which in directions:
            try:
                display.show_oracle(console, which, unique_information_oracle(j, which, grid_density=density))
            except OracleDimensionError as e:
                console.print(f"oracle skipped: {escape(str(e))}")
    sys.exit(EXIT_OK if all(r.converged for r in results) else EXIT_NOT_CONVERGED)


@cli.command()
@click.option("--family", type=click.Choice(sorted(FAMILY_RANGES)), required=True)
@click.option("--resolution", type=click.IntRange(min=2), default=17, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, allow_dash=True), default="-", show_default=True)
@click.option("--tolerance", type=float, default=None, help="Frank-Wolfe gap tolerance in bits")
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@click.pass_context
def heatmap(ctx: click.Context, family: str, resolution: int, out: str, tolerance: Optional[float], workers: int):
    """Unique information in both directions over a grid of an AND family, as CSV."""
    settings = _settings(ctx)
    cells = compute_heatmap(
        family,
        resolution,
        tolerance=_pick(tolerance, settings.heatmap_tolerance),
        max_iterations=settings.ui_max_iterations,
        method=settings.ui_method,
        workers=workers,
    )
    if out == "-":
        write_heatmap_csv(cells, sys.stdout)
    else:
        with open(out, "w", encoding="utf-8", newline="") as stream:
            write_heatmap_csv(cells, stream)
        console.print(escape(f"wrote {len(cells)} rows to {out}"))


@cli.command()
@click.option("--name", required=True, help=f"One of: {', '.join(available_scenarios())}")
@click.option("--write", "directory", type=click.Path(file_okay=False, path_type=Path), help="Write the tables here")
def example(name: str, directory: Optional[Path]):
    """Print a built-in scenario and re-derive its expected values."""
    bundle = scenario_by_name(name)
    results = verify_bundle(bundle)
    display.show_bundle(console, bundle, results)
    if directory is not None:
        written = write_bundle(bundle, directory)
        console.print(escape(f"wrote {len(written)} file(s) to {directory}"))
    sys.exit(EXIT_OK if all(r.passed for r in results) else EXIT_FAILED_CHECK)


@cli.command(name="capacity")
@click.argument("channel", type=EXISTING_FILE)
@click.option("--tolerance", type=float, default=None, help="Stop when upper - lower bound is below this (bits)")
@click.pass_context
def capacity_command(ctx: click.Context, channel: Path, tolerance: Optional[float]):
    """Capacity of CHANNEL by Blahut-Arimoto."""
    settings = _settings(ctx)
    result = capacity(read_channel(channel), tolerance_bits=_pick(tolerance, settings.capacity_tolerance))
    display.show_capacity(console, result)


@cli.command(name="more-capable")
@click.argument("channel_a", type=EXISTING_FILE)
@click.argument("channel_b", type=EXISTING_FILE)
@click.option("--grid", type=click.IntRange(min=1), default=None, help="Simplex grid resolution")
@click.option("--samples", type=click.IntRange(min=0), default=None, help="Number of Dirichlet samples")
@click.option("--seed", type=int, default=None)
@click.pass_context
def more_capable(
    ctx: click.Context, channel_a: Path, channel_b: Path, grid: Optional[int], samples: Optional[int], seed: Optional[int]
):
    """Search for a prior under which CHANNEL_A carries more information than CHANNEL_B."""
    settings = _settings(ctx)
    verdict = more_capable_refute(
        read_channel(channel_a),
        read_channel(channel_b),
        grid_resolution=_pick(grid, settings.grid_resolution),
        sample_count=_pick(samples, settings.sample_count),
        seed=_pick(seed, settings.seed),
    )
    display.show_capability(console, verdict)


def main():
    """Entry point for the ``channel-compare`` script."""
    cli(prog_name="channel-compare")


if __name__ == "__main__":
    main()
