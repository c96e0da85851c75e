"""wsst CLI - Main entry point."""
from pathlib import Path
from typing import Any, Dict

import click

from cli import __version__
from cli.dispatch import CliInvocation, dispatch
from cli.utils import setup_logging
from src.config import settings

COMMON_KEYS = ("config_path", "output_dir", "seed", "workers")


def common_options(fn):
    """Options shared by every subcommand."""
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                     help="Flat YAML run config (a previous run-manifest.yaml works)"),
        click.option("--out", "output_dir", type=click.Path(file_okay=False), default=None,
                     help="Output directory (default: $WSST_OUTPUT_DIR or ./results)"),
        click.option("--seed", type=int, default=None, help="Master seed"),
        click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker processes"),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def completion_options(fn):
    """WsstConfig overrides."""
    options = [
        click.option("--eps-lambda", type=float, default=None, help="lambda_target = eps * max |observed|"),
        click.option("--q", type=float, default=None, help="Continuation factor in (0, 1)"),
        click.option("--rounds", "K", type=int, default=None, help="Reweighting rounds K"),
        click.option("--tol", type=float, default=None, help="Relative change stopping tolerance"),
        click.option("--tau", type=float, default=None, help="Ridge parameter tau >= 0"),
        click.option("--max-inner-iters", type=int, default=None),
        click.option("--rank-cap", type=int, default=None, help="Truncate SVDs at this rank"),
        click.option("--dense-threshold", type=int, default=None),
        click.option("--strict", is_flag=True, default=None, help="Fail instead of flagging stages that hit the iteration cap"),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def solver_options(fn):
    """SolverConfig overrides."""
    options = [
        click.option("--max-iters", type=int, default=None, help="L1 solver iteration cap"),
        click.option("--obj-tol", type=float, default=None, help="Relative duality-gap tolerance"),
        click.option("--strict", is_flag=True, default=None, help="Fail instead of flagging non-convergence"),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _run(ctx: click.Context, subcommand: str, options: Dict[str, Any]):
    common = {key: options.pop(key) for key in COMMON_KEYS}
    overrides = {key: value for key, value in options.items() if value is not None}
    inv = CliInvocation(
        subcommand=subcommand,
        config_path=common["config_path"],
        overrides=overrides,
        output_dir=Path(common["output_dir"]) if common["output_dir"] else settings.output_dir,
        seed=common["seed"],
        workers=common["workers"],
    )
    ctx.exit(dispatch(inv))


@click.group()
@click.version_option(version=__version__, prog_name="wsst")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging")
@click.pass_context
def cli(ctx, verbose):
    """
    Weighted reconstruction experiments: reweighted basis pursuit and WSST.

    Examples:
        wsst cs-phase --n 128 --reps 20 --eta 1e-5 --seed 1 --out results/
        wsst mc-phase --n 100 --rank-grid 2:30:2 --reps 5
        wsst certify --problem problem.csv --weights w.csv
        wsst complete --triplets observed.csv --solver wsst

    Environment Variables:
        WSST_OUTPUT_DIR      default output directory
        WSST_LOG_LEVEL       logging level (default: INFO)
        WSST_WORKERS         default worker processes
        WSST_MOVIELENS_100K  default ratings file for collab
    """
    ctx.ensure_object(dict)
    setup_logging(settings.log_level, verbose)


@cli.command(name="cs-phase")
@click.option("--n", type=int, default=None, help="Signal dimension N")
@click.option("--s-grid", default=None, help="Sparsities, start:stop:step or a,b,c")
@click.option("--m-grid", default=None, help="Measurement counts, start:stop:step or a,b,c")
@click.option("--reps", type=int, default=None)
@click.option("--epsilon", type=float, default=None, help="Reweighting floor")
@click.option("--k-weighted", type=int, default=None, help="Weighted decoder index k")
@click.option("--eta", type=float, default=None, help="Exact-recovery threshold")
@solver_options
@common_options
@click.pass_context
def cs_phase(ctx, **options):
    """Exact-recovery counts of basis pursuit vs. reweighted basis pursuit."""
    _run(ctx, "cs-phase", options)


@cli.command(name="a0-track")
@click.option("--n", type=int, default=None)
@click.option("--m", type=int, default=None)
@click.option("--s", type=int, default=None)
@click.option("--reps", type=int, default=None)
@click.option("--k-max", type=int, default=None, help="Reweighting iterations tracked")
@click.option("--epsilon", type=float, default=None)
@solver_options
@common_options
@click.pass_context
def a0_track(ctx, **options):
    """Weight-condition constant and error along the reweighting iterations."""
    _run(ctx, "a0-track", options)


@cli.command(name="mc-phase")
@click.option("--n", type=int, default=None, help="Matrix size n x n")
@click.option("--rank-grid", default=None, help="Ranks, start:stop:step or a,b,c")
@click.option("--sample-frac", type=float, default=None)
@click.option("--reps", type=int, default=None)
@click.option("--threshold", type=float, default=None, help="Median error defining recovery")
@completion_options
@common_options
@click.pass_context
def mc_phase(ctx, **options):
    """Relative errors and ranks of NNM vs. WSST over a rank grid."""
    _run(ctx, "mc-phase", options)


@cli.command()
@click.option("--image", type=click.Path(dir_okay=False), default=None, help="Binary PGM image")
@click.option("--size", type=int, default=None, help="Synthetic image size when no --image")
@click.option("--rank", type=int, default=None, help="Ground-truth truncation rank")
@click.option("--sample-frac", type=float, default=None)
@completion_options
@common_options
@click.pass_context
def inpaint(ctx, **options):
    """Inpaint a rank-truncated image with NNM and WSST."""
    _run(ctx, "inpaint", options)


@cli.command()
@click.option("--data", type=click.Path(dir_okay=False), default=None, help="u.data or ratings.dat")
@completion_options
@common_options
@click.pass_context
def collab(ctx, **options):
    """Held-out error of NNM and WSST on MovieLens ratings."""
    _run(ctx, "collab", options)


@cli.command()
@click.option("--problem", type=click.Path(dir_okay=False), default=None, help="CSV with a_0..a_{N-1}, y")
@click.option("--weights", type=click.Path(dir_okay=False), default=None, help="CSV with a w column")
@click.option("--signal", type=click.Path(dir_okay=False), default=None, help="CSV with an x column")
@solver_options
@common_options
@click.pass_context
def certify(ctx, **options):
    """Dual certificate for a weighted basis-pursuit problem."""
    _run(ctx, "certify", options)


@cli.command()
@click.option("--triplets", type=click.Path(dir_okay=False), default=None, help="CSV with row,col,value")
@click.option("--solver", type=click.Choice(["nnm", "wsst", "both"]), default=None)
@click.option("--n-rows", type=int, default=None)
@click.option("--n-cols", type=int, default=None)
@completion_options
@common_options
@click.pass_context
def complete(ctx, **options):
    """Complete a matrix given as observed triplets."""
    _run(ctx, "complete", options)


@cli.command()
def examples():
    """Show usage examples."""
    examples_text = """
[bold cyan]Compressed sensing[/bold cyan]
  wsst cs-phase --n 128 --s-grid 2:40:2 --m-grid 10:120:10 --reps 20
  wsst cs-phase --n 256 --reps 50 --eta 1e-6 --workers 8   # full-scale map
  wsst a0-track --m 110 --s 45 --k-max 30 --reps 10

[bold cyan]Certificates[/bold cyan]
  wsst certify --problem problem.csv --weights w.csv             # solve, then certify
  wsst certify --problem problem.csv --weights w.csv --signal x.csv

[bold cyan]Matrix completion[/bold cyan]
  wsst mc-phase --n 100 --rank-grid 2:30:2 --sample-frac 0.3 --reps 5
  wsst inpaint --image lena.pgm --rank 50 --sample-frac 0.3
  wsst collab --data ml-100k/u.data --rank-cap 200
  wsst complete --triplets observed.csv --solver wsst --rounds 20

[bold cyan]Reproducing a run[/bold cyan]
  wsst mc-phase --config results/run-manifest.yaml --out rerun/
    """

    try:
        from rich.console import Console
        console = Console()
        console.print(examples_text)
    except ImportError:
        # Fallback without rich formatting
        print("\nCompressed sensing")
        print("  wsst cs-phase --n 128 --reps 20")
        print("  wsst a0-track --m 110 --s 45")
        print("\nCertificates")
        print("  wsst certify --problem problem.csv --weights w.csv")
        print("\nMatrix completion")
        print("  wsst mc-phase --n 100 --rank-grid 2:30:2")
        print("  wsst inpaint --image lena.pgm --rank 50")
        print("  wsst collab --data ml-100k/u.data")
        print("  wsst complete --triplets observed.csv")


if __name__ == "__main__":
    cli()
