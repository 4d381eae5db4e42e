import argparse
from collections.abc import Sequence
import logging
from pathlib import Path
import sys

from dotenv import load_dotenv

from vise_sim.config import (
    ExperimentConfig,
    debug_from_env,
    load_config,
    parse_distribution_list,
    parse_grid,
    workers_from_env,
)
from vise_sim.errors import ConfigError, DomainError
from vise_sim.models import DistributionSpec, StepRecord, SweepRow
from vise_sim.services.experiment import ExperimentRunner
from vise_sim.services.game_runner import run_game
from vise_sim.services.metrics import MetricsCalculator
from vise_sim.services.presets import PRESETS, get_preset
from vise_sim.services.report_writer import ReportWriter
from vise_sim.services.tail_heaviness import find_tail_crossing, heaviest_family

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3

DEFAULT_ZGRID = "log:0.01:100000000000:600"
DEFAULT_TAIL_FAMILIES = "normal, t3, laplace, sp:2.01, sp:2.1, sp:3, sp:20"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vise",
        description="Monte Carlo simulator of voting in a stochastic environment.",
    )
    parser.add_argument("--debug", action="store_true", help="verbose logging")
    commands = parser.add_subparsers(dest="command", required=True)

    sweep = commands.add_parser("sweep", help="run a distribution x mu x strategy sweep")
    source = sweep.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", type=Path, help="experiment configuration file")
    source.add_argument("--preset", choices=sorted(PRESETS), help="named reference sweep")
    sweep.add_argument("--out", type=Path, required=True, help="output CSV path")
    sweep.add_argument("--workers", type=int, default=None, help="worker processes")
    sweep.add_argument("--plot-dir", type=Path, default=None, help="also write plot tables here")
    sweep.add_argument("--quiet", action="store_true", help="hide the progress bar")

    tails = commands.add_parser("tails", help="tabulate log10 tail heaviness")
    tails.add_argument("--zgrid", default=DEFAULT_ZGRID, help="z grid (list, range or log:...)")
    tails.add_argument("--families", default=DEFAULT_TAIL_FAMILIES, help="e.g. normal,sp:2.01")
    tails.add_argument("--out", type=Path, required=True, help="output CSV path")

    game = commands.add_parser("game", help="trace a single game step by step")
    game.add_argument("--config", type=Path, required=True, help="single-cell configuration")
    game.add_argument("--seed", type=int, default=None, help="game seed (default: base_seed)")
    game.add_argument("--out", type=Path, required=True, help="output trace CSV path")
    return parser


def _log_closest_windows(config: ExperimentConfig, rows: Sequence[SweepRow]) -> None:
    for template in config.distributions:
        window = MetricsCalculator.closest_window(rows, template.label)
        if window is not None:
            logger.info(f"{template.label}: altruist window closest to egoists is {window:g}%")


def cmd_sweep(args: argparse.Namespace) -> None:
    config = load_config(args.config) if args.config else get_preset(args.preset)
    workers = args.workers if args.workers is not None else workers_from_env()
    if workers < 1:
        raise ConfigError(f"--workers must be a positive integer, got {workers}")
    runner = ExperimentRunner(workers, show_progress=not args.quiet)
    rows = runner.run_sweep(config)
    ReportWriter.write_sweep_csv(rows, args.out)
    if args.plot_dir is not None:
        ReportWriter.write_plot_data(rows, args.plot_dir)
    _log_closest_windows(config, rows)


def _log_tail_summary(z_grid: Sequence[float], specs: Sequence[DistributionSpec]) -> None:
    positive = [z for z in z_grid if z > 0.0]
    if len(positive) < 2:
        return
    z_min, z_max = min(positive), max(positive)
    reference = specs[0]
    for other in specs[1:]:
        crossing = find_tail_crossing(reference, other, z_min, z_max, grid_points=1000)
        if crossing is not None:
            logger.info(f"Tails of {reference.label} and {other.label} first cross at z={crossing:.4g}")
    heaviest = specs[heaviest_family(specs, z_max)]
    logger.info(f"Heaviest tail at z={z_max:g}: {heaviest.label}")


def cmd_tails(args: argparse.Namespace) -> None:
    z_grid = parse_grid(args.zgrid)
    specs = parse_distribution_list(args.families)
    ReportWriter.write_tails(z_grid, specs, args.out)
    _log_tail_summary(z_grid, specs)


def _single_cell(config: ExperimentConfig) -> None:
    cells = len(config.distributions) * len(config.mu_grid) * len(config.strategies)
    if cells != 1:
        raise ConfigError(
            f"game needs a single-cell config (one family, one mu, one strategy), got {cells} cells"
        )


def cmd_game(args: argparse.Namespace) -> None:
    config = load_config(args.config)
    _single_cell(config)
    seed = args.seed if args.seed is not None else config.base_seed
    dist = config.cell_distribution(config.distributions[0], config.mu_grid[0])
    records: list[StepRecord] = []
    result = run_game(
        dist,
        config.strategies[0],
        config.mode_config,
        config.n,
        seed,
        recorder=records.append,
    )
    ReportWriter.write_trace(records, args.out)
    logger.info(
        f"Game {dist.label} mu={dist.mu:g} {config.strategies[0].label}: "
        f"{result.played_steps} steps, {result.accepted_steps} accepted, "
        f"survival {MetricsCalculator.survival_rate(result, config.n):.3f}"
    )


_COMMANDS = {"sweep": cmd_sweep, "tails": cmd_tails, "game": cmd_game}


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return its exit code."""
    load_dotenv()
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.debug or debug_from_env() else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        _COMMANDS[args.command](args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except DomainError as e:
        logger.error(f"Domain error: {e}")
        return EXIT_DOMAIN
    return EXIT_OK


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
