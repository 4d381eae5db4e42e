"""Sweep orchestration for vise-sim.

A sweep is the grid distribution x mu x strategy. Every cell plays
``replicates`` independent games; each game gets a seed derived statelessly
from the base seed, a key identifying its cell and its replicate index, so
results do not depend on worker count, task order or the rest of the grid.
"""

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
import hashlib
import logging
import multiprocessing as mp
import struct

from tqdm import tqdm

from vise_sim.config import ExperimentConfig, validate_config
from vise_sim.errors import DomainError, SweepCellError
from vise_sim.models import (
    DistributionSpec,
    Family,
    GameResult,
    ModeConfig,
    StrategyConfig,
    SweepRow,
)

from .distributions import validate_spec
from .game_runner import run_game, validate_game
from .metrics import MetricsCalculator
from .voting_rules import VotingRules

logger = logging.getLogger(__name__)

_U64 = (1 << 64) - 1


def _hash_to_u64(payload: bytes) -> int:
    digest = hashlib.blake2b(payload, digest_size=8, person=b"vise-sim").digest()
    return int.from_bytes(digest, "little", signed=False)


def derive_seed(base_seed: int, cell_index: int, replicate_index: int) -> int:
    """Stateless 64-bit seed for one replicate of one cell."""
    payload = struct.pack(
        "<QQQ", base_seed & _U64, cell_index & _U64, replicate_index & _U64
    )
    return _hash_to_u64(payload)


def cell_key(dist: DistributionSpec, strategy: StrategyConfig | None) -> int:
    """Stable 64-bit identifier of a cell, derived from its parameters.

    With ``strategy=None`` the key identifies the (distribution, mu) pair
    only, which is how common random numbers are shared across strategies.
    """
    k_text = repr(float(dist.k)) if dist.family is Family.SYMMETRIZED_PARETO and dist.k else "-"
    parts = [str(dist.family), k_text, repr(float(dist.mu)), repr(float(dist.sigma))]
    if strategy is not None:
        parts += [str(strategy.kind), repr(float(strategy.window_fraction))]
    return _hash_to_u64("|".join(parts).encode("utf-8"))


@dataclass(frozen=True)
class SweepCell:
    position: int
    distribution: DistributionSpec
    strategy: StrategyConfig
    stream_key: int

    @property
    def label(self) -> str:
        return f"{self.distribution.label} mu={self.distribution.mu:g} {self.strategy.label}"


@dataclass(frozen=True)
class ReplicateTask:
    position: int
    replicate: int
    distribution: DistributionSpec
    strategy: StrategyConfig
    mode: ModeConfig
    n: int
    seed: int


def build_cells(config: ExperimentConfig) -> list[SweepCell]:
    """Cells in output order: distribution, then mu, then strategy."""
    cells: list[SweepCell] = []
    for template in config.distributions:
        for mu in config.mu_grid:
            dist = config.cell_distribution(template, mu)
            for strategy in config.strategies:
                key = cell_key(dist, None if config.common_random_numbers else strategy)
                cells.append(SweepCell(len(cells), dist, strategy, key))
    return cells


def _validate_cells(cells: Iterable[SweepCell], config: ExperimentConfig) -> None:
    for cell in cells:
        try:
            validate_spec(cell.distribution)
            VotingRules.validate_strategy(cell.strategy)
            validate_game(config.mode_config, config.n, 0)
        except DomainError as e:
            raise SweepCellError(cell.label, str(e)) from e


def _play_replicate(task: ReplicateTask) -> tuple[int, int, GameResult]:
    result = run_game(task.distribution, task.strategy, task.mode, task.n, task.seed)
    return task.position, task.replicate, result


def _build_row(config: ExperimentConfig, cell: SweepCell, results: list[GameResult]) -> SweepRow:
    summary = MetricsCalculator.aggregate(results, config.n)
    logger.debug(
        f"Cell [{cell.label}]: aci={summary.aci_mean:.6g} survival={summary.survival_mean:.4f}"
    )
    dist = cell.distribution
    return SweepRow(
        family=dist.family,
        k=dist.k if dist.family is Family.SYMMETRIZED_PARETO else None,
        mu=dist.mu,
        sigma=dist.sigma,
        n=config.n,
        c0=config.c0,
        steps=config.steps,
        mode=config.mode,
        strategy=str(cell.strategy.kind),
        window_pct=cell.strategy.window_pct,
        replicates=summary.replicates,
        base_seed=config.base_seed,
        aci_mean=summary.aci_mean,
        aci_stderr=summary.aci_stderr,
        survival_mean=summary.survival_mean,
        survival_stderr=summary.survival_stderr,
        accept_share_mean=summary.accept_share_mean,
    )


class ExperimentRunner:
    """Runs sweep grids serially or on a process pool.

    Attributes:
        parallelism: Number of worker processes; 1 runs in-process.
        show_progress: Whether to draw a progress bar on stderr.
    """

    def __init__(self, parallelism: int = 1, *, show_progress: bool = False) -> None:
        if parallelism < 1:
            raise ValueError(f"parallelism must be at least 1, got {parallelism}")
        self.parallelism = parallelism
        self.show_progress = show_progress

    def _execute(self, tasks: list[ReplicateTask]) -> Iterator[tuple[int, int, GameResult]]:
        workers = min(self.parallelism, len(tasks))
        if workers <= 1:
            yield from map(_play_replicate, tasks)
            return
        if workers < self.parallelism:
            logger.warning(f"Only {len(tasks)} games to play; using {workers} workers")
        chunksize = max(1, len(tasks) // (workers * 8))
        ctx = mp.get_context("spawn")
        with ctx.Pool(workers) as pool:
            yield from pool.imap_unordered(_play_replicate, tasks, chunksize=chunksize)

    def run_sweep(self, config: ExperimentConfig) -> list[SweepRow]:
        """Play every cell of ``config`` and aggregate its replicates.

        Returns:
            One SweepRow per cell in deterministic cell order. The output is
            a pure function of the configuration and its base seed.

        Raises:
            ConfigError: If the grid is malformed or repeats a distribution.
            SweepCellError: If a cell's parameters are outside their domain.
        """
        validate_config(config)
        cells = build_cells(config)
        _validate_cells(cells, config)
        tasks = [
            ReplicateTask(
                position=cell.position,
                replicate=rep,
                distribution=cell.distribution,
                strategy=cell.strategy,
                mode=config.mode_config,
                n=config.n,
                seed=derive_seed(config.base_seed, cell.stream_key, rep),
            )
            for cell in cells
            for rep in range(config.replicates)
        ]
        logger.info(
            f"Running {len(cells)} cells x {config.replicates} replicates "
            f"on {min(self.parallelism, len(tasks))} worker(s)"
        )

        results: dict[tuple[int, int], GameResult] = {}
        progress = tqdm(
            self._execute(tasks),
            total=len(tasks),
            desc="games",
            disable=not self.show_progress or len(cells) < 2,
        )
        for position, replicate, result in progress:
            results[position, replicate] = result

        rows = [
            _build_row(config, cell, [results[cell.position, r] for r in range(config.replicates)])
            for cell in cells
        ]
        logger.info(f"Sweep finished: {len(rows)} rows")
        return rows


def run_sweep(config: ExperimentConfig, parallelism: int = 1) -> list[SweepRow]:
    """Convenience wrapper around :meth:`ExperimentRunner.run_sweep`."""
    return ExperimentRunner(parallelism).run_sweep(config)


__all__ = ["ExperimentRunner", "build_cells", "cell_key", "derive_seed", "run_sweep"]
