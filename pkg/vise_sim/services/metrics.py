"""Efficiency criteria of voting strategies.

This module provides the MetricsCalculator class, which computes the average
one-step capital increment (ACI) and survival rate of a game and aggregates
them across replicate games.
"""

from collections import defaultdict
from collections.abc import Sequence
import logging
import math

from vise_sim.errors import UndefinedMetricError
from vise_sim.models import GameResult, ReplicateSummary, StrategyKind, SweepRow

logger = logging.getLogger(__name__)


def _mean_and_stderr(values: Sequence[float]) -> tuple[float, float | None]:
    # fsum is exactly rounded, so both statistics are independent of replicate order.
    count = len(values)
    mean = math.fsum(values) / count
    if count < 2:
        return mean, None
    variance = math.fsum((v - mean) ** 2 for v in values) / (count - 1)
    return mean, math.sqrt(variance / count)


class MetricsCalculator:
    """Per-game criteria and their aggregation over replicates."""

    @staticmethod
    def aci(result: GameResult) -> float:
        """Average one-step capital increment per alive agent.

        Rejected steps count as zero increments; agents no longer count once
        eliminated.

        Raises:
            UndefinedMetricError: If no agent-step was played.
        """
        if result.aci_denominator <= 0:
            raise UndefinedMetricError("ACI is undefined for a game without played agent-steps")
        return result.aci_numerator / result.aci_denominator

    @staticmethod
    def survival_rate(result: GameResult, n: int) -> float:
        """Share of the original ``n`` agents alive at the end of the game."""
        if n < 1:
            raise ValueError(f"original society size must be at least 1, got {n}")
        return result.survivors / n

    @staticmethod
    def accept_share(result: GameResult) -> float:
        if result.played_steps == 0:
            return 0.0
        return result.accepted_steps / result.played_steps

    @staticmethod
    def aggregate(results: Sequence[GameResult], n: int) -> ReplicateSummary:
        """Mean and standard error of the per-game criteria.

        Per-game ACI is computed first and then averaged. Standard errors are
        the sample standard deviation over sqrt(replicates), or None for a
        single replicate.

        Raises:
            ValueError: If ``results`` is empty.
        """
        if not results:
            raise ValueError("cannot aggregate an empty list of game results")
        if len(results) < 2:
            logger.warning("Fewer than two replicates; standard errors are not reported")

        aci_mean, aci_stderr = _mean_and_stderr([MetricsCalculator.aci(r) for r in results])
        survival_mean, survival_stderr = _mean_and_stderr(
            [MetricsCalculator.survival_rate(r, n) for r in results]
        )
        accept_mean, _ = _mean_and_stderr([MetricsCalculator.accept_share(r) for r in results])
        return ReplicateSummary(
            replicates=len(results),
            aci_mean=aci_mean,
            aci_stderr=aci_stderr,
            survival_mean=survival_mean,
            survival_stderr=survival_stderr,
            accept_share_mean=accept_mean,
        )

    @staticmethod
    def closest_window(rows: Sequence[SweepRow], distribution_label: str) -> float | None:
        """Altruist support window (in percent) whose ACI curve is closest to the egoists'.

        Compares curves of one distribution by mean squared ACI difference
        over the mu values both curves share.

        Returns:
            The window percentage, or None if no egoist or altruist curve exists.
        """
        selected = [r for r in rows if r.distribution_label == distribution_label]
        egoist = {r.mu: r.aci_mean for r in selected if r.strategy == StrategyKind.EGOIST}
        altruists: dict[float, dict[float, float]] = defaultdict(dict)
        for row in selected:
            if row.window_pct is not None:
                altruists[row.window_pct][row.mu] = row.aci_mean

        best: tuple[float, float] | None = None
        for window, curve in sorted(altruists.items()):
            shared = sorted(set(curve) & set(egoist))
            if not shared:
                continue
            distance = math.fsum((curve[mu] - egoist[mu]) ** 2 for mu in shared) / len(shared)
            if best is None or distance < best[0]:
                best = (distance, window)
        return None if best is None else best[1]


__all__ = ["MetricsCalculator"]
