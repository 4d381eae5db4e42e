"""Unit tests for MetricsCalculator."""

import logging
import math

import pytest

from vise_sim.errors import UndefinedMetricError
from vise_sim.models import Family, GameMode, GameResult, SweepRow
from vise_sim.services.metrics import MetricsCalculator


def game(numerator: float, denominator: int = 1, survivors: int = 10, accepted: int = 1) -> GameResult:
    return GameResult(
        aci_numerator=numerator,
        aci_denominator=denominator,
        survivors=survivors,
        accepted_steps=accepted,
        played_steps=4,
    )


def row(strategy: str, window: float | None, mu: float, aci: float) -> SweepRow:
    return SweepRow(
        family=Family.NORMAL,
        k=None,
        mu=mu,
        sigma=80.0,
        n=201,
        c0=40.0,
        steps=500,
        mode=GameMode.NO_EXTINCTION,
        strategy=strategy,
        window_pct=window,
        replicates=10,
        base_seed=1,
        aci_mean=aci,
        aci_stderr=0.0,
        survival_mean=1.0,
        survival_stderr=0.0,
        accept_share_mean=0.5,
    )


def test_aci() -> None:
    """Test ACI as received increments per alive agent-step."""
    assert MetricsCalculator.aci(game(10.0, 5)) == 2.0


def test_aci_undefined_without_agent_steps() -> None:
    """Test that a game without agent-steps has no ACI."""
    with pytest.raises(UndefinedMetricError):
        MetricsCalculator.aci(game(0.0, 0))


def test_survival_rate() -> None:
    """Test survival relative to the original society size."""
    assert MetricsCalculator.survival_rate(game(0.0, survivors=67), 201) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        MetricsCalculator.survival_rate(game(0.0), 0)


def test_accept_share() -> None:
    assert MetricsCalculator.accept_share(game(0.0, accepted=3)) == 0.75


def test_aggregate_mean_and_stderr() -> None:
    """Test two games with ACI 1 and 3: mean 2, standard error 1."""
    summary = MetricsCalculator.aggregate([game(1.0), game(3.0)], 10)
    assert summary.replicates == 2
    assert summary.aci_mean == 2.0
    assert summary.aci_stderr is not None
    assert math.isclose(summary.aci_stderr, 1.0)
    assert summary.survival_mean == 1.0
    assert summary.survival_stderr == 0.0


def test_aggregate_identical_replicates() -> None:
    """Test that identical replicates have zero standard error."""
    summary = MetricsCalculator.aggregate([game(1.5, 2)] * 5, 10)
    assert summary.aci_mean == 0.75
    assert summary.aci_stderr == 0.0


def test_aggregate_single_replicate(caplog: pytest.LogCaptureFixture) -> None:
    """Test that one replicate gives means without standard errors."""
    with caplog.at_level(logging.WARNING):
        summary = MetricsCalculator.aggregate([game(4.0, 2, survivors=5)], 10)
    assert summary.aci_mean == 2.0
    assert summary.aci_stderr is None
    assert summary.survival_mean == 0.5
    assert summary.survival_stderr is None
    assert "standard errors" in caplog.text


def test_aggregate_rejects_empty_input() -> None:
    with pytest.raises(ValueError, match="empty"):
        MetricsCalculator.aggregate([], 10)


def test_closest_window() -> None:
    """Test which altruist curve tracks the egoist curve best."""
    rows = [
        row("egoist", None, -5.0, -1.0),
        row("egoist", None, 0.0, 2.0),
        row("altruist", 30.0, -5.0, -3.0),
        row("altruist", 30.0, 0.0, 1.0),
        row("altruist", 65.0, -5.0, -1.2),
        row("altruist", 65.0, 0.0, 2.1),
        row("altruist", 100.0, -5.0, 0.0),
        row("altruist", 100.0, 0.0, 2.2),
    ]
    assert MetricsCalculator.closest_window(rows, "normal") == 65.0
    assert MetricsCalculator.closest_window(rows, "sp(k=20)") is None
    assert MetricsCalculator.closest_window(rows[2:], "normal") is None
