"""Monte Carlo checks of the qualitative simulation results.

Every check plays full-size games (201 agents, sigma 80, 500 steps) with at
least 100 replicates and compares means in units of their own standard errors.
"""

from dataclasses import replace
import math
from pathlib import Path

import pytest

from vise_sim.config import ExperimentConfig, build_distributions, parse_strategies
from vise_sim.models import DistributionSpec, Family, GameMode, SweepRow
from vise_sim.services.experiment import ExperimentRunner, run_sweep
from vise_sim.services.report_writer import ReportWriter

pytestmark = pytest.mark.slow

NORMAL = (DistributionSpec(Family.NORMAL, sigma=80.0),)
SP20 = build_distributions((Family.SYMMETRIZED_PARETO,), (20.0,), 80.0)

BASE = ExperimentConfig(
    distributions=NORMAL,
    mu_grid=(0.0,),
    replicates=100,
    strategies=parse_strategies("egoist"),
    mode=GameMode.NO_EXTINCTION,
    base_seed=2024,
)


def by_mu(rows: list[SweepRow]) -> dict[float, SweepRow]:
    return {row.mu: row for row in rows}


def stderr(row: SweepRow, metric: str) -> float:
    value = getattr(row, f"{metric}_stderr")
    assert value is not None
    return value


def combined(first: SweepRow, second: SweepRow, metric: str) -> float:
    return math.hypot(stderr(first, metric), stderr(second, metric))


def test_pit_of_losses_for_normal_egoists() -> None:
    """Egoists lose capital in moderately unfavorable normal environments."""
    rows = by_mu(run_sweep(replace(BASE, mu_grid=(-25.0, -13.0, 0.0))))

    assert rows[-13.0].aci_mean + 3.0 * stderr(rows[-13.0], "aci") < 0.0
    assert rows[0.0].aci_mean - 3.0 * stderr(rows[0.0], "aci") > 0.0
    assert rows[-25.0].aci_mean + 3.0 * stderr(rows[-25.0], "aci") >= -0.05


def test_no_pit_for_heavy_tailed_egoists() -> None:
    """Under SP k=20 tails egoists never lose noticeably on average."""
    rows = run_sweep(replace(BASE, distributions=SP20, mu_grid=(-20.0, -16.0, -12.0, -8.0, -4.0, 0.0)))
    for row in rows:
        assert row.aci_mean + 3.0 * stderr(row, "aci") >= -0.1


def test_full_window_altruists_match_closed_form() -> None:
    """At mu = 0 the ACI of full-window altruists is sigma / sqrt(2 pi n)."""
    [row] = run_sweep(replace(BASE, strategies=parse_strategies("altruist:100")))
    expected = 80.0 / math.sqrt(2.0 * math.pi * 201)
    assert expected == pytest.approx(2.2511, abs=1e-4)
    assert abs(row.aci_mean - expected) <= 3.0 * stderr(row, "aci")


def test_egoists_survive_aggressive_heavy_tailed_environments() -> None:
    """Egoists protect themselves from extinction better than full-window altruists."""
    egoist, altruist = run_sweep(
        replace(
            BASE,
            distributions=SP20,
            mu_grid=(-15.0,),
            strategies=parse_strategies("egoist, altruist:100"),
            mode=GameMode.EXTINCTION,
        )
    )
    gap = egoist.survival_mean - altruist.survival_mean
    assert gap >= 3.0 * combined(egoist, altruist, "survival")


def test_small_windows_survive_favorable_environments() -> None:
    """With mu = 10 narrow windows survive better while full windows earn more."""
    narrow, full = run_sweep(
        replace(
            BASE,
            mu_grid=(10.0,),
            replicates=200,
            strategies=parse_strategies("altruist:30, altruist:100"),
            mode=GameMode.EXTINCTION,
        )
    )
    assert narrow.survival_mean - full.survival_mean >= 2.0 * combined(narrow, full, "survival")
    assert full.aci_mean >= narrow.aci_mean


def test_sweep_bytes_do_not_depend_on_workers(tmp_path: Path) -> None:
    """Serial and eight-worker sweeps write identical CSV files."""
    config = replace(
        BASE,
        distributions=build_distributions((Family.NORMAL, Family.STUDENT_T3), None, 80.0),
        mu_grid=(-10.0, 0.0),
        n=31,
        steps=60,
        replicates=8,
        strategies=parse_strategies("egoist, altruist:65"),
        mode=GameMode.EXTINCTION,
    )
    serial = ReportWriter.write_sweep_csv(ExperimentRunner(1).run_sweep(config), tmp_path / "serial.csv")
    pooled = ReportWriter.write_sweep_csv(ExperimentRunner(8).run_sweep(config), tmp_path / "pooled.csv")
    assert serial.read_bytes() == pooled.read_bytes()
