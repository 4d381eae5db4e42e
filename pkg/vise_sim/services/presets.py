"""Named sweep grids for the reference experiments.

All presets use n=201 agents, sigma=80, C0=40, M=500 steps and 100
replicates; they differ in distributions, mu range, societies and mode.
"""

from collections.abc import Callable

from vise_sim.config import (
    ExperimentConfig,
    build_distributions,
    parse_grid,
    parse_strategies,
)
from vise_sim.errors import ConfigError
from vise_sim.models import Family, GameMode

_HEAVY_TAILED = (Family.NORMAL, Family.SYMMETRIZED_PARETO, Family.STUDENT_T3)


def _no_extinction() -> ExperimentConfig:
    return ExperimentConfig(
        distributions=build_distributions(_HEAVY_TAILED, (20.0,), 80.0),
        mu_grid=parse_grid("-25:1:5"),
        mode=GameMode.NO_EXTINCTION,
    )


def _extinction() -> ExperimentConfig:
    return ExperimentConfig(
        distributions=build_distributions(_HEAVY_TAILED, (20.0,), 80.0),
        mu_grid=parse_grid("-25:1:5"),
        mode=GameMode.EXTINCTION,
    )


def _super_heavy() -> ExperimentConfig:
    return ExperimentConfig(
        distributions=build_distributions(
            (Family.NORMAL, Family.SYMMETRIZED_PARETO),
            (2.01, 2.1, 2.3, 20.0, 200.0, 500.0),
            80.0,
        ),
        mu_grid=parse_grid("-25:1:15"),
        strategies=parse_strategies("egoist, altruist:65, altruist:100"),
        mode=GameMode.EXTINCTION,
    )


def _favorable() -> ExperimentConfig:
    return ExperimentConfig(
        distributions=build_distributions(_HEAVY_TAILED, (20.0,), 80.0),
        mu_grid=parse_grid("0:1:15"),
        strategies=parse_strategies(
            "egoist, altruist:30, altruist:50, altruist:65, altruist:80, altruist:100"
        ),
        mode=GameMode.EXTINCTION,
    )


PRESETS: dict[str, Callable[[], ExperimentConfig]] = {
    "no-extinction": _no_extinction,
    "extinction": _extinction,
    "super-heavy": _super_heavy,
    "favorable": _favorable,
}


def get_preset(name: str) -> ExperimentConfig:
    """Return the named preset configuration.

    Raises:
        ConfigError: If no preset has this name.
    """
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; expected one of {sorted(PRESETS)}")
    return PRESETS[name]()


__all__ = ["PRESETS", "get_preset"]
