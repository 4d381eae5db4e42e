"""Experiment configuration for vise-sim.

This module defines the ExperimentConfig dataclass and reads it from
line-oriented ``key = value`` files. Keys that are missing take the defaults
of the reference experiments (n=201, sigma=80, C0=40, 500 steps).
"""

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field, replace
import io
import math
import os
from pathlib import Path

from dotenv.parser import Original, parse_stream

from vise_sim.errors import ConfigError
from vise_sim.models import (
    DistributionSpec,
    Family,
    GameMode,
    ModeConfig,
    StrategyConfig,
)

DEFAULT_MU_GRID = "-25:1:15"
DEFAULT_STRATEGIES = "egoist, altruist:30, altruist:50, altruist:65, altruist:80, altruist:100"
DEFAULT_SP_K = 20.0
MAX_GRID_POINTS = 100_000
WORKERS_ENV = "VISE_WORKERS"
DEBUG_ENV = "VISE_DEBUG"

_FAMILY_NAMES = {family.value: family for family in Family}
_MODE_NAMES = {mode.value: mode for mode in GameMode}


@dataclass(frozen=True)
class ExperimentConfig:
    """Configuration of one sweep.

    Attributes:
        distributions: Distribution templates (family and tail index); each
            cell takes its ``mu`` from ``mu_grid`` and its ``sigma`` from
            ``sigma``.
        mu_grid: Environment favorability values to sweep.
        sigma: Standard deviation of the proposals in every cell.
        n: Number of agents.
        c0: Initial capital of every agent.
        steps: Planned game length M.
        replicates: Independent games per cell.
        strategies: Societies to compare.
        mode: Extinction or no-extinction mode.
        base_seed: Root of all derived random streams.
        common_random_numbers: Share proposal streams across strategies
            within a (distribution, mu) pair.
    """

    distributions: tuple[DistributionSpec, ...] = field(
        default_factory=lambda: (DistributionSpec(Family.NORMAL, sigma=80.0),)
    )
    mu_grid: tuple[float, ...] = field(default_factory=lambda: parse_grid(DEFAULT_MU_GRID))
    sigma: float = 80.0
    n: int = 201
    c0: float = 40.0
    steps: int = 500
    replicates: int = 100
    strategies: tuple[StrategyConfig, ...] = field(
        default_factory=lambda: parse_strategies(DEFAULT_STRATEGIES)
    )
    mode: GameMode = GameMode.NO_EXTINCTION
    base_seed: int = 1
    common_random_numbers: bool = False

    @property
    def mode_config(self) -> ModeConfig:
        return ModeConfig(mode=self.mode, initial_capital=self.c0, max_steps=self.steps)

    def cell_distribution(self, template: DistributionSpec, mu: float) -> DistributionSpec:
        return replace(template, mu=float(mu), sigma=self.sigma)


def _split_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _parse_float(text: str, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"invalid {what} value: {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{what} must be finite, got {text!r}")
    return value


def _parse_int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"invalid {what} value: {text!r}; expected an integer") from None


def _parse_bool(text: str, what: str) -> bool:
    lowered = text.strip().lower()
    if lowered not in {"true", "false"}:
        raise ConfigError(f"invalid {what} value: {text!r}; expected true or false")
    return lowered == "true"


def parse_grid(text: str) -> tuple[float, ...]:
    """Parse a numeric grid.

    Accepted forms: a comma list (``-5, 0, 5``), an inclusive linear range
    ``start:step:stop`` and a geometric range ``log:start:stop:count``.

    Raises:
        ConfigError: If the text is not a valid, non-empty grid.
    """
    text = text.strip()
    if not text:
        raise ConfigError("grid must not be empty")
    if text.startswith("log:"):
        parts = text.split(":")[1:]
        if len(parts) != 3:
            raise ConfigError(f"geometric grid must be log:start:stop:count, got {text!r}")
        start, stop = _parse_float(parts[0], "grid start"), _parse_float(parts[1], "grid stop")
        count = _parse_int(parts[2], "grid count")
        if not (0.0 < start < stop) or not 2 <= count <= MAX_GRID_POINTS:
            raise ConfigError(f"geometric grid needs 0 < start < stop and count >= 2, got {text!r}")
        ratio = math.log(stop / start) / (count - 1)
        return tuple(start * math.exp(i * ratio) for i in range(count))
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range grid must be start:step:stop, got {text!r}")
        start, step, stop = (_parse_float(p, "grid bound") for p in parts)
        if step <= 0.0 or stop < start:
            raise ConfigError(f"range grid needs step > 0 and stop >= start, got {text!r}")
        count = math.floor((stop - start) / step + 1e-9) + 1
        if count > MAX_GRID_POINTS:
            raise ConfigError(f"range grid {text!r} has more than {MAX_GRID_POINTS} points")
        return tuple(round(start + i * step, 12) for i in range(count))
    values = tuple(_parse_float(p, "grid value") for p in _split_list(text))
    if not values:
        raise ConfigError("grid must not be empty")
    return values


def parse_strategies(text: str) -> tuple[StrategyConfig, ...]:
    """Parse ``egoist`` and ``altruist:<pct>`` entries of a comma list."""
    strategies: list[StrategyConfig] = []
    for item in _split_list(text):
        name, _, pct = item.partition(":")
        if name == "egoist" and not pct:
            strategies.append(StrategyConfig.egoist())
        elif name == "altruist" and pct:
            window = _parse_float(pct, "altruist window")
            if not 0.0 < window <= 100.0:
                raise ConfigError(f"altruist window must lie in (0, 100], got {pct}")
            strategies.append(StrategyConfig.altruist(window))
        else:
            raise ConfigError(f"unknown strategy {item!r}; expected egoist or altruist:<pct>")
    if not strategies:
        raise ConfigError("at least one strategy is required")
    return tuple(strategies)


def parse_families(text: str) -> tuple[Family, ...]:
    families: list[Family] = []
    for name in _split_list(text):
        if name not in _FAMILY_NAMES:
            raise ConfigError(f"unknown family {name!r}; expected one of {sorted(_FAMILY_NAMES)}")
        if _FAMILY_NAMES[name] in families:
            raise ConfigError(f"family {name!r} listed twice")
        families.append(_FAMILY_NAMES[name])
    if not families:
        raise ConfigError("at least one family is required")
    return tuple(families)


def parse_mode(text: str) -> GameMode:
    name = text.strip()
    if name not in _MODE_NAMES:
        raise ConfigError(f"unknown mode {name!r}; expected extinct or noextinct")
    return _MODE_NAMES[name]


def _require_distinct(specs: Sequence[DistributionSpec]) -> None:
    seen: set[str] = set()
    for spec in specs:
        if spec.label in seen:
            raise ConfigError(f"distribution {spec.label} is listed more than once")
        seen.add(spec.label)


def build_distributions(
    families: Iterable[Family], ks: Iterable[float] | None, sigma: float
) -> tuple[DistributionSpec, ...]:
    """Distribution templates: one per family and one per k for the SP family.

    Raises:
        ConfigError: If tail indices are given without the SP family, or a
            family or tail index repeats.
    """
    families = tuple(families)
    k_values = tuple(ks) if ks is not None else None
    if k_values is not None and Family.SYMMETRIZED_PARETO not in families:
        raise ConfigError("k is only meaningful together with family sp")
    specs: list[DistributionSpec] = []
    for family in families:
        if family is Family.SYMMETRIZED_PARETO:
            specs.extend(
                DistributionSpec(family, sigma=sigma, k=k) for k in (k_values or (DEFAULT_SP_K,))
            )
        else:
            specs.append(DistributionSpec(family, sigma=sigma))
    _require_distinct(specs)
    return tuple(specs)


def parse_distribution_list(text: str, sigma: float = 1.0) -> tuple[DistributionSpec, ...]:
    """Parse a comma list such as ``normal, t3, laplace, sp:2.01, sp:20``.

    Tail indices are attached to ``sp`` with a colon; other families take none.
    """
    specs: list[DistributionSpec] = []
    for item in _split_list(text):
        name, _, k_text = item.partition(":")
        if name not in _FAMILY_NAMES:
            raise ConfigError(f"unknown family {name!r}; expected one of {sorted(_FAMILY_NAMES)}")
        family = _FAMILY_NAMES[name]
        if family is Family.SYMMETRIZED_PARETO:
            if not k_text:
                raise ConfigError(f"family sp needs a tail index, e.g. sp:20, got {item!r}")
            specs.append(DistributionSpec(family, sigma=sigma, k=_parse_float(k_text, "k")))
        elif k_text:
            raise ConfigError(f"family {name!r} takes no tail index, got {item!r}")
        else:
            specs.append(DistributionSpec(family, sigma=sigma))
    if not specs:
        raise ConfigError("at least one distribution is required")
    _require_distinct(specs)
    return tuple(specs)


_KEYS: dict[str, Callable[[str], object]] = {
    "family": parse_families,
    "k": lambda v: tuple(_parse_float(p, "k") for p in _split_list(v)),
    "mu_grid": parse_grid,
    "sigma": lambda v: _parse_float(v, "sigma"),
    "n": lambda v: _parse_int(v, "n"),
    "c0": lambda v: _parse_float(v, "c0"),
    "steps": lambda v: _parse_int(v, "steps"),
    "replicates": lambda v: _parse_int(v, "replicates"),
    "strategies": parse_strategies,
    "mode": parse_mode,
    "base_seed": lambda v: _parse_int(v, "base_seed"),
    "common_random_numbers": lambda v: _parse_bool(v, "common_random_numbers"),
}


def _binding_line(original: Original) -> int:
    # The parser marks a binding where its leading blank lines start.
    raw = original.string
    leading = raw[: len(raw) - len(raw.lstrip())]
    return original.line + leading.count("\n")


def _read_bindings(text: str) -> dict[str, object]:
    values: dict[str, object] = {}
    for binding in parse_stream(io.StringIO(text)):
        line = _binding_line(binding.original)
        if binding.error:
            raise ConfigError(f"cannot parse {binding.original.string.strip()!r}", line=line)
        if binding.key is None:
            continue
        key = binding.key
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}", line=line)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", line=line)
        if binding.value is None:
            raise ConfigError(f"key {key!r} has no value", line=line)
        try:
            values[key] = _KEYS[key](binding.value)
        except ConfigError as e:
            raise ConfigError(e.message, line=line) from None
    return values


def parse_config_text(text: str) -> ExperimentConfig:
    """Build and validate an ExperimentConfig from config-file text.

    Raises:
        ConfigError: On unknown, duplicate, conflicting or malformed keys.
    """
    values = _read_bindings(text)
    sigma = float(values.pop("sigma", 80.0))  # type: ignore[arg-type]
    families = values.pop("family", (Family.NORMAL,))
    ks = values.pop("k", None)
    config_args: dict[str, object] = {
        "distributions": build_distributions(families, ks, sigma),  # type: ignore[arg-type]
        "sigma": sigma,
        **values,
    }
    config = ExperimentConfig(**config_args)  # type: ignore[arg-type]
    validate_config(config)
    return config


def validate_config(config: ExperimentConfig) -> None:
    """Validate the structure of an experiment configuration.

    Parameter-domain checks of distributions (sigma, k) happen per sweep cell.

    Raises:
        ConfigError: If any structural rule is violated.
    """
    if not config.mu_grid:
        raise ConfigError("mu_grid must contain at least one value")
    if not config.distributions:
        raise ConfigError("at least one distribution is required")
    _require_distinct(config.distributions)
    if not config.strategies:
        raise ConfigError("at least one strategy is required")
    if config.replicates < 1:
        raise ConfigError(f"replicates must be at least 1, got {config.replicates}")
    if config.n < 1:
        raise ConfigError(f"n must be at least 1, got {config.n}")
    if config.steps < 1:
        raise ConfigError(f"steps must be at least 1, got {config.steps}")
    if not 0 <= config.base_seed < 2**63:
        raise ConfigError(f"base_seed must lie in [0, 2**63), got {config.base_seed}")
    if len(set(config.strategies)) != len(config.strategies):
        raise ConfigError("strategies must not repeat")
    if len(set(config.mu_grid)) != len(config.mu_grid):
        raise ConfigError("mu_grid must not repeat values")


def load_config(path: Path | str) -> ExperimentConfig:
    """Read an experiment configuration file.

    Raises:
        ConfigError: If the file cannot be read or is invalid.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    return parse_config_text(text)


def workers_from_env(default: int = 1) -> int:
    """Worker count from ``VISE_WORKERS``, or ``default`` when unset."""
    value = os.getenv(WORKERS_ENV)
    if value is None or not value.strip():
        return default
    workers = _parse_int(value, WORKERS_ENV)
    if workers < 1:
        raise ConfigError(f"{WORKERS_ENV} must be a positive integer, got {value!r}")
    return workers


def debug_from_env() -> bool:
    return os.getenv(DEBUG_ENV, "").strip().lower() in {"1", "true", "yes", "on"}


__all__ = [
    "DEBUG_ENV",
    "WORKERS_ENV",
    "ExperimentConfig",
    "build_distributions",
    "debug_from_env",
    "load_config",
    "parse_config_text",
    "parse_distribution_list",
    "parse_grid",
    "parse_strategies",
    "validate_config",
    "workers_from_env",
]
