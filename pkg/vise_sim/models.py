"""Data models for the vise-sim simulator.

This module contains the dataclasses shared by the services: distribution
parameters, the society state of a running game, voting strategies, game
modes and the aggregates produced by games and sweeps.
"""

from dataclasses import dataclass, replace
from enum import StrEnum

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.float64]
BoolArray = npt.NDArray[np.bool_]
IntArray = npt.NDArray[np.intp]


class Family(StrEnum):
    """Distribution families used as proposal generators."""

    NORMAL = "normal"
    SYMMETRIZED_PARETO = "sp"
    STUDENT_T3 = "t3"
    LAPLACE = "laplace"


class StrategyKind(StrEnum):
    EGOIST = "egoist"
    ALTRUIST = "altruist"


class GameMode(StrEnum):
    """Whether agents with negative capital are eliminated."""

    EXTINCTION = "extinct"
    NO_EXTINCTION = "noextinct"


@dataclass(frozen=True)
class DistributionSpec:
    """Parameters of the environment's proposal generator.

    Every family is parameterized so that generated increments have mean
    ``mu`` and standard deviation ``sigma``.

    Attributes:
        family: The distribution family.
        mu: Mean (and mode) of the capital increments.
        sigma: Standard deviation of the capital increments.
        k: Tail index, used by the symmetrized Pareto family only.
    """

    family: Family
    mu: float = 0.0
    sigma: float = 1.0
    k: float | None = None

    def with_mu(self, mu: float) -> "DistributionSpec":
        return replace(self, mu=mu)

    @property
    def label(self) -> str:
        """Short name that identifies the family and its tail index."""
        if self.family is Family.SYMMETRIZED_PARETO:
            return f"sp(k={self.k:g})"
        return str(self.family)


@dataclass(frozen=True)
class StrategyConfig:
    """Voting strategy shared by every agent of a homogeneous society.

    Attributes:
        kind: Egoist or altruist.
        window_fraction: Share of the current society (poorest first) whose
            summed increments an altruist looks at. Ignored for egoists.
    """

    kind: StrategyKind
    window_fraction: float = 1.0

    @classmethod
    def egoist(cls) -> "StrategyConfig":
        return cls(StrategyKind.EGOIST)

    @classmethod
    def altruist(cls, window_pct: float) -> "StrategyConfig":
        return cls(StrategyKind.ALTRUIST, window_pct / 100.0)

    @property
    def window_pct(self) -> float | None:
        if self.kind is StrategyKind.EGOIST:
            return None
        return self.window_fraction * 100.0

    @property
    def label(self) -> str:
        if self.kind is StrategyKind.EGOIST:
            return "egoist"
        return f"altruist:{self.window_fraction * 100.0:g}"


@dataclass(frozen=True)
class ModeConfig:
    """Game mode, initial capital C0 and planned game length M."""

    mode: GameMode = GameMode.NO_EXTINCTION
    initial_capital: float = 40.0
    max_steps: int = 500

    @property
    def extinction(self) -> bool:
        return self.mode is GameMode.EXTINCTION


@dataclass(frozen=True)
class SocietyState:
    """Capitals and alive flags of all agents at step ``step``.

    Eliminated agents keep their slot (``alive`` is False) so that agent ids
    stay stable for the whole game.
    """

    capitals: FloatArray
    alive: BoolArray
    step: int = 0

    @classmethod
    def initial(cls, n: int, initial_capital: float) -> "SocietyState":
        return cls(
            capitals=np.full(n, float(initial_capital), dtype=np.float64),
            alive=np.ones(n, dtype=np.bool_),
        )

    @property
    def size(self) -> int:
        return int(self.capitals.shape[0])

    @property
    def alive_count(self) -> int:
        return int(np.count_nonzero(self.alive))

    @property
    def alive_ids(self) -> IntArray:
        return np.flatnonzero(self.alive)


@dataclass(frozen=True)
class Proposal:
    """Capital increments for the alive agents, in original-id order."""

    increments: FloatArray

    def __len__(self) -> int:
        return int(self.increments.shape[0])

    @property
    def total(self) -> float:
        return float(self.increments.sum())


@dataclass(frozen=True)
class GameResult:
    """Aggregates of one complete game.

    Attributes:
        aci_numerator: Sum over played steps of the increments actually
            received by the agents alive at that step.
        aci_denominator: Sum over played steps of the alive-agent count.
        survivors: Agents alive (capital >= 0 in extinction mode) at the end.
        accepted_steps: Number of accepted proposals.
        played_steps: Number of steps on which a proposal was voted.
    """

    aci_numerator: float
    aci_denominator: int
    survivors: int
    accepted_steps: int
    played_steps: int


@dataclass(frozen=True)
class StepRecord:
    """Per-step trace line of a single game."""

    step: int
    alive_count: int
    accepted: bool
    total_increment: float
    min_capital: float
    max_capital: float


@dataclass(frozen=True)
class ReplicateSummary:
    """Statistics over the replicate games of one sweep cell.

    Standard errors are None when fewer than two replicates were played.
    """

    replicates: int
    aci_mean: float
    aci_stderr: float | None
    survival_mean: float
    survival_stderr: float | None
    accept_share_mean: float


@dataclass(frozen=True)
class SweepRow:
    """One aggregated sweep cell: configuration echo plus statistics."""

    family: Family
    k: float | None
    mu: float
    sigma: float
    n: int
    c0: float
    steps: int
    mode: GameMode
    strategy: str
    window_pct: float | None
    replicates: int
    base_seed: int
    aci_mean: float
    aci_stderr: float | None
    survival_mean: float
    survival_stderr: float | None
    accept_share_mean: float

    @property
    def distribution_label(self) -> str:
        if self.family is Family.SYMMETRIZED_PARETO:
            return f"sp(k={self.k:g})"
        return str(self.family)
