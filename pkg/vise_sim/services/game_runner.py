"""Game runner for the vise-sim simulator.

A game starts with ``n`` agents holding ``C0`` each and plays up to ``M``
steps. On each step bankrupts of the previous step are eliminated (extinction
mode only), the environment draws one increment per alive agent, the society
votes, and an accepted proposal is added to the capitals.
"""

from collections.abc import Callable
import logging

import numpy as np

from vise_sim.errors import DomainError
from vise_sim.models import (
    DistributionSpec,
    GameResult,
    ModeConfig,
    Proposal,
    SocietyState,
    StepRecord,
    StrategyConfig,
)

from .capital_dynamics import CapitalDynamics
from .distributions import ProposalSampler, make_sampler
from .voting_rules import VotingRules

logger = logging.getLogger(__name__)

StepRecorder = Callable[[StepRecord], object]


def validate_game(mode: ModeConfig, n: int, seed: int) -> None:
    if n < 1:
        raise DomainError(f"a society needs at least one agent, got n={n}")
    if mode.max_steps < 1:
        raise DomainError(f"game length M must be at least 1, got {mode.max_steps}")
    if mode.extinction and mode.initial_capital < 0.0:
        raise DomainError(
            f"initial capital must be non-negative in extinction mode, got {mode.initial_capital}"
        )
    if seed < 0:
        raise DomainError(f"seed must be a non-negative integer, got {seed}")


def _record(recorder: StepRecorder, state: SocietyState, proposal: Proposal, *, accepted: bool) -> None:
    alive_capitals = state.capitals[state.alive]
    recorder(
        StepRecord(
            step=state.step,
            alive_count=len(proposal),
            accepted=accepted,
            total_increment=proposal.total,
            min_capital=float(alive_capitals.min()),
            max_capital=float(alive_capitals.max()),
        )
    )


def run_game(
    dist: DistributionSpec,
    strategy: StrategyConfig,
    mode: ModeConfig,
    n: int,
    seed: int,
    *,
    sampler: ProposalSampler | None = None,
    recorder: StepRecorder | None = None,
) -> GameResult:
    """Play one complete game and return its aggregates.

    Args:
        dist: Proposal distribution.
        strategy: Strategy shared by all agents.
        mode: Extinction mode, initial capital and planned length.
        n: Number of agents.
        seed: Seed of the game's random generator.
        sampler: Replaces the sampler built from ``dist``; used for scripted
            or stub environments.
        recorder: Called with a StepRecord after every played step.

    Returns:
        The game's GameResult. Identical arguments give identical results.

    Raises:
        DomainError: If any parameter is outside its domain.
    """
    validate_game(mode, n, seed)
    VotingRules.validate_strategy(strategy)
    draw = sampler if sampler is not None else make_sampler(dist)
    rng = np.random.default_rng(seed)

    state = SocietyState.initial(n, mode.initial_capital)
    numerator = 0.0
    denominator = 0
    accepted_steps = 0
    played_steps = 0

    for _ in range(mode.max_steps):
        if mode.extinction:
            state, _eliminated = CapitalDynamics.eliminate_bankrupts(state)
        alive_count = state.alive_count
        if alive_count == 0:
            logger.debug(f"All agents bankrupt after {played_steps} steps")
            break

        proposal = Proposal(np.asarray(draw(rng, alive_count), dtype=np.float64))
        yes = VotingRules.cast_votes(state, proposal, strategy)
        accept = VotingRules.tally(yes, alive_count)
        state = CapitalDynamics.apply_step(state, proposal, accept)

        played_steps += 1
        denominator += alive_count
        if accept:
            accepted_steps += 1
            numerator += proposal.total
        if recorder is not None:
            _record(recorder, state, proposal, accepted=accept)

    if mode.extinction:
        state, _eliminated = CapitalDynamics.eliminate_bankrupts(state)

    return GameResult(
        aci_numerator=numerator,
        aci_denominator=denominator,
        survivors=state.alive_count,
        accepted_steps=accepted_steps,
        played_steps=played_steps,
    )


__all__ = ["StepRecorder", "run_game", "validate_game"]
