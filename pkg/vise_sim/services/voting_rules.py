"""Voting rules for homogeneous societies.

This module provides the VotingRules class, which turns a proposal into a
collective decision: egoists vote for their own gain, altruists vote on the
summed increments of the poorest part of the current society, and the
proposal is adopted by a strict simple majority of alive agents.
"""

from fractions import Fraction
import math

import numpy as np

from vise_sim.errors import DomainError
from vise_sim.models import (
    IntArray,
    Proposal,
    SocietyState,
    StrategyConfig,
    StrategyKind,
)


class VotingRules:
    """Strategy voting rules and the simple-majority tally."""

    @staticmethod
    def validate_strategy(strategy: StrategyConfig) -> None:
        """Raise DomainError unless the support window lies in (0, 1]."""
        if strategy.kind is StrategyKind.ALTRUIST and not (
            0.0 < strategy.window_fraction <= 1.0
        ):
            raise DomainError(
                f"altruist support window must lie in (0, 1], got {strategy.window_fraction}"
            )

    @staticmethod
    def support_count(alive_count: int, window_fraction: float) -> int:
        """Number n0 of poorest agents covered by an altruist's support window.

        Rounds ``window_fraction * alive_count`` half up, with at least one
        agent and at most the whole current society.

        Raises:
            ValueError: If alive_count < 1.
            DomainError: If window_fraction is outside (0, 1].
        """
        if alive_count < 1:
            raise ValueError(f"support_count needs at least one alive agent, got {alive_count}")
        if not 0.0 < window_fraction <= 1.0:
            raise DomainError(f"support window must lie in (0, 1], got {window_fraction}")
        # The shortest repr is the decimal the window was written as, so half
        # cases such as 0.29 * 50 = 14.5 are exact and round up.
        share = Fraction(repr(float(window_fraction))) * alive_count
        n0 = math.floor(share + Fraction(1, 2))
        return min(alive_count, max(1, n0))

    @staticmethod
    def _poorest_positions(state: SocietyState, n0: int) -> IntArray:
        # Positions in the alive-agent vector; the stable sort keeps id order on ties.
        alive_count = state.alive_count
        if n0 > alive_count:
            raise ValueError(f"cannot select {n0} poorest agents out of {alive_count} alive")
        order = np.argsort(state.capitals[state.alive], kind="stable")
        return order[:n0]

    @staticmethod
    def poorest_agents(state: SocietyState, n0: int) -> IntArray:
        """Ids of the ``n0`` alive agents with the smallest capital.

        Ties are broken by the smaller original id. Ids are returned poorest
        first.

        Raises:
            ValueError: If n0 exceeds the number of alive agents.
        """
        positions = VotingRules._poorest_positions(state, n0)
        return state.alive_ids[positions]

    @staticmethod
    def cast_votes(
        state: SocietyState, proposal: Proposal, strategy: StrategyConfig
    ) -> int:
        """Number of yes votes the society casts for ``proposal``.

        Egoists vote yes iff their own increment is strictly positive.
        Altruists all vote the same way: yes iff the increments of the
        ``support_count`` poorest agents sum to a strictly positive value.

        Raises:
            ValueError: If the proposal is not aligned with the alive agents.
        """
        alive_count = state.alive_count
        if len(proposal) != alive_count:
            raise ValueError(
                f"proposal has {len(proposal)} increments but {alive_count} agents are alive"
            )
        increments = proposal.increments
        if strategy.kind is StrategyKind.EGOIST:
            return int(np.count_nonzero(increments > 0.0))

        n0 = VotingRules.support_count(alive_count, strategy.window_fraction)
        if n0 == alive_count:
            window_sum = float(increments.sum())
        else:
            window_sum = float(increments[VotingRules._poorest_positions(state, n0)].sum())
        return alive_count if window_sum > 0.0 else 0

    @staticmethod
    def tally(yes: int, alive_count: int) -> bool:
        """Strict simple majority: accept iff ``yes > alive_count / 2``."""
        if not 0 <= yes <= alive_count:
            raise ValueError(f"yes votes {yes} outside [0, {alive_count}]")
        return 2 * yes > alive_count


__all__ = ["VotingRules"]
