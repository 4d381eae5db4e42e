"""Capital update and bankruptcy elimination for one game step."""

import numpy as np

from vise_sim.models import Proposal, SocietyState


class CapitalDynamics:
    """Applies accepted proposals and removes bankrupt agents.

    Both operations return new states; the input state is never mutated.
    """

    @staticmethod
    def apply_step(state: SocietyState, proposal: Proposal, accept: bool) -> SocietyState:  # noqa: FBT001
        """Add the increments to the alive agents if the proposal was accepted.

        The step counter advances in either case.

        Raises:
            ValueError: If the proposal is not aligned with the alive agents.
        """
        if len(proposal) != state.alive_count:
            raise ValueError(
                f"proposal has {len(proposal)} increments but {state.alive_count} agents are alive"
            )
        capitals = state.capitals
        if accept:
            capitals = capitals.copy()
            capitals[state.alive] += proposal.increments
        return SocietyState(capitals=capitals, alive=state.alive, step=state.step + 1)

    @staticmethod
    def eliminate_bankrupts(state: SocietyState) -> tuple[SocietyState, int]:
        """Mark every alive agent with strictly negative capital as dead.

        Capital slots of eliminated agents are kept. Zero capital is not
        bankruptcy.

        Returns:
            The updated state and the number of agents eliminated now.
        """
        bankrupt = state.alive & (state.capitals < 0.0)
        eliminated = int(np.count_nonzero(bankrupt))
        if eliminated == 0:
            return state, 0
        alive = state.alive & ~bankrupt
        return SocietyState(capitals=state.capitals, alive=alive, step=state.step), eliminated


__all__ = ["CapitalDynamics"]
