"""Packet-dropout channels to the legitimate user and the eavesdropper.

Both receivers listen to the same broadcast through independent i.i.d.
Bernoulli erasure channels. The parameters are dropout probabilities:
gamma_user is P[lambda_user = 0], the chance the legitimate user misses a
packet, and gamma_eaves is P[lambda_eaves = 0] for the eavesdropper.
Dropout events carry no information about packet contents and are
independent of the indicator sequence.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError

__all__ = ["ChannelParams", "ReceptionOutcome", "step_channels"]


@dataclass(frozen=True)
class ChannelParams:
    """Dropout probabilities of the two receivers."""

    gamma_user: float
    gamma_eaves: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.gamma_user <= 1.0:
            raise ParameterError(
                f"dropout probability must lie in [0, 1], got gamma_user={self.gamma_user!r}"
            )
        if not 0.0 <= self.gamma_eaves <= 1.0:
            raise ParameterError(
                f"dropout probability must lie in [0, 1], got gamma_eaves={self.gamma_eaves!r}"
            )


@dataclass(frozen=True)
class ReceptionOutcome:
    """Who received the packet at one step: 1 received, 0 dropped."""

    lambda_user: int
    lambda_eaves: int


def step_channels(params: ChannelParams, draw_user: float, draw_eaves: float) -> ReceptionOutcome:
    """Turn two uniform draws into reception bits.

    A packet is dropped exactly when its draw falls below the dropout
    probability, so each channel is i.i.d. Bernoulli and the two are
    independent as long as the draws come from separate streams.
    """
    lam = 0 if draw_user < params.gamma_user else 1
    lam_e = 0 if draw_eaves < params.gamma_eaves else 1
    return ReceptionOutcome(lambda_user=lam, lambda_eaves=lam_e)
