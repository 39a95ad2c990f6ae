"""Noise-injection encoding of the sensor's transmissions.

At every step the sensor sends a packet. With probability 1 - mu the packet
carries the current state estimate; with probability mu it carries a dummy
value drawn from N(0, q), statistically shaped like one step of process
noise so an observer cannot sort packets by their marginal distribution.

The decision is driven by a pseudo-random indicator shared between sensor
and legitimate user through a common seed: u[k] = 1 means "real estimate",
u[k] = 0 means "noise". The indicator at time k is a pure function of
(seed, k), so the user never needs to count packets or receive
acknowledgments to stay synchronized. The eavesdropper does not know the
seed and cannot tell the packet types apart.

mu = 1 is rejected at construction: a sensor that only ever sends noise
serves no one, and the analysis formulas treat mu = 1 as a separate
degenerate branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError
from . import rng

__all__ = [
    "EncodingPolicy",
    "Packet",
    "indicator_key",
    "indicator_at",
    "indicator_block",
    "gen_noise",
    "form_packet",
]


@dataclass(frozen=True)
class EncodingPolicy:
    """Noise probability mu and the shared indicator seed."""

    mu: float
    seed: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.mu < 1.0:
            raise ParameterError(f"noise probability must lie in [0, 1), got mu={self.mu!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ParameterError(f"seed must be an integer, got {self.seed!r}")
        if not 0 <= self.seed < 1 << 64:
            raise ParameterError(f"seed must fit in 64 bits, got {self.seed!r}")


@dataclass(frozen=True)
class Packet:
    """One transmission: the payload is the estimate or pure noise, never both."""

    z: float
    k: int


def indicator_key(policy: EncodingPolicy) -> int:
    """Stream key for the indicator sequence of this policy."""
    return rng.stream_key(policy.seed, rng.TAG_INDICATOR)


def indicator_at(policy: EncodingPolicy, k: int) -> int:
    """Indicator u[k]: 1 transmit the estimate, 0 transmit noise.

    u[k] = 0 exactly when the uniform at stream position k falls below mu,
    so the noise rate is mu and each k is decided independently. Pure in
    (policy, k): random access, any order, any repetition.
    """
    return 0 if rng.uniform_at(indicator_key(policy), k) < policy.mu else 1


def indicator_block(policy: EncodingPolicy, start: int, count: int):
    """Indicators for k = start..start+count-1 as an int8 numpy array."""
    u = rng.uniform_block(indicator_key(policy), start, count)
    return (u >= policy.mu).astype("int8")


def gen_noise(q: float, noise_draw: float) -> float:
    """Dummy payload n[k] = sqrt(q) * noise_draw, zero mean with variance q.

    noise_draw is a realized standard normal from the dedicated
    noise-packet stream, so n[k] is independent of the plant and of both
    channels.
    """
    if not q >= 0.0:
        raise ParameterError(f"noise variance must be nonnegative, got q={q!r}")
    return math.sqrt(q) * noise_draw


def form_packet(x_hat_s: float, n: float, u: int, k: int) -> Packet:
    """Select the payload for step k according to the indicator."""
    return Packet(z=x_hat_s if u == 1 else n, k=k)
