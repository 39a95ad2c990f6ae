"""Receiver-side estimators and their error-variance recursions.

Both receivers run the same minimum-variance strategy: adopt the payload of
an accepted packet as the estimate, otherwise propagate the previous
estimate through the plant dynamics. The difference is knowledge of the
indicator. The legitimate user knows u[k] and discards received noise
packets (treats them like erasures). The eavesdropper cannot tell estimate
packets from noise packets and adopts whatever it receives, so with
probability mu an accepted packet synchronizes it to pure noise.

The variance tracked here is the true (sensor-viewpoint) conditional error
variance. On the eavesdropper's side it needs the true indicator to select
the right branch; the indicator never influences the eavesdropper's
estimate itself, only our bookkeeping about how wrong that estimate is.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import SystemParams, open_loop_variance

__all__ = [
    "EstimatorState",
    "NoiseUseVariance",
    "noise_use_variance",
    "init_estimator",
    "legit_update",
    "eaves_update",
    "eaves_believed_variance",
]


@dataclass(frozen=True)
class EstimatorState:
    """Estimate and its true conditional error variance at step k."""

    k: int
    x_hat: float
    p: float


@dataclass(frozen=True)
class NoiseUseVariance:
    """Error variance incurred by adopting a noise packet as the estimate.

    A noise packet is independent of the plant, so the squared error is
    E[x^2] + E[n^2] = p_op + q exactly (stationary start).
    """

    p_n: float


def noise_use_variance(params: SystemParams) -> float:
    """P_n = open-loop variance plus one process-noise quantum."""
    return open_loop_variance(params) + params.q


def init_estimator(params: SystemParams) -> EstimatorState:
    """Prior state before any packet: zero-mean estimate with variance sigma0."""
    return EstimatorState(k=-1, x_hat=0.0, p=params.sigma0)


def legit_update(
    prev: EstimatorState,
    lam: int,
    u: int,
    z: float,
    params: SystemParams,
    p_bar: float,
) -> EstimatorState:
    """Legitimate user's step: adopt real estimates, predict through the rest.

    A received noise packet (lam=1, u=0) is discarded, which the user can do
    because it reconstructs u[k] from the shared seed. Discarding and erasure
    are the same code path: both leave only the model prediction.
    """
    if lam == 1 and u == 1:
        return EstimatorState(k=prev.k + 1, x_hat=z, p=p_bar)
    a = params.a
    return EstimatorState(k=prev.k + 1, x_hat=a * prev.x_hat, p=a * a * prev.p + params.q)


def eaves_update(
    prev: EstimatorState,
    lam_e: int,
    u: int,
    z: float,
    params: SystemParams,
    p_bar: float,
    p_n: float,
) -> EstimatorState:
    """Eavesdropper's step: adopt anything received, predict through erasures.

    The estimate branch depends only on (lam_e, z). The true indicator u is
    consumed solely by the variance bookkeeping: an adopted estimate packet
    leaves error p_bar, an adopted noise packet leaves error p_n.
    """
    if lam_e == 1:
        return EstimatorState(k=prev.k + 1, x_hat=z, p=p_bar if u == 1 else p_n)
    a = params.a
    return EstimatorState(k=prev.k + 1, x_hat=a * prev.x_hat, p=a * a * prev.p + params.q)


def eaves_believed_variance(prev_believed: float, lam_e: int, params: SystemParams, p_bar: float) -> float:
    """Variance the eavesdropper itself believes it has (diagnostic).

    Unaware of the encoding, it credits every accepted packet with the
    sensor filter's variance p_bar. Nothing downstream consumes this; it
    exists to quantify how miscalibrated the eavesdropper's confidence is.
    """
    if lam_e == 1:
        return p_bar
    a = params.a
    return a * a * prev_believed + params.q
