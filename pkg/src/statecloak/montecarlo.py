"""Monte Carlo trial runner and empirical verifier.

A trial is one closed-loop trajectory: plant, sensor filter, encoded
packets, both erasure channels, both estimators. Long-run quantities are
estimated by time-averaging within each trial past a burn-in prefix, then
averaging across trials; confidence intervals are computed across the
trial means, which are i.i.d. by construction, so within-trial
autocorrelation never biases the interval.

Determinism is absolute: every trial derives its own substream keys from
(master_seed, trial_index), aggregation walks trials in index order, and
the kernel backends are bit-identical, so results do not depend on the
number of workers or on which kernel is installed.

The indicator stream is special: by default it is re-mixed per trial (so
trials are i.i.d. in every input), but it can be pinned to the policy's
shared stream across trials to reproduce exactly what the sensor and user
would emit for that seed.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from . import _kernel, rng
from .analysis import design_mu_op, expected_eaves_variance, expected_legit_variance
from .channel import ChannelParams
from .errors import InfeasibleDesignError, ParameterError
from .estimators import noise_use_variance
from .model import SystemParams, open_loop_variance, riccati_fixed_point, sensor_gain
from .secrecy import EncodingPolicy, indicator_key

__all__ = [
    "SimConfig",
    "TrajectoryRecord",
    "EstimateWithCI",
    "LongRunEstimates",
    "SweepRow",
    "run_trial",
    "estimate_long_run",
    "sweep_mu",
]


@dataclass(frozen=True)
class SimConfig:
    """Everything one experiment needs: plant, channels, policy, budgets, seed."""

    system: SystemParams
    channels: ChannelParams
    policy: EncodingPolicy
    horizon: int
    burn_in: int
    trials: int
    master_seed: int
    common_indicator: bool = False

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ParameterError(f"horizon must be positive, got {self.horizon!r}")
        if not 0 <= self.burn_in < self.horizon:
            raise ParameterError(
                f"burn_in must lie in [0, horizon), got burn_in={self.burn_in!r} "
                f"with horizon={self.horizon!r}"
            )
        if self.trials < 1:
            raise ParameterError(f"trials must be at least 1, got {self.trials!r}")
        if not 0 <= self.master_seed < 1 << 64:
            raise ParameterError(f"master_seed must fit in 64 bits, got {self.master_seed!r}")


@dataclass(frozen=True)
class TrajectoryRecord:
    """One trial's full per-step history as parallel numpy columns."""

    k: np.ndarray
    x: np.ndarray
    y: np.ndarray
    u: np.ndarray
    z: np.ndarray
    lambda_user: np.ndarray
    lambda_eaves: np.ndarray
    x_hat_s: np.ndarray
    x_hat: np.ndarray
    x_hat_e: np.ndarray
    p: np.ndarray
    p_e: np.ndarray
    sq_err_user: np.ndarray
    sq_err_eaves: np.ndarray


@dataclass(frozen=True)
class EstimateWithCI:
    """Sample mean across trials with a 95% confidence half-width."""

    mean: float
    ci_half_width: float
    n_samples: int


class LongRunEstimates(NamedTuple):
    """Empirical long-run means: variance recursions and raw squared errors."""

    legit: EstimateWithCI
    eaves: EstimateWithCI
    legit_sq_err: EstimateWithCI
    eaves_sq_err: EstimateWithCI


@dataclass(frozen=True)
class SweepRow:
    """One noise-probability grid point: closed forms plus optional MC columns."""

    mu: float
    expected_legit: float
    expected_eaves: float
    p_bar: float
    p_op: float
    p_n: float
    mu_op: float
    mc_legit: float | None = None
    mc_legit_ci: float | None = None
    mc_eaves: float | None = None
    mc_eaves_ci: float | None = None


def _trial_keys(config: SimConfig, trial_index: int) -> tuple[int, int, int, int, int, int, int]:
    """Substream keys for one trial, in kernel argument order.

    All plant/channel streams hang off (master_seed, trial_index); the
    indicator hangs off the policy's shared seed, re-mixed per trial unless
    the config pins one common indicator stream across trials.
    """
    trial_seed = rng.value_at(rng.stream_key(config.master_seed, rng.TAG_TRIAL), trial_index)
    if config.common_indicator:
        key_ind = indicator_key(config.policy)
    else:
        ind_seed = rng.value_at(rng.stream_key(config.policy.seed, rng.TAG_TRIAL), trial_index)
        key_ind = rng.stream_key(ind_seed, rng.TAG_INDICATOR)
    return (
        rng.stream_key(trial_seed, rng.TAG_INIT_STATE),
        rng.stream_key(trial_seed, rng.TAG_PROCESS),
        rng.stream_key(trial_seed, rng.TAG_MEASUREMENT),
        rng.stream_key(trial_seed, rng.TAG_CHANNEL_USER),
        rng.stream_key(trial_seed, rng.TAG_CHANNEL_EAVES),
        rng.stream_key(trial_seed, rng.TAG_NOISE_PACKET),
        key_ind,
    )


def _kernel_params(config: SimConfig) -> tuple[float, ...]:
    """Scalar kernel arguments shared by every trial of a config."""
    sys = config.system
    return (
        sys.a,
        sys.q,
        sys.r,
        sys.sigma0,
        sensor_gain(sys),
        riccati_fixed_point(sys),
        noise_use_variance(sys),
        config.policy.mu,
        config.channels.gamma_user,
        config.channels.gamma_eaves,
    )


def run_trial(config: SimConfig, trial_index: int = 0) -> TrajectoryRecord:
    """Simulate one full trajectory, deterministic in (config, trial_index)."""
    h = config.horizon
    cols = {
        name: np.empty(h, dtype=np.int8 if name in ("u", "lam", "lam_e") else np.float64)
        for name in (
            "x", "y", "u", "z", "lam", "lam_e", "xhat_s",
            "xhat", "xhat_e", "p", "p_e", "sqerr", "sqerr_e",
        )
    }
    _kernel.simulate_trajectory(
        *_kernel_params(config), *_trial_keys(config, trial_index), h, *cols.values()
    )
    return TrajectoryRecord(
        k=np.arange(h, dtype=np.int64),
        x=cols["x"],
        y=cols["y"],
        u=cols["u"],
        z=cols["z"],
        lambda_user=cols["lam"],
        lambda_eaves=cols["lam_e"],
        x_hat_s=cols["xhat_s"],
        x_hat=cols["xhat"],
        x_hat_e=cols["xhat_e"],
        p=cols["p"],
        p_e=cols["p_e"],
        sq_err_user=cols["sqerr"],
        sq_err_eaves=cols["sqerr_e"],
    )


def _with_ci(trial_means: np.ndarray) -> EstimateWithCI:
    n = trial_means.size
    mean = float(np.mean(trial_means))
    # a single trial has no spread to estimate; report a zero-width interval
    half = 0.0 if n < 2 else 1.96 * float(np.std(trial_means, ddof=1)) / math.sqrt(n)
    return EstimateWithCI(mean=mean, ci_half_width=half, n_samples=n)


def estimate_long_run(config: SimConfig, workers: int = 1) -> LongRunEstimates:
    """Empirical long-run means of p, p_e, and both squared errors.

    Trials execute independently (threads share nothing and the compiled
    kernel releases the GIL); results are collected in trial-index order
    and reduced with a fixed summation order, so the outcome is
    bit-identical for any worker count.
    """
    params = _kernel_params(config)
    steps = config.horizon - config.burn_in

    def one(trial_index: int) -> tuple[float, float, float, float]:
        sums = _kernel.simulate_summary(
            *params, *_trial_keys(config, trial_index), config.horizon, config.burn_in
        )
        return (sums[0] / steps, sums[1] / steps, sums[2] / steps, sums[3] / steps)

    if workers <= 1:
        per_trial = [one(t) for t in range(config.trials)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_trial = list(pool.map(one, range(config.trials)))

    table = np.array(per_trial, dtype=np.float64)
    return LongRunEstimates(
        legit=_with_ci(table[:, 0]),
        eaves=_with_ci(table[:, 1]),
        legit_sq_err=_with_ci(table[:, 2]),
        eaves_sq_err=_with_ci(table[:, 3]),
    )


def sweep_mu(
    config: SimConfig,
    grid: list[float],
    with_mc: bool = False,
    workers: int = 1,
) -> list[SweepRow]:
    """Closed-form (and optionally Monte Carlo) long-run variances over a mu grid.

    Rows come back sorted by mu. The constants columns (p_bar, p_op, p_n,
    mu_op) repeat the same config-wide values on every row so each row is
    self-contained; mu_op is NaN when no valid design exists.
    """
    for g in grid:
        if not 0.0 <= g < 1.0:
            raise ParameterError(f"grid values must lie in [0, 1), got {g!r}")
    sys = config.system
    p_bar = riccati_fixed_point(sys)
    p_op = open_loop_variance(sys)
    p_n = noise_use_variance(sys)
    try:
        mu_op = design_mu_op(sys, config.channels.gamma_eaves).mu_op
    except InfeasibleDesignError:
        mu_op = math.nan

    rows = []
    for mu in sorted(grid):
        row = SweepRow(
            mu=mu,
            expected_legit=expected_legit_variance(sys, config.channels.gamma_user, mu),
            expected_eaves=expected_eaves_variance(sys, config.channels.gamma_eaves, mu),
            p_bar=p_bar,
            p_op=p_op,
            p_n=p_n,
            mu_op=mu_op,
        )
        if with_mc:
            mc_config = replace(config, policy=replace(config.policy, mu=mu))
            est = estimate_long_run(mc_config, workers=workers)
            row = replace(
                row,
                mc_legit=est.legit.mean,
                mc_legit_ci=est.legit.ci_half_width,
                mc_eaves=est.eaves.mean,
                mc_eaves_ci=est.eaves.ci_half_width,
            )
        rows.append(row)
    return rows
