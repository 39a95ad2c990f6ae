"""Remote state estimation over lossy channels with a listening eavesdropper.

A sensor runs a steady-state Kalman filter and broadcasts its estimates,
randomly substituting dummy noise packets that only the legitimate user can
identify (both sides derive the substitution schedule from a shared seed).
The eavesdropper, unable to tell the packet types apart, occasionally locks
onto pure noise, and with enough substitution its long-run error exceeds
what it could achieve by ignoring the channel altogether.

The package provides the exact per-step recursions, closed-form long-run
error variances for both receivers, the critical noise probability that
pins the eavesdropper at the open-loop level, an independent Markov-chain
oracle for those closed forms, and a Monte Carlo harness (compiled kernel
with pure-Python fallback) that verifies all of it empirically.
"""

from .errors import ConfigError, InfeasibleDesignError, ParameterError, TruncationError
from .model import SystemParams, open_loop_variance, riccati_fixed_point
from .channel import ChannelParams
from .secrecy import EncodingPolicy
from .estimators import noise_use_variance
from .analysis import (
    ChainTruncation,
    DesignResult,
    chain_oracle_eaves,
    chain_oracle_legit,
    design_mu_op,
    expected_eaves_variance,
    expected_legit_variance,
    secrecy_range,
    stationary_eaves,
    stationary_legit,
)

__version__ = "0.1.0"

__all__ = [
    "ChainTruncation",
    "ChannelParams",
    "ConfigError",
    "DesignResult",
    "EncodingPolicy",
    "InfeasibleDesignError",
    "ParameterError",
    "SystemParams",
    "TruncationError",
    "chain_oracle_eaves",
    "chain_oracle_legit",
    "design_mu_op",
    "expected_eaves_variance",
    "expected_legit_variance",
    "noise_use_variance",
    "open_loop_variance",
    "riccati_fixed_point",
    "secrecy_range",
    "stationary_eaves",
    "stationary_legit",
    "__version__",
]
