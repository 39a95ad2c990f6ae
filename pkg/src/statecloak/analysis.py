"""Closed-form long-run error variances, the noise-probability design rule,
and an independent Markov-chain oracle.

The long-run expected error variance of each receiver has a closed form in
the public parameters. Both receivers' variance processes are functions of
a Markov chain on "steps since last adopted packet"; summing conditional
variances against the stationary distribution gives the same limits, and
the truncated versions of those sums are implemented here as a numerical
cross-check that shares no algebra with the closed forms.

The design rule inverts the eavesdropper's closed form: mu_op is the noise
probability at which the eavesdropper's long-run variance exactly reaches
the open-loop level p_op. Every mu strictly between mu_op and 1 then keeps
the legitimate user strictly below open loop while pushing the eavesdropper
strictly above it.

Boundary cases (dropout probability 1, or mu = 1 on the user side) are
handled by explicit branches returning p_op: the rational closed forms are
derived under strict inequality, even though they happen to be continuous
at these edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InfeasibleDesignError, ParameterError, TruncationError
from .estimators import noise_use_variance
from .model import SystemParams, open_loop_variance, riccati_fixed_point

__all__ = [
    "DesignResult",
    "ChainTruncation",
    "expected_legit_variance",
    "expected_eaves_variance",
    "design_mu_op",
    "secrecy_range",
    "stationary_legit",
    "stationary_eaves",
    "chain_oracle_legit",
    "chain_oracle_eaves",
]


@dataclass(frozen=True)
class DesignResult:
    """Designed noise probability and the open range of secrecy-achieving mu."""

    mu_op: float
    mu_lo: float
    mu_hi: float = 1.0
    feasible: bool = True


@dataclass
class ChainTruncation:
    """Truncation policy for the chain oracles, plus their tail report.

    States 0..max_states are retained. After a call, tail_mass holds the
    stationary probability of all dropped states and tail_bound an upper
    bound on the value contribution they could have carried. A tail_mass
    above tail_tol raises rather than returning a silently truncated sum.
    """

    max_states: int = 200
    tail_tol: float = 1e-9
    tail_mass: float = field(default=0.0, compare=False)
    tail_bound: float = field(default=0.0, compare=False)

    def __post_init__(self) -> None:
        if self.max_states < 1:
            raise ParameterError(f"max_states must be at least 1, got {self.max_states!r}")
        if not self.tail_tol > 0.0:
            raise ParameterError(f"tail_tol must be positive, got {self.tail_tol!r}")


def _check_prob(name: str, value: float, strict_top: bool = False) -> None:
    if not 0.0 <= value <= 1.0:
        raise ParameterError(f"{name} must lie in [0, 1], got {value!r}")
    if strict_top and value == 1.0:
        raise ParameterError(f"{name} must be strictly below 1 here, got {value!r}")


def expected_legit_variance(params: SystemParams, gamma_user: float, mu: float) -> float:
    """Long-run expected error variance of the legitimate user.

    For dropout probability gamma_user < 1 and noise probability mu < 1,

        (p_bar (1-gamma)(1-mu) + q rho) / (1 - a^2 rho),
        rho = gamma + (1-gamma) mu,

    where rho is the per-step probability that the user gains nothing (drop
    or discarded noise packet). If gamma_user = 1 or mu = 1 the user never
    adopts a packet and the limit is the open-loop variance exactly.
    """
    _check_prob("gamma_user", gamma_user)
    _check_prob("mu", mu)
    if gamma_user == 1.0 or mu == 1.0:
        return open_loop_variance(params)
    p_bar = riccati_fixed_point(params)
    rho = gamma_user + (1.0 - gamma_user) * mu
    a2 = params.a * params.a
    num = p_bar * (1.0 - gamma_user) * (1.0 - mu) + params.q * rho
    return num / (1.0 - a2 * rho)


def expected_eaves_variance(params: SystemParams, gamma_eaves: float, mu: float) -> float:
    """Long-run expected error variance of the eavesdropper.

    For dropout probability gamma_eaves < 1,

        (p_bar (1-gamma)(1-mu) + q gamma + p_n (1-gamma) mu) / (1 - a^2 gamma).

    Unlike the user, the eavesdropper adopts noise packets, so mu moves
    weight from the p_bar term to the p_n term instead of into dropout. The
    expression is linear in mu. If gamma_eaves = 1 it hears nothing and sits
    at open loop exactly.
    """
    _check_prob("gamma_eaves", gamma_eaves)
    _check_prob("mu", mu)
    if gamma_eaves == 1.0:
        return open_loop_variance(params)
    p_bar = riccati_fixed_point(params)
    p_n = noise_use_variance(params)
    a2 = params.a * params.a
    num = (
        p_bar * (1.0 - gamma_eaves) * (1.0 - mu)
        + params.q * gamma_eaves
        + p_n * (1.0 - gamma_eaves) * mu
    )
    return num / (1.0 - a2 * gamma_eaves)


def design_mu_op(params: SystemParams, gamma_eaves: float) -> DesignResult:
    """Noise probability that pins the eavesdropper exactly at open loop.

    Solves expected_eaves_variance(params, gamma_eaves, mu) = p_op for mu:

        mu_op = (p_op (a^2 gamma - 1) - gamma p_bar + gamma q + p_bar)
                / ((gamma - 1) (p_n - p_bar)).

    The result is reported as computed; values outside [0, 1) are flagged
    infeasible, never clamped. gamma_eaves = 1 is rejected outright: an
    eavesdropper that hears nothing is already at open loop and no choice
    of mu changes that.
    """
    _check_prob("gamma_eaves", gamma_eaves)
    if gamma_eaves == 1.0:
        raise InfeasibleDesignError(
            "gamma_eaves = 1: eavesdropper already at open loop, nothing to design"
        )
    p_bar = riccati_fixed_point(params)
    p_op = open_loop_variance(params)
    p_n = noise_use_variance(params)
    a2 = params.a * params.a
    num = p_op * (a2 * gamma_eaves - 1.0) - gamma_eaves * p_bar + gamma_eaves * params.q + p_bar
    den = (gamma_eaves - 1.0) * (p_n - p_bar)
    mu_op = num / den if den != 0.0 else math.nan
    feasible = math.isfinite(mu_op) and 0.0 <= mu_op < 1.0
    return DesignResult(mu_op=mu_op, mu_lo=mu_op, mu_hi=1.0, feasible=feasible)


def secrecy_range(params: SystemParams, gamma_user: float, gamma_eaves: float) -> DesignResult:
    """Open interval of mu giving secrecy against this eavesdropper channel.

    For every mu strictly inside (mu_op, 1) the legitimate user stays
    strictly below the open-loop variance while the eavesdropper is pushed
    strictly above it. The interval does not depend on the user's dropout
    probability; gamma_user is validated because the guarantee on the user
    side is only meaningful for gamma_user < 1.
    """
    _check_prob("gamma_user", gamma_user, strict_top=True)
    return design_mu_op(params, gamma_eaves)


def stationary_legit(gamma_user: float, mu: float, j: int) -> float:
    """Stationary probability that the user's last adopted packet is j steps old.

    The age chain resets to 0 on a received estimate packet (probability
    (1-gamma)(1-mu)) and otherwise increments, so the distribution is
    geometric: pi_j = rho^j (1-gamma)(1-mu) with rho = gamma + (1-gamma) mu.
    """
    _check_prob("gamma_user", gamma_user, strict_top=True)
    _check_prob("mu", mu, strict_top=True)
    if j < 0:
        raise ParameterError(f"state index must be nonnegative, got {j!r}")
    rho = gamma_user + (1.0 - gamma_user) * mu
    return rho**j * (1.0 - gamma_user) * (1.0 - mu)


def stationary_eaves(gamma_eaves: float, mu: float, j: int) -> float:
    """Stationary probability of the eavesdropper's two-track age chain.

    State 0 is "just adopted an estimate packet", state 1 "just adopted a
    noise packet", and each dropout (probability gamma) pushes j to j + 2,
    preserving which track the chain is on. Hence pi_0 = (1-gamma)(1-mu),
    pi_1 = (1-gamma) mu, and pi_{j+2} = gamma pi_j.
    """
    _check_prob("gamma_eaves", gamma_eaves, strict_top=True)
    _check_prob("mu", mu)
    if j < 0:
        raise ParameterError(f"state index must be nonnegative, got {j!r}")
    base = (1.0 - gamma_eaves) * (1.0 - mu) if j % 2 == 0 else (1.0 - gamma_eaves) * mu
    return gamma_eaves ** (j // 2) * base


def chain_oracle_legit(
    params: SystemParams,
    gamma_user: float,
    mu: float,
    truncation: ChainTruncation | None = None,
) -> float:
    """Long-run user variance summed over the truncated age chain.

    Accumulates pi_j times the conditional variance after j packet-less
    steps, where the conditional variance follows the dropout recursion
    p -> a^2 p + q from p_bar. Shares no algebra with the closed form in
    expected_legit_variance; equality within the reported tail bound is the
    correctness check. Writes tail_mass and tail_bound into `truncation`.
    """
    if truncation is None:
        truncation = ChainTruncation()
    _check_prob("gamma_user", gamma_user, strict_top=True)
    _check_prob("mu", mu, strict_top=True)
    p_bar = riccati_fixed_point(params)
    a2 = params.a * params.a
    rho = gamma_user + (1.0 - gamma_user) * mu
    reset = (1.0 - gamma_user) * (1.0 - mu)

    total = 0.0
    pi = reset  # pi_0
    cond = p_bar  # E[p | age 0]
    for _ in range(truncation.max_states + 1):
        total += pi * cond
        pi *= rho
        cond = a2 * cond + params.q

    tail_mass = rho ** (truncation.max_states + 1)
    truncation.tail_mass = tail_mass
    truncation.tail_bound = tail_mass * open_loop_variance(params)
    if tail_mass > truncation.tail_tol:
        raise TruncationError(
            f"dropped stationary mass {tail_mass:.3e} exceeds tolerance "
            f"{truncation.tail_tol:.3e}; raise max_states above {truncation.max_states}"
        )
    return total


def chain_oracle_eaves(
    params: SystemParams,
    gamma_eaves: float,
    mu: float,
    truncation: ChainTruncation | None = None,
) -> float:
    """Long-run eavesdropper variance summed over the truncated two-track chain.

    Even states carry the dropout recursion seeded at p_bar (last adopted
    packet was an estimate), odd states the same recursion seeded at p_n
    (it was noise). Writes tail_mass and tail_bound into `truncation`.
    """
    if truncation is None:
        truncation = ChainTruncation()
    _check_prob("gamma_eaves", gamma_eaves, strict_top=True)
    _check_prob("mu", mu)
    p_bar = riccati_fixed_point(params)
    p_n = noise_use_variance(params)
    a2 = params.a * params.a
    recv = 1.0 - gamma_eaves

    total = 0.0
    pi_even = recv * (1.0 - mu)  # pi_0
    pi_odd = recv * mu  # pi_1
    cond_even = p_bar
    cond_odd = p_n
    for j in range(truncation.max_states + 1):
        if j % 2 == 0:
            total += pi_even * cond_even
        else:
            total += pi_odd * cond_odd
            # both tracks age one dropout step per pair of states
            pi_even *= gamma_eaves
            pi_odd *= gamma_eaves
            cond_even = a2 * cond_even + params.q
            cond_odd = a2 * cond_odd + params.q

    # exact geometric tails of the two tracks beyond the retained states
    n_even = truncation.max_states // 2 + 1
    n_odd = (truncation.max_states + 1) // 2
    tail_mass = (
        gamma_eaves**n_even * recv * (1.0 - mu) + gamma_eaves**n_odd * recv * mu
    ) / (1.0 - gamma_eaves)
    truncation.tail_mass = tail_mass
    p_op = open_loop_variance(params)
    truncation.tail_bound = tail_mass * max(p_op, p_n)
    if tail_mass > truncation.tail_tol:
        raise TruncationError(
            f"dropped stationary mass {tail_mass:.3e} exceeds tolerance "
            f"{truncation.tail_tol:.3e}; raise max_states above {truncation.max_states}"
        )
    return total
