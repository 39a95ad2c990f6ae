"""Pure-Python simulation kernel, the reference for the compiled one.

Both kernels must produce bit-identical trajectories. Random draws come
from counter-based streams, so the two implementations are free to draw in
different batch shapes (this one uses vectorized blocks, the compiled one
draws per step and skips unused noise-packet draws); only the floating
arithmetic on carried state must match operation for operation.

Parity rules, enforced by tests and binding on any edit here or in the
compiled twin:
  - identical update expressions and evaluation order for all carried state
  - products written out (d * d), never pow
  - no fused multiply-add (the compiled kernel builds with contraction off)
"""

from __future__ import annotations

import math

import numpy as np

from .. import rng

_CHUNK = 1 << 16


def simulate_trajectory(
    a: float,
    q: float,
    r: float,
    sigma0: float,
    kgain: float,
    p_bar: float,
    p_n: float,
    mu: float,
    gamma_user: float,
    gamma_eaves: float,
    key_init: int,
    key_process: int,
    key_meas: int,
    key_chan_user: int,
    key_chan_eaves: int,
    key_noise: int,
    key_indicator: int,
    horizon: int,
    x: np.ndarray,
    y: np.ndarray,
    u: np.ndarray,
    z: np.ndarray,
    lam: np.ndarray,
    lam_e: np.ndarray,
    xhat_s: np.ndarray,
    xhat: np.ndarray,
    xhat_e: np.ndarray,
    p: np.ndarray,
    p_e: np.ndarray,
    sqerr: np.ndarray,
    sqerr_e: np.ndarray,
) -> None:
    """Fill the preallocated per-step arrays with one closed-loop trajectory."""
    sqrt_q = math.sqrt(q)
    sqrt_r = math.sqrt(r)
    a2 = a * a

    xk = math.sqrt(sigma0) * rng.normal_at(key_init, 0)
    xs = 0.0
    xh = 0.0
    ph = sigma0
    xe = 0.0
    pe = sigma0

    for k0 in range(0, horizon, _CHUNK):
        m = min(_CHUNK, horizon - k0)
        n_meas = rng.normal_block(key_meas, k0, m)
        n_noise = rng.normal_block(key_noise, k0, m)
        n_proc = rng.normal_block(key_process, k0, m)
        d_ind = rng.uniform_block(key_indicator, k0, m)
        d_cu = rng.uniform_block(key_chan_user, k0, m)
        d_ce = rng.uniform_block(key_chan_eaves, k0, m)
        for i in range(m):
            k = k0 + i
            yk = xk + sqrt_r * n_meas[i]
            if k == 0:
                xs = kgain * yk
            else:
                pred = a * xs
                xs = pred + kgain * (yk - pred)
            uk = 0 if d_ind[i] < mu else 1
            zk = xs if uk == 1 else sqrt_q * n_noise[i]
            lk = 0 if d_cu[i] < gamma_user else 1
            lek = 0 if d_ce[i] < gamma_eaves else 1
            if lk == 1 and uk == 1:
                xh = zk
                ph = p_bar
            else:
                xh = a * xh
                ph = a2 * ph + q
            if lek == 1:
                xe = zk
                pe = p_bar if uk == 1 else p_n
            else:
                xe = a * xe
                pe = a2 * pe + q
            d = xk - xh
            de = xk - xe
            x[k] = xk
            y[k] = yk
            u[k] = uk
            z[k] = zk
            lam[k] = lk
            lam_e[k] = lek
            xhat_s[k] = xs
            xhat[k] = xh
            xhat_e[k] = xe
            p[k] = ph
            p_e[k] = pe
            sqerr[k] = d * d
            sqerr_e[k] = de * de
            xk = a * xk + sqrt_q * n_proc[i]


def simulate_summary(
    a: float,
    q: float,
    r: float,
    sigma0: float,
    kgain: float,
    p_bar: float,
    p_n: float,
    mu: float,
    gamma_user: float,
    gamma_eaves: float,
    key_init: int,
    key_process: int,
    key_meas: int,
    key_chan_user: int,
    key_chan_eaves: int,
    key_noise: int,
    key_indicator: int,
    horizon: int,
    burn_in: int,
) -> tuple[float, float, float, float]:
    """Sums of (p, p_e, sqerr, sqerr_e) over steps burn_in..horizon-1."""
    sqrt_q = math.sqrt(q)
    sqrt_r = math.sqrt(r)
    a2 = a * a

    xk = math.sqrt(sigma0) * rng.normal_at(key_init, 0)
    xs = 0.0
    xh = 0.0
    ph = sigma0
    xe = 0.0
    pe = sigma0

    sum_p = 0.0
    sum_pe = 0.0
    sum_sq = 0.0
    sum_sqe = 0.0

    for k0 in range(0, horizon, _CHUNK):
        m = min(_CHUNK, horizon - k0)
        n_meas = rng.normal_block(key_meas, k0, m)
        n_noise = rng.normal_block(key_noise, k0, m)
        n_proc = rng.normal_block(key_process, k0, m)
        d_ind = rng.uniform_block(key_indicator, k0, m)
        d_cu = rng.uniform_block(key_chan_user, k0, m)
        d_ce = rng.uniform_block(key_chan_eaves, k0, m)
        for i in range(m):
            k = k0 + i
            yk = xk + sqrt_r * n_meas[i]
            if k == 0:
                xs = kgain * yk
            else:
                pred = a * xs
                xs = pred + kgain * (yk - pred)
            uk = 0 if d_ind[i] < mu else 1
            zk = xs if uk == 1 else sqrt_q * n_noise[i]
            lk = 0 if d_cu[i] < gamma_user else 1
            lek = 0 if d_ce[i] < gamma_eaves else 1
            if lk == 1 and uk == 1:
                xh = zk
                ph = p_bar
            else:
                xh = a * xh
                ph = a2 * ph + q
            if lek == 1:
                xe = zk
                pe = p_bar if uk == 1 else p_n
            else:
                xe = a * xe
                pe = a2 * pe + q
            if k >= burn_in:
                d = xk - xh
                de = xk - xe
                sum_p += ph
                sum_pe += pe
                sum_sq += d * d
                sum_sqe += de * de
            xk = a * xk + sqrt_q * n_proc[i]

    return sum_p, sum_pe, sum_sq, sum_sqe
