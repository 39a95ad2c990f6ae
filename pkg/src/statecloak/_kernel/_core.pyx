# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled simulation kernel, the performance twin of _pure.py.

Bit-for-bit parity with the pure kernel is a hard requirement; the parity
rules live in _pure.py's docstring. Draws are regenerated per step from the
counter-based streams (random access makes batch shape irrelevant), and the
noise-packet draw is skipped entirely on steps that transmit the estimate.
Normals call the same inverse-CDF routine scipy exposes to Python, so both
kernels share one C implementation of the only transcendental involved.
"""

from libc.math cimport sqrt
from scipy.special.cython_special cimport ndtri

ctypedef unsigned long long u64

cdef double INV_2_53 = 1.0 / 9007199254740992.0
cdef double INV_2_52 = 1.0 / 4503599627370496.0


cdef inline u64 _mix64(u64 z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline u64 _value_at(u64 key, u64 index) noexcept nogil:
    return _mix64(key ^ (index * 0x9E3779B97F4A7C15ULL))


cdef inline double _uniform_at(u64 key, u64 index) noexcept nogil:
    return <double>(_value_at(key, index) >> 11) * INV_2_53


cdef inline double _normal_at(u64 key, u64 index) noexcept nogil:
    return ndtri((<double>(_value_at(key, index) >> 12) + 0.5) * INV_2_52)


def py_value_at(key, index):
    """Scalar parity probe for the raw 64-bit stream word."""
    return _value_at(<u64>key, <u64>index)


def py_uniform_at(key, index):
    """Scalar parity probe for the uniform draw."""
    return _uniform_at(<u64>key, <u64>index)


def py_normal_at(key, index):
    """Scalar parity probe for the normal draw."""
    return _normal_at(<u64>key, <u64>index)


def simulate_trajectory(
    double a,
    double q,
    double r,
    double sigma0,
    double kgain,
    double p_bar,
    double p_n,
    double mu,
    double gamma_user,
    double gamma_eaves,
    key_init,
    key_process,
    key_meas,
    key_chan_user,
    key_chan_eaves,
    key_noise,
    key_indicator,
    Py_ssize_t horizon,
    double[::1] x,
    double[::1] y,
    signed char[::1] u,
    double[::1] z,
    signed char[::1] lam,
    signed char[::1] lam_e,
    double[::1] xhat_s,
    double[::1] xhat,
    double[::1] xhat_e,
    double[::1] p,
    double[::1] p_e,
    double[::1] sqerr,
    double[::1] sqerr_e,
):
    """Fill the preallocated per-step arrays with one closed-loop trajectory."""
    cdef u64 k_init = <u64>key_init
    cdef u64 k_proc = <u64>key_process
    cdef u64 k_meas = <u64>key_meas
    cdef u64 k_cu = <u64>key_chan_user
    cdef u64 k_ce = <u64>key_chan_eaves
    cdef u64 k_noise = <u64>key_noise
    cdef u64 k_ind = <u64>key_indicator

    cdef double sqrt_q = sqrt(q)
    cdef double sqrt_r = sqrt(r)
    cdef double a2 = a * a

    cdef double xk, yk, zk, pred, d, de
    cdef double xs = 0.0
    cdef double xh = 0.0
    cdef double ph = sigma0
    cdef double xe = 0.0
    cdef double pe = sigma0
    cdef int uk, lk, lek
    cdef Py_ssize_t k
    cdef u64 kk

    with nogil:
        xk = sqrt(sigma0) * _normal_at(k_init, 0)
        for k in range(horizon):
            kk = <u64>k
            yk = xk + sqrt_r * _normal_at(k_meas, kk)
            if k == 0:
                xs = kgain * yk
            else:
                pred = a * xs
                xs = pred + kgain * (yk - pred)
            uk = 0 if _uniform_at(k_ind, kk) < mu else 1
            zk = xs if uk == 1 else sqrt_q * _normal_at(k_noise, kk)
            lk = 0 if _uniform_at(k_cu, kk) < gamma_user else 1
            lek = 0 if _uniform_at(k_ce, kk) < gamma_eaves else 1
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
            u[k] = <signed char>uk
            z[k] = zk
            lam[k] = <signed char>lk
            lam_e[k] = <signed char>lek
            xhat_s[k] = xs
            xhat[k] = xh
            xhat_e[k] = xe
            p[k] = ph
            p_e[k] = pe
            sqerr[k] = d * d
            sqerr_e[k] = de * de
            xk = a * xk + sqrt_q * _normal_at(k_proc, kk)


def simulate_summary(
    double a,
    double q,
    double r,
    double sigma0,
    double kgain,
    double p_bar,
    double p_n,
    double mu,
    double gamma_user,
    double gamma_eaves,
    key_init,
    key_process,
    key_meas,
    key_chan_user,
    key_chan_eaves,
    key_noise,
    key_indicator,
    Py_ssize_t horizon,
    Py_ssize_t burn_in,
):
    """Sums of (p, p_e, sqerr, sqerr_e) over steps burn_in..horizon-1."""
    cdef u64 k_init = <u64>key_init
    cdef u64 k_proc = <u64>key_process
    cdef u64 k_meas = <u64>key_meas
    cdef u64 k_cu = <u64>key_chan_user
    cdef u64 k_ce = <u64>key_chan_eaves
    cdef u64 k_noise = <u64>key_noise
    cdef u64 k_ind = <u64>key_indicator

    cdef double sqrt_q = sqrt(q)
    cdef double sqrt_r = sqrt(r)
    cdef double a2 = a * a

    cdef double xk, yk, zk, pred, d, de
    cdef double xs = 0.0
    cdef double xh = 0.0
    cdef double ph = sigma0
    cdef double xe = 0.0
    cdef double pe = sigma0
    cdef int uk, lk, lek
    cdef Py_ssize_t k
    cdef u64 kk

    cdef double sum_p = 0.0
    cdef double sum_pe = 0.0
    cdef double sum_sq = 0.0
    cdef double sum_sqe = 0.0

    with nogil:
        xk = sqrt(sigma0) * _normal_at(k_init, 0)
        for k in range(horizon):
            kk = <u64>k
            yk = xk + sqrt_r * _normal_at(k_meas, kk)
            if k == 0:
                xs = kgain * yk
            else:
                pred = a * xs
                xs = pred + kgain * (yk - pred)
            uk = 0 if _uniform_at(k_ind, kk) < mu else 1
            zk = xs if uk == 1 else sqrt_q * _normal_at(k_noise, kk)
            lk = 0 if _uniform_at(k_cu, kk) < gamma_user else 1
            lek = 0 if _uniform_at(k_ce, kk) < gamma_eaves else 1
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
            xk = a * xk + sqrt_q * _normal_at(k_proc, kk)

    return sum_p, sum_pe, sum_sq, sum_sqe
