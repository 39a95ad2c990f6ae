"""Counter-based deterministic random streams.

Every draw in the simulator is a pure function of a 64-bit stream key and a
counter: the value at index k is obtained by hashing ``key ^ (k * GOLDEN)``
with a full-avalanche finalizer. Randomly addressable draws are what make
the encoding scheme workable without acknowledgments: the sensor and the
legitimate user regenerate the same indicator bit for any time index k
without tracking how many draws came before, so packet loss can never
desynchronize them.

Stream keys are derived from a seed plus a small integer tag, one tag per
purpose (process noise, measurement noise, each channel, noise packets,
indicator). Keeping the purposes on separate keyed streams makes the
mutual-independence assumptions of the model directly testable.

Normal variates apply the inverse normal CDF (scipy's ``ndtri``) to a single
uniform draw. The compiled simulation kernel calls the same C routine, so
both kernel backends produce bit-identical trajectories.

This generator targets statistical quality, not cryptographic strength; a
passive observer who knows the construction but not the seed is the intended
adversary model.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15  # 2^64 / golden ratio, the usual Weyl increment

_INV_2_53 = 1.0 / 9007199254740992.0  # 2^-53
_INV_2_52 = 1.0 / 4503599627370496.0  # 2^-52

# Stream tags. One per independent draw purpose; montecarlo derives
# per-trial keys through TAG_TRIAL.
TAG_INIT_STATE = 1
TAG_PROCESS = 2
TAG_MEASUREMENT = 3
TAG_CHANNEL_USER = 4
TAG_CHANNEL_EAVES = 5
TAG_NOISE_PACKET = 6
TAG_INDICATOR = 7
TAG_TRIAL = 8


def mix64(z: int) -> int:
    """Stafford variant-13 finalizer: a 64-bit permutation with full avalanche."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def value_at(key: int, index: int) -> int:
    """Raw 64-bit word at stream position `index`."""
    return mix64(key ^ ((index * GOLDEN) & MASK64))


def stream_key(seed: int, tag: int) -> int:
    """Key of the tagged substream of `seed`.

    The seed goes through mix64 first so that raw user seeds (often small
    integers) land in the same well-spread key space as derived keys.
    """
    return value_at(mix64(seed), tag)


def uniform_at(key: int, index: int) -> float:
    """Uniform draw on [0, 1) at stream position `index`."""
    return (value_at(key, index) >> 11) * _INV_2_53


def normal_at(key: int, index: int) -> float:
    """Standard normal draw at stream position `index`.

    Uses a 52-bit mantissa centered on half-steps: (m + 0.5) * 2^-52 is
    exact in double precision and lies in [2^-53, 1 - 2^-53], so ndtri is
    always finite (worst case about 8.2 sigma). A 53-bit mantissa would
    round (2^53 - 1) + 0.5 up to 2^53 and hand ndtri an exact 1.0.
    """
    u = ((value_at(key, index) >> 12) + 0.5) * _INV_2_52
    return float(ndtri(u))


# -- vectorized block access ------------------------------------------------
#
# The block helpers evaluate many stream positions at once with numpy uint64
# arithmetic. uniform_block is bit-identical to uniform_at; normal_block is
# bit-identical to normal_at (same ndtri routine under the ufunc).


def _value_block(key: int, start: int, count: int) -> np.ndarray:
    idx = np.arange(start, start + count, dtype=np.uint64)
    z = np.uint64(key) ^ (idx * np.uint64(GOLDEN))
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def uniform_block(key: int, start: int, count: int) -> np.ndarray:
    """Uniforms on [0, 1) at stream positions start..start+count-1."""
    return (_value_block(key, start, count) >> np.uint64(11)).astype(np.float64) * _INV_2_53


def normal_block(key: int, start: int, count: int) -> np.ndarray:
    """Standard normals at stream positions start..start+count-1."""
    u = ((_value_block(key, start, count) >> np.uint64(12)).astype(np.float64) + 0.5) * _INV_2_52
    return ndtri(u)
