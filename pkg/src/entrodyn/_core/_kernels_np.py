"""Pure-numpy implementation of the counter-based RNG / stepping kernels.

Drop-in fallback for the compiled core (`_kernels_cy`).  The Philox-2x64-10
integer stream is bit-identical to the compiled version; the Gaussian
variates agree to the last ulp of libm's log/cos/sin (identical on platforms
where numpy delegates those to libm).
"""

import numpy as np

BACKEND = "numpy"

_MULTIPLIER = np.uint64(0xD2B74407B1CE6E93)
_WEYL = np.uint64(0x9E3779B97F4A7C15)
_MASK32 = np.uint64(0xFFFFFFFF)

_INV53 = 2.0**-53
_TWO_PI = 2.0 * np.pi


def _mulhilo(a):
    """128-bit product of the Philox multiplier with a uint64 array."""
    m = _MULTIPLIER
    lo = m * a
    a_hi = a >> np.uint64(32)
    a_lo = a & _MASK32
    m_hi = m >> np.uint64(32)
    m_lo = m & _MASK32
    t = (m_lo * a_lo) >> np.uint64(32)
    mid = (m_hi * a_lo & _MASK32) + (m_lo * a_hi & _MASK32) + t
    hi = m_hi * a_hi + ((m_hi * a_lo) >> np.uint64(32)) + ((m_lo * a_hi) >> np.uint64(32)) + (mid >> np.uint64(32))
    return hi, lo


def philox2x64(c0, c1, key):
    """Philox-2x64-10 block cipher: counters (c0, c1), key -> two uint64 words.

    c0 is a uint64 array; c1 and key are scalars applied to every lane.
    """
    x0 = np.asarray(c0, dtype=np.uint64).copy()
    x1 = np.broadcast_to(np.uint64(c1), x0.shape).copy()
    k = np.uint64(key)
    for r in range(10):
        if r:
            k += _WEYL
        hi, lo = _mulhilo(x0)
        x0 = hi ^ k ^ x1
        x1 = lo
    return x0, x1


def standard_normals(key, stream, n, offset=0):
    """n standard-normal draws for global indices offset..offset+n-1.

    Draw 2j and 2j+1 come from the Philox block (counter=j, stream, key)
    through a Box-Muller transform, so any slice of the stream can be
    regenerated independently of how the work is chunked.
    """
    if n == 0:
        return np.empty(0)
    first_pair = offset // 2
    last_pair = (offset + n - 1) // 2
    pairs = np.arange(first_pair, last_pair + 1, dtype=np.uint64)
    x0, x1 = philox2x64(pairs, stream, key)
    u1 = ((x0 >> np.uint64(11)) + np.uint64(1)).astype(np.float64) * _INV53
    u2 = (x1 >> np.uint64(11)).astype(np.float64) * _INV53
    r = np.sqrt(-2.0 * np.log(u1))
    theta = _TWO_PI * u2
    z = np.empty(2 * pairs.size)
    z[0::2] = r * np.cos(theta)
    z[1::2] = r * np.sin(theta)
    start = offset - 2 * first_pair
    return z[start:start + n]


def euler_maruyama_step(x, drift, dt, sigma, key, stream, x_min, x_max, boundary, offset=0):
    """One Euler-Maruyama step x + drift*dt + sigma*z with boundary handling.

    boundary: 0 periodic, 1 reflecting.  The noise for particle i is draw
    (offset + i) of the (key, stream) counter stream.
    """
    x = np.asarray(x, dtype=np.float64)
    z = standard_normals(key, stream, x.size, offset)
    out = x + drift * dt + sigma * z
    length = x_max - x_min
    if boundary == 0:
        r = np.mod(out - x_min, length)
        # the sign fixup inside mod can round r up to exactly `length`
        r[r == length] = 0.0
        out = x_min + r
    else:
        r = np.mod(out - x_min, 2.0 * length)
        out = x_min + np.where(r <= length, r, 2.0 * length - r)
    return out
