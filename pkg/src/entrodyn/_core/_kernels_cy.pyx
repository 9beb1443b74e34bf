# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled counter-based RNG / stepping kernels.

Same contract as `_kernels_np`: Philox-2x64-10 streams addressed by
(key, stream, draw index), Box-Muller normals, fused Euler-Maruyama step.
The integer stream is bit-identical to the fallback; float outputs match
libm to the ulp.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, fmod, log, sin, sqrt
from libc.stdint cimport uint64_t

cnp.import_array()

BACKEND = "cython"

cdef uint64_t MULTIPLIER = 0xD2B74407B1CE6E93u
cdef uint64_t WEYL = 0x9E3779B97F4A7C15u
cdef double INV53 = 2.0 ** -53
cdef double TWO_PI = 6.283185307179586


cdef inline void _philox_block(uint64_t c0, uint64_t c1, uint64_t key,
                               uint64_t* out0, uint64_t* out1) noexcept nogil:
    cdef uint64_t x0 = c0
    cdef uint64_t x1 = c1
    cdef uint64_t k = key
    cdef uint64_t hi, lo
    cdef __uint128_t prod
    cdef int r
    for r in range(10):
        if r:
            k += WEYL
        prod = (<__uint128_t> MULTIPLIER) * (<__uint128_t> x0)
        hi = <uint64_t> (prod >> 64)
        lo = <uint64_t> prod
        x0 = hi ^ k ^ x1
        x1 = lo
    out0[0] = x0
    out1[0] = x1


cdef inline void _normal_pair(uint64_t pair, uint64_t stream, uint64_t key,
                              double* z0, double* z1) noexcept nogil:
    cdef uint64_t x0, x1
    cdef double u1, u2, r, theta
    _philox_block(pair, stream, key, &x0, &x1)
    u1 = <double> ((x0 >> 11) + 1) * INV53
    u2 = <double> (x1 >> 11) * INV53
    r = sqrt(-2.0 * log(u1))
    theta = TWO_PI * u2
    z0[0] = r * cos(theta)
    z1[0] = r * sin(theta)


def philox2x64(c0, c1, key):
    """Philox-2x64-10 on an array of lane counters; c1 and key are scalars."""
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] lanes = np.ascontiguousarray(c0, dtype=np.uint64)
    cdef Py_ssize_t n = lanes.shape[0]
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] out0 = np.empty(n, dtype=np.uint64)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] out1 = np.empty(n, dtype=np.uint64)
    cdef uint64_t cc1 = c1
    cdef uint64_t kk = key
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            _philox_block(lanes[i], cc1, kk, &out0[i], &out1[i])
    return out0, out1


def standard_normals(key, stream, n, offset=0):
    """n standard-normal draws for global indices offset..offset+n-1."""
    cdef Py_ssize_t nn = n
    cdef cnp.ndarray[cnp.float64_t, ndim=1] z = np.empty(nn, dtype=np.float64)
    if nn == 0:
        return z
    cdef uint64_t kk = key
    cdef uint64_t ss = stream
    cdef uint64_t off = offset
    cdef uint64_t first_pair = off // 2
    cdef uint64_t last_pair = (off + <uint64_t> nn - 1) // 2
    cdef uint64_t pair
    cdef double z0, z1
    cdef Py_ssize_t pos = -(<Py_ssize_t> (off - 2 * first_pair))
    with nogil:
        for pair in range(first_pair, last_pair + 1):
            _normal_pair(pair, ss, kk, &z0, &z1)
            if 0 <= pos < nn:
                z[pos] = z0
            if 0 <= pos + 1 < nn:
                z[pos + 1] = z1
            pos += 2
    return z


def euler_maruyama_step(x, drift, dt, sigma, key, stream, x_min, x_max, boundary, offset=0):
    """One Euler-Maruyama step x + drift*dt + sigma*z with boundary handling."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bs = np.ascontiguousarray(drift, dtype=np.float64)
    cdef Py_ssize_t n = xs.shape[0]
    if bs.shape[0] != n:
        raise ValueError("drift and positions must have the same length")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double ddt = dt
    cdef double sg = sigma
    cdef double lo = x_min
    cdef double length = x_max - x_min
    cdef int mode = boundary
    cdef uint64_t kk = key
    cdef uint64_t ss = stream
    cdef uint64_t off = offset
    cdef uint64_t first_pair = off // 2
    cdef uint64_t last_pair = (off + <uint64_t> n - 1) // 2
    cdef uint64_t pair
    cdef Py_ssize_t pos = -(<Py_ssize_t> (off - 2 * first_pair))
    cdef double z0, z1, v, r
    with nogil:
        for pair in range(first_pair, last_pair + 1):
            _normal_pair(pair, ss, kk, &z0, &z1)
            if 0 <= pos < n:
                v = xs[pos] + bs[pos] * ddt + sg * z0
                out[pos] = _apply_boundary(v, lo, length, mode)
            if 0 <= pos + 1 < n:
                v = xs[pos + 1] + bs[pos + 1] * ddt + sg * z1
                out[pos + 1] = _apply_boundary(v, lo, length, mode)
            pos += 2
    return out


cdef inline double _apply_boundary(double v, double lo, double length, int mode) noexcept nogil:
    cdef double r
    if mode == 0:
        r = fmod(v - lo, length)
        if r < 0.0:
            r += length
        if r == length:
            r = 0.0
        return lo + r
    r = fmod(v - lo, 2.0 * length)
    if r < 0.0:
        r += 2.0 * length
    if r <= length:
        return lo + r
    return lo + (2.0 * length - r)
