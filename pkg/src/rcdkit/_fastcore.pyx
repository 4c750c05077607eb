# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: exact int64 identity scans and midpoint quadrature.

Mirrors rcdkit._purecore function for function. Callers guarantee that the
integer inputs fit int64 (the dispatcher routes oversized denominators to the
pure path), so no overflow checks appear in the loops.
"""

from libc.stdint cimport int64_t, uint8_t

import numpy as np


def identity_first_failure(
    long long q,
    const long long[::1] weights,
    const long long[:, ::1] rows,
    const long long[::1] block_of_point,
    const long long[::1] block_offsets,
    const long long[::1] block_points,
):
    """First failing (block, singleton) pair of the conditioning identity.

    Same scan order and encoding as the pure fallback: returns
    block_index * n + a, or -1 when the identity holds everywhere.
    """
    cdef Py_ssize_t n = weights.shape[0]
    cdef Py_ssize_t nblocks = block_offsets.shape[0] - 1
    cdef Py_ssize_t b, a, i, x
    cdef int64_t wx, lhs
    rhs_arr = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] rhs = rhs_arr

    for b in range(nblocks):
        for a in range(n):
            rhs[a] = 0
        for i in range(block_offsets[b], block_offsets[b + 1]):
            x = block_points[i]
            wx = weights[x]
            if wx == 0:
                continue
            for a in range(n):
                rhs[a] += rows[x, a] * wx
        for a in range(n):
            lhs = weights[a] if block_of_point[a] == b else 0
            if lhs * q != rhs[a]:
                return b * n + a
    return -1


def product_rhs_numerator(
    const long long[::1] weights,
    const long long[:, ::1] rows,
    const uint8_t[::1] mask,
):
    """Numerator over q² of the double sum Σ_x w_x Σ_y 1[(x,y)∈E]·rows[x][y]."""
    cdef Py_ssize_t n = weights.shape[0]
    cdef Py_ssize_t x, y
    cdef int64_t total = 0, inner, wx
    for x in range(n):
        wx = weights[x]
        if wx == 0:
            continue
        inner = 0
        for y in range(n):
            if mask[x * n + y]:
                inner += rows[x, y]
        total += wx * inner
    return total


cdef inline bint _member(double t, const double[::1] lo, const double[::1] hi) noexcept:
    cdef Py_ssize_t j
    for j in range(lo.shape[0]):
        if lo[j] <= t <= hi[j]:
            return True
    return False


def quad_integral(
    const double[::1] seg_bounds,
    const long long[::1] seg_panels,
    const double[::1] dens_breaks,
    const double[::1] dens0,
    const double[::1] dens1,
    const double[::1] g_lo,
    const double[::1] g_hi,
    const double[::1] a0_lo,
    const double[::1] a0_hi,
    const double[::1] a1_lo,
    const double[::1] a1_hi,
    double m0,
    double m1,
    int mode,
):
    """Midpoint-rule integral of the fiber-pair integrand; see the pure twin.

    Membership is decided by pointwise scans at panel midpoints, keeping this
    numeric oracle independent of the exact interval-intersection arithmetic.
    """
    cdef Py_ssize_t nseg = seg_panels.shape[0]
    cdef Py_ssize_t ncell = dens0.shape[0]
    cdef Py_ssize_t k, j, cell, lo_i, hi_i, mid_i
    cdef long long cnt
    cdef double lo, width, t, d0, d1, val, acc = 0.0
    cdef bint in_g, in_a0, in_a1

    for k in range(nseg):
        cnt = seg_panels[k]
        lo = seg_bounds[k]
        width = (seg_bounds[k + 1] - lo) / cnt
        for j in range(cnt):
            t = lo + (j + 0.5) * width
            # density cell via binary search on the break grid
            lo_i = 0
            hi_i = ncell
            while lo_i < hi_i:
                mid_i = (lo_i + hi_i) // 2
                if dens_breaks[mid_i + 1] <= t:
                    lo_i = mid_i + 1
                else:
                    hi_i = mid_i
            cell = lo_i if lo_i < ncell else ncell - 1
            d0 = dens0[cell]
            d1 = dens1[cell]
            in_g = _member(t, g_lo, g_hi)
            if mode == 0:
                val = 0.0
                if in_g:
                    if _member(t, a0_lo, a0_hi):
                        val += d0
                    if _member(t, a1_lo, a1_hi):
                        val += d1
            else:
                val = 0.0
                if in_g:
                    if _member(t, a0_lo, a0_hi):
                        val += m0
                    if _member(t, a1_lo, a1_hi):
                        val += m1
                    val *= d0 + d1
            acc += val * width
    return acc
