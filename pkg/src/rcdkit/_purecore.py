"""Fallback implementations of the hot kernels.

Drop-in replacement for the compiled rcdkit._fastcore: exact integer loops
use Python big ints (no overflow ceiling), and the midpoint quadrature is
numpy-vectorized so the fallback stays usable on full-size batteries. The
dispatcher in rcdkit._backend picks between the two at import time.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "pure"


def identity_first_failure(q, weights, rows, block_of_point, blocks):
    """Scan the conditioning identity over singletons × partition blocks.

    weights[x] and rows[x][a] are integer numerators over the common
    denominator q. For block G and singleton {a} the identity demands
    mass(A ∩ G) == Σ_{x∈G} rows[x][a]·weights[x] / q. Returns the first
    failing pair encoded as block_index * n + a, or -1 when all pairs hold.
    Blocks are scanned in canonical order, singletons in point order.
    """
    n = len(weights)
    for b, block in enumerate(blocks):
        rhs = [0] * n
        for x in block:
            wx = weights[x]
            if wx == 0:
                continue
            row = rows[x]
            for a in range(n):
                rhs[a] += row[a] * wx
        for a in range(n):
            lhs = weights[a] if block_of_point[a] == b else 0
            if lhs * q != rhs[a]:
                return b * n + a
    return -1


def product_rhs_numerator(weights, rows, mask):
    """Numerator over q² of Σ_x weights[x] · Σ_y 1[(x,y) ∈ E] · rows[x][y].

    mask is a flat n·n list of 0/1 in row-major order.
    """
    n = len(weights)
    total = 0
    for x in range(n):
        wx = weights[x]
        if wx == 0:
            continue
        row = rows[x]
        base = x * n
        inner = 0
        for y in range(n):
            if mask[base + y]:
                inner += row[y]
        total += wx * inner
    return total


def quad_integral(
    seg_bounds,
    seg_panels,
    dens_breaks,
    dens0,
    dens1,
    g_lo,
    g_hi,
    a0_lo,
    a0_hi,
    a1_lo,
    a1_hi,
    m0,
    m1,
    mode,
):
    """Midpoint-rule integral over [0,1] of a fiber-pair integrand.

    The integrand is evaluated pointwise at panel midpoints (indicator scans
    and density lookups only; no interval intersection arithmetic), so this
    path is an independent numeric oracle for the exact interval code.

    mode 0: d0(t)·1[t∈A0]·1[t∈G] + d1(t)·1[t∈A1]·1[t∈G]   (event mass)
    mode 1: 1[t∈G]·(d0(t)+d1(t))·(m0·1[t∈A0] + m1·1[t∈A1]) (kernel integral)
    """
    seg_bounds = np.asarray(seg_bounds, dtype=np.float64)
    seg_panels = np.asarray(seg_panels, dtype=np.int64)
    mids = []
    widths = []
    for k in range(len(seg_panels)):
        lo = seg_bounds[k]
        hi = seg_bounds[k + 1]
        cnt = int(seg_panels[k])
        w = (hi - lo) / cnt
        mids.append(lo + (np.arange(cnt, dtype=np.float64) + 0.5) * w)
        widths.append(np.full(cnt, w))
    t = np.concatenate(mids) if mids else np.zeros(0)
    w = np.concatenate(widths) if widths else np.zeros(0)

    dens_breaks = np.asarray(dens_breaks, dtype=np.float64)
    cell = np.clip(np.searchsorted(dens_breaks, t, side="right") - 1, 0, len(dens0) - 1)
    d0 = np.asarray(dens0, dtype=np.float64)[cell]
    d1 = np.asarray(dens1, dtype=np.float64)[cell]

    def member(t_arr, los, his):
        out = np.zeros(len(t_arr), dtype=bool)
        for lo, hi in zip(los, his):
            out |= (t_arr >= lo) & (t_arr <= hi)
        return out

    in_g = member(t, g_lo, g_hi)
    in_a0 = member(t, a0_lo, a0_hi)
    in_a1 = member(t, a1_lo, a1_hi)

    if mode == 0:
        vals = d0 * (in_a0 & in_g) + d1 * (in_a1 & in_g)
    elif mode == 1:
        vals = in_g * (d0 + d1) * (m0 * in_a0 + m1 * in_a1)
    else:
        raise ValueError(f"unknown quadrature mode {mode}")
    return float(np.dot(vals, w))
