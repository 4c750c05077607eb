"""Backend selection: compiled fast kernels when available, pure fallback otherwise.

The compiled module rcdkit._fastcore works on int64, so exact calls are
routed there only when the instance's common denominator keeps every
intermediate below 2^62; anything larger runs on Python big ints in
rcdkit._purecore. Both backends scan in the same order, so results
(including failure witnesses) never depend on the backend.

Set RCDKIT_BACKEND=pure to force the fallback, RCDKIT_BACKEND=compiled to
require the extension (ImportError if it is missing).
"""

from __future__ import annotations

import math
import os

import numpy as np

from . import _purecore

try:
    from . import _fastcore
except ImportError:
    _fastcore = None

_choice = os.environ.get("RCDKIT_BACKEND", "").strip().lower()
if _choice == "pure":
    _fastcore = None
elif _choice == "compiled" and _fastcore is None:
    raise ImportError("RCDKIT_BACKEND=compiled but rcdkit._fastcore is not built")

INT64_SAFE = 1 << 62


def backend_name() -> str:
    return "compiled" if _fastcore is not None else _purecore.BACKEND_NAME


def _fits_int64(q: int, n: int) -> bool:
    # identity terms are bounded by n * q^2; double sums by n^2 * q^2 with
    # the inner sum capped at q, so n * q^2 dominates both
    return n * q * q < INT64_SAFE


def identity_first_failure(q, weights, rows, block_of_point, blocks) -> int:
    """Dispatching twin of the backend identity scan; see _purecore for semantics."""
    n = len(weights)
    if _fastcore is not None and _fits_int64(q, n):
        offsets = [0]
        points: list[int] = []
        for block in blocks:
            points.extend(block)
            offsets.append(len(points))
        return _fastcore.identity_first_failure(
            q,
            np.array(weights, dtype=np.int64),
            np.array(rows, dtype=np.int64),
            np.array(block_of_point, dtype=np.int64),
            np.array(offsets, dtype=np.int64),
            np.array(points, dtype=np.int64),
        )
    return _purecore.identity_first_failure(q, weights, rows, block_of_point, blocks)


def product_rhs_numerator(q, weights, rows, mask) -> int:
    """Dispatching twin of the backend double-sum numerator."""
    n = len(weights)
    if _fastcore is not None and _fits_int64(q, n):
        return int(
            _fastcore.product_rhs_numerator(
                np.array(weights, dtype=np.int64),
                np.array(rows, dtype=np.int64),
                np.asarray(mask, dtype=np.uint8),
            )
        )
    return _purecore.product_rhs_numerator(weights, rows, mask)


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
) -> float:
    """Dispatching twin of the backend midpoint quadrature."""
    args = (
        np.asarray(seg_bounds, dtype=np.float64),
        np.asarray(seg_panels, dtype=np.int64),
        np.asarray(dens_breaks, dtype=np.float64),
        np.asarray(dens0, dtype=np.float64),
        np.asarray(dens1, dtype=np.float64),
        np.asarray(g_lo, dtype=np.float64),
        np.asarray(g_hi, dtype=np.float64),
        np.asarray(a0_lo, dtype=np.float64),
        np.asarray(a0_hi, dtype=np.float64),
        np.asarray(a1_lo, dtype=np.float64),
        np.asarray(a1_hi, dtype=np.float64),
        float(m0),
        float(m1),
        int(mode),
    )
    if _fastcore is not None:
        return _fastcore.quad_integral(*args)
    return _purecore.quad_integral(*args)


def build_panel_grid(breakpoints, total_panels: int):
    """Segment [0,1] at the given breakpoints and spread midpoint panels.

    Returns (seg_bounds, seg_panels) with at least total_panels panels overall
    and at least one panel per segment, so every piecewise-constant stretch of
    the integrand is integrated by interior midpoints.
    """
    pts = {0.0, 1.0}
    for p in breakpoints:
        f = float(p)
        if 0.0 < f < 1.0:
            pts.add(f)
    bounds = sorted(pts)
    panels = []
    for lo, hi in zip(bounds, bounds[1:]):
        panels.append(max(1, math.ceil(total_panels * (hi - lo))))
    return (
        np.array(bounds, dtype=np.float64),
        np.array(panels, dtype=np.int64),
    )
