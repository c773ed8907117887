"""Pure-numpy Godunov face-flux kernel.

Vectorized over faces: the interval extremum of a piecewise-linear flux is
the extremum of its values at the interval endpoints and at the breakpoints
strictly inside, answered in O(1) per face with sparse min/max tables.
The compiled kernel in _godunov_cy performs the same arithmetic; results
agree to the last bit.
"""

from __future__ import annotations

import numpy as np


class FluxTable:
    """Breakpoint arrays plus sparse range-extremum tables for one flux."""

    def __init__(self, breakpoints: np.ndarray, values: np.ndarray):
        bp = np.ascontiguousarray(breakpoints, dtype=np.float64)
        val = np.ascontiguousarray(values, dtype=np.float64)
        self.bp = bp
        self.val = val
        self.slopes = np.diff(val) / np.diff(bp)
        k = val.size
        levels = max(1, int(k).bit_length())
        st_min = np.full((levels, k), np.inf)
        st_max = np.full((levels, k), -np.inf)
        st_min[0, :] = val
        st_max[0, :] = val
        half = 1
        for lev in range(1, levels):
            n = k - 2 * half + 1
            if n > 0:
                st_min[lev, :n] = np.minimum(st_min[lev - 1, :n], st_min[lev - 1, half:half + n])
                st_max[lev, :n] = np.maximum(st_max[lev - 1, :n], st_max[lev - 1, half:half + n])
            half *= 2
        self.st_min = st_min
        self.st_max = st_max


def make_flux_table(breakpoints, values) -> FluxTable:
    return FluxTable(np.asarray(breakpoints), np.asarray(values))


def _interp(tab: FluxTable, x: np.ndarray) -> np.ndarray:
    k = np.clip(np.searchsorted(tab.bp, x, side="right") - 1, 0, tab.bp.size - 2)
    return tab.val[k] + tab.slopes[k] * (x - tab.bp[k])


def _range_ext(st: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    n = hi - lo + 1
    lev = np.frexp(n.astype(np.float64))[1] - 1
    off = hi - (1 << lev) + 1
    return st[lev, lo], st[lev, off]


def _godunov_region(tab: FluxTable, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    a = np.minimum(u, v)
    b = np.maximum(u, v)
    qa = _interp(tab, a)
    qb = _interp(tab, b)
    mn = np.minimum(qa, qb)
    mx = np.maximum(qa, qb)
    i0 = np.searchsorted(tab.bp, a, side="right")
    i1 = np.searchsorted(tab.bp, b, side="left") - 1
    inner = i1 >= i0
    if np.any(inner):
        lo = i0[inner]
        hi = i1[inner]
        m1, m2 = _range_ext(tab.st_min, lo, hi)
        mn_in = np.minimum(m1, m2)
        x1, x2 = _range_ext(tab.st_max, lo, hi)
        mx_in = np.maximum(x1, x2)
        mn[inner] = np.minimum(mn[inner], mn_in)
        mx[inner] = np.maximum(mx[inner], mx_in)
    return np.where(u <= v, mn, mx)


def face_fluxes_pwl(U: np.ndarray, split: int, gtab: FluxTable, ftab: FluxTable,
                    out: np.ndarray | None = None) -> np.ndarray:
    """Godunov flux at each face i between cells i and i+1; faces i < split use g."""
    m = U.size - 1
    if out is None:
        out = np.empty(m)
    u = U[:-1]
    v = U[1:]
    split = max(0, min(split, m))
    if split > 0:
        out[:split] = _godunov_region(gtab, u[:split], v[:split])
    if split < m:
        out[split:] = _godunov_region(ftab, u[split:], v[split:])
    return out
