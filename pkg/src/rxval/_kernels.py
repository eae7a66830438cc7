"""Float prefilter kernels for the least-height interval search.

The kernels only *propose* indices; every proposal is re-checked in exact
arithmetic by the caller, so a generous error margin keeps them sound.  Each
kernel exists as a numba ``@njit`` function and as a pure-numpy version; set
``RXVAL_DISABLE_NUMBA=1`` to force the numpy path.
"""
from __future__ import annotations

import math
import os

import numpy as np

SQRT2_F = math.sqrt(2.0)
# per-unit relative slack; true float error is ~1e-16 per operation
_REL = 1e-13
_ABS = 1e-12
_CHUNK = 1 << 20

USE_NUMBA = os.environ.get("RXVAL_DISABLE_NUMBA", "").strip().lower() not in ("1", "true", "yes")


def _rational_np(lo: float, hi: float, q0: int, q1: int) -> np.ndarray:
    out = []
    for s in range(q0, q1 + 1, _CHUNK):
        q = np.arange(s, min(s + _CHUNK, q1 + 1), dtype=np.float64)
        m = _ABS + _REL * q * (abs(lo) + abs(hi) + 1.0)
        first = np.floor(lo * q - m) + 1.0
        last = np.floor(hi * q + m)
        out.append(q[first <= last])
    if not out:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(out).astype(np.int64)


def _zsqrt2_np(lo: float, hi: float, b0: int, b1: int) -> np.ndarray:
    out = []
    for s in range(b0, b1 + 1, _CHUNK):
        mag = np.arange(s, min(s + _CHUNK, b1 + 1), dtype=np.float64)
        for sgn in (1.0, -1.0):
            b = sgn * mag
            m = _ABS + _REL * (mag * SQRT2_F + abs(lo) + abs(hi) + 1.0)
            first = np.floor(lo - b * SQRT2_F - m) + 1.0
            last = np.floor(hi - b * SQRT2_F + m)
            out.append(mag[first <= last])
    if not out:
        return np.empty(0, dtype=np.int64)
    return np.unique(np.concatenate(out).astype(np.int64))


def _rational_loop(lo, hi, q0, q1):
    n = q1 - q0 + 1
    buf = np.empty(max(n, 0), dtype=np.int64)
    k = 0
    scale = abs(lo) + abs(hi) + 1.0
    for q in range(q0, q1 + 1):
        qf = float(q)
        m = 1e-12 + 1e-13 * qf * scale
        if math.floor(lo * qf - m) + 1.0 <= math.floor(hi * qf + m):
            buf[k] = q
            k += 1
    return buf[:k]


def _zsqrt2_loop(lo, hi, b0, b1):
    n = b1 - b0 + 1
    buf = np.empty(max(n, 0), dtype=np.int64)
    k = 0
    r2 = math.sqrt(2.0)
    base = abs(lo) + abs(hi) + 1.0
    for mag in range(b0, b1 + 1):
        mf = float(mag)
        m = 1e-12 + 1e-13 * (mf * r2 + base)
        hit = False
        for sgn in (1.0, -1.0):
            bf = sgn * mf
            if math.floor(lo - bf * r2 - m) + 1.0 <= math.floor(hi - bf * r2 + m):
                hit = True
        if hit:
            buf[k] = mag
            k += 1
    return buf[:k]


_rational_jit = None
_zsqrt2_jit = None


def _jitted():
    global _rational_jit, _zsqrt2_jit
    if _rational_jit is None:
        from numba import njit

        _rational_jit = njit(cache=True)(_rational_loop)
        _zsqrt2_jit = njit(cache=True)(_zsqrt2_loop)
    return _rational_jit, _zsqrt2_jit


def scan_rational(lo: float, hi: float, q0: int, q1: int) -> np.ndarray:
    """Denominators q in [q0, q1] for which (lo*q, hi*q) may hold an integer."""
    if q1 < q0:
        return np.empty(0, dtype=np.int64)
    if USE_NUMBA:
        return _jitted()[0](lo, hi, q0, q1)
    return _rational_np(lo, hi, q0, q1)


def scan_zsqrt2(lo: float, hi: float, b0: int, b1: int) -> np.ndarray:
    """Magnitudes |b| in [b0, b1] for which (lo - b*sqrt2, hi - b*sqrt2) may hold
    an integer for b = +|b| or b = -|b|."""
    if b1 < b0:
        return np.empty(0, dtype=np.int64)
    if USE_NUMBA:
        return _jitted()[1](lo, hi, b0, b1)
    return _zsqrt2_np(lo, hi, b0, b1)
