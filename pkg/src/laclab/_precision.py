"""Evaluation backends: IEEE double or mpmath at a fixed working precision.

Closed forms are written once against the small namespace exposed here, so
the same expression can be evaluated as float64 arrays or as object arrays
of ``mpf`` values. Extended precision matters when the exact answer is an
integer identity (third difference of a cubic) but the double-precision
inputs are themselves rounded.
"""

from __future__ import annotations

import math
from functools import lru_cache

import mpmath
import numpy as np


class Float64:
    name = "float64"
    dps = None

    sqrt = staticmethod(np.sqrt)
    log = staticmethod(np.log)
    sin = staticmethod(np.sin)
    cos = staticmethod(np.cos)

    def index(self, idx):
        return np.asarray(idx, dtype=float)

    def asarray(self, values):
        return np.asarray(values, dtype=float)

    def const(self, x):
        return float(x)

    def full(self, n, value):
        return np.full(n, float(value))

    def cumsum(self, values):
        return np.cumsum(values)

    def fsum(self, values):
        return math.fsum(values)

    def to_float(self, values):
        return np.asarray(values, dtype=float)


class MultiPrecision:
    """mpmath backend bound to a private context with ``dps`` digits."""

    def __init__(self, dps: int):
        self.dps = int(dps)
        self.name = f"mpmath(dps={self.dps})"
        self.ctx = mpmath.MPContext()
        self.ctx.dps = self.dps
        self.sqrt = np.frompyfunc(self.ctx.sqrt, 1, 1)
        self.log = np.frompyfunc(self.ctx.log, 1, 1)
        self.sin = np.frompyfunc(self.ctx.sin, 1, 1)
        self.cos = np.frompyfunc(self.ctx.cos, 1, 1)
        self._mpf = np.frompyfunc(self.ctx.mpf, 1, 1)

    def index(self, idx):
        return self._mpf(np.asarray(idx, dtype=np.int64).astype(object))

    def asarray(self, values):
        arr = np.asarray(values)
        if arr.dtype == object:
            return self._mpf(arr)
        # float64 -> mpf is exact
        return self._mpf(arr.astype(float).astype(object))

    def const(self, x):
        return self.ctx.mpf(x)

    def full(self, n, value):
        out = np.empty(n, dtype=object)
        out[:] = [self.ctx.mpf(value)] * n
        return out

    def cumsum(self, values):
        return np.cumsum(values, dtype=object)

    def fsum(self, values):
        return self.ctx.fsum(values)

    def to_float(self, values):
        return np.array([float(v) for v in values], dtype=float)


_FLOAT64 = Float64()


@lru_cache(maxsize=None)
def _multi(dps):
    return MultiPrecision(dps)


def backend(dps=None):
    """Return the float64 backend for ``dps=None`` and an mpmath one otherwise."""
    if dps is None:
        return _FLOAT64
    if int(dps) < 1:
        raise ValueError("dps must be a positive integer")
    return _multi(int(dps))
