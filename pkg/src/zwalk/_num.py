"""Small helpers that let the numeric core run on floats or on mpmath numbers.

High-precision runs use numpy object arrays of ``mpmath.mpf`` and take their
precision from the surrounding ``mpmath.workdps`` context.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np


def mpf(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)


def scalar(v, mp: bool):
    return mpf(v) if mp else float(v)


def is_mp(x) -> bool:
    return isinstance(x, np.ndarray) and x.dtype == object


def points(x, mp: bool) -> np.ndarray:
    if mp:
        return np.array([mpf(v) for v in np.atleast_1d(np.asarray(x, dtype=object)).ravel()], dtype=object)
    return np.atleast_1d(np.asarray(x, dtype=float))


def cos(x: np.ndarray) -> np.ndarray:
    if is_mp(x):
        return np.array([mpmath.cos(v) for v in x], dtype=object)
    return np.cos(x)


def sqrt(v, mp: bool):
    return mpmath.sqrt(v) if mp else math.sqrt(v)


def pi(mp: bool):
    return +mpmath.pi if mp else math.pi


def stack22(e11, e12, e22) -> np.ndarray:
    """Symmetric (K, 2, 2) array from entry arrays."""
    dtype = object if any(is_mp(np.asarray(e)) for e in (e11, e12, e22)) else float
    K = max(np.size(e) for e in (e11, e12, e22))
    out = np.empty((K, 2, 2), dtype=dtype)
    out[:, 0, 0] = e11
    out[:, 0, 1] = out[:, 1, 0] = e12
    out[:, 1, 1] = e22
    return out


def to_float(a) -> np.ndarray:
    return np.asarray(a, dtype=float) if not is_mp(np.asarray(a)) else np.vectorize(float)(a).astype(float)
