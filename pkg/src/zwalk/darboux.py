"""Discrete Darboux transformations: multiply the two stochastic factors in
the opposite order.

UL factors give ``P~ = P_L P_U``; LU factors give ``P^ = P~_U P~_L``.  The
result is again a tridiagonal stochastic matrix, returned as a table walk
whose window is one index narrower on each side than the factor window.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .factorization import LUFactors, ULFactors, _Factors, factor_matrices
from .walk import WalkSpec


@dataclass(frozen=True)
class DarbouxWalk:
    walk: WalkSpec
    source: WalkSpec
    order: str
    param: float
    factors: _Factors

    @property
    def window(self):
        return self.walk.window

    def coeff(self, n: int) -> tuple:
        return self.walk.coeff(n)


def _ul_coeffs(f: ULFactors, n: int):
    return f.s[n] * f.x[n], f.r[n] * f.x[n - 1] + f.s[n] * f.y[n], f.r[n] * f.y[n - 1]


def _lu_coeffs(f: LUFactors, n: int):
    return f.x[n] * f.s[n + 1], f.x[n] * f.r[n + 1] + f.y[n] * f.s[n], f.y[n] * f.r[n]


def _build(f: _Factors, rule, order: str) -> DarbouxWalk:
    lo, hi = f.window
    triples = [rule(f, n) for n in range(lo + 1, hi)]
    a, b, c = zip(*triples)
    walk = WalkSpec.table((lo + 1, hi - 1), a, b, c)
    return DarbouxWalk(walk=walk, source=f.spec, order=order, param=f.param, factors=f)


def darboux_ul(factors: ULFactors) -> DarbouxWalk:
    """``a~_n = s_n x_n``, ``b~_n = r_n x_{n-1} + s_n y_n``, ``c~_n = r_n y_{n-1}``."""
    if not isinstance(factors, ULFactors):
        raise TypeError("darboux_ul needs ULFactors")
    return _build(factors, _ul_coeffs, "UL")


def darboux_lu(factors: LUFactors) -> DarbouxWalk:
    """``a^_n = x~_n s~_{n+1}``, ``b^_n = x~_n r~_{n+1} + y~_n s~_n``, ``c^_n = y~_n r~_n``."""
    if not isinstance(factors, LUFactors):
        raise TypeError("darboux_lu needs LUFactors")
    return _build(factors, _lu_coeffs, "LU")


def darboux(factors: _Factors) -> DarbouxWalk:
    return darboux_ul(factors) if isinstance(factors, ULFactors) else darboux_lu(factors)


def reversed_product(factors: _Factors) -> np.ndarray:
    """Dense product of the factors in swapped order on the factor window."""
    first, second = factor_matrices(factors)
    return second @ first
