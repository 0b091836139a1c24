"""Continued fractions bounding the free factorization parameter.

``H = 1 - a0/(1 - c1/(1 - a1/(1 - c2/...)))`` is built from the non-negative
states and ``H' = c0/(1 - a_{-1}/(1 - c_{-1}/(1 - a_{-2}/...)))`` from the
negative ones.  Convergents are computed with the usual numerator/denominator
three-term recurrences rather than by nested division.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import mpmath

from . import _num
from .errors import (
    HypothesisViolated,
    IndexOutOfWindow,
    NonConvergent,
    NoStochasticRange,
    PreconditionViolated,
)
from .walk import WalkSpec

_RESCALE_HI = 1e8
_RESCALE_LO = 1e-8


@dataclass(frozen=True)
class ConvergentPair:
    """k-th convergents ``h_k = A_k/B_k`` of H and ``h'_{-k} = A'_{-k}/B'_{-k}`` of H'.

    In floating point the pairs (A, B) may have been rescaled by a common
    positive factor; the ratios and signs are unaffected.
    """

    k: int
    A: float
    B: float
    A_prime: float
    B_prime: float

    @property
    def h(self):
        return self.A / self.B

    @property
    def h_prime(self):
        return self.A_prime / self.B_prime


@dataclass(frozen=True)
class FractionLimits:
    H: float
    H_prime: float
    converged_after: int
    tolerance: float
    bracketing: bool = False
    """True when a table ran out of coefficients: H is then an upper and H' a lower bound."""


def _upper_coef(spec: WalkSpec, k: int):
    # step k of H: odd k = 2n+1 uses a_n, even k = 2n uses c_n
    return spec.up((k - 1) // 2) if k % 2 else spec.down(k // 2)


def _lower_coef(spec: WalkSpec, k: int):
    # step k of H': odd k = 2n+1 uses c_{-n}, even k = 2n uses a_{-n}
    return spec.down(-((k - 1) // 2)) if k % 2 else spec.up(-(k // 2))


def _check(k, A, B, label):
    if not (A > 0 and B > A):
        raise HypothesisViolated(f"{label}: need 0 < A < B at k={k}, got A={A!r}, B={B!r}")


def iter_convergents(spec: WalkSpec, check: bool = True) -> Iterator[ConvergentPair]:
    """Yield convergent pairs for k = 0, 1, 2, ... until coefficients run out."""
    exact = spec.is_exact
    one = Fraction(1) if exact else 1.0
    zero = one * 0
    # (X_{k-2}, X_{k-1}) for the four sequences
    A0, A1 = one, one
    B0, B1 = zero, one
    P0, P1 = -one, zero
    Q0, Q1 = zero, one
    yield ConvergentPair(0, A1, B1, P1, Q1)
    k = 0
    while True:
        k += 1
        try:
            u = _upper_coef(spec, k)
            w = _lower_coef(spec, k)
        except IndexOutOfWindow:
            return
        A0, A1 = A1, A1 - u * A0
        B0, B1 = B1, B1 - u * B0
        P0, P1 = P1, P1 - w * P0
        Q0, Q1 = Q1, Q1 - w * Q0
        if check:
            _check(k, A1, B1, "H")
            _check(k, P1, Q1, "H'")
        if not exact:
            if not _RESCALE_LO < abs(B1) < _RESCALE_HI:
                s = abs(B1)
                A0, A1, B0, B1 = A0 / s, A1 / s, B0 / s, B1 / s
            if not _RESCALE_LO < abs(Q1) < _RESCALE_HI:
                s = abs(Q1)
                P0, P1, Q0, Q1 = P0 / s, P1 / s, Q0 / s, Q1 / s
        yield ConvergentPair(k, A1, B1, P1, Q1)


def convergents(spec: WalkSpec, depth: int, check: bool = True) -> list[ConvergentPair]:
    out = []
    for pair in iter_convergents(spec, check=check):
        out.append(pair)
        if pair.k == depth:
            return out
    raise IndexOutOfWindow(depth // 2 + 1, spec.window)


def closed_form(spec: WalkSpec, sqrt=math.sqrt) -> tuple:
    """Closed-form (H, H') for the constant and force families.

    ``sqrt`` selects the arithmetic; pass ``mpmath.sqrt`` inside an mpmath
    precision context for high-precision values.
    """
    if spec.kind not in ("constant", "force"):
        raise ValueError("closed forms exist only for the constant and force families")
    a, c = spec.a, spec.c
    if sqrt is not math.sqrt:
        a, c = _num.mpf(a), _num.mpf(c)
    else:
        a, c = float(a), float(c)
    if a > (1 - sqrt(c)) ** 2 * (1 + 1e-15):
        raise PreconditionViolated(f"a={a} > (1-sqrt(c))^2: continued fractions do not converge")
    p = 1 + c - a
    disc = p * p - 4 * c
    if disc < 0:  # rounding at a = (1-sqrt(c))^2
        disc = 0 * disc
    root = sqrt(disc)
    H = (p + root) / 2
    if spec.kind == "constant":
        return H, c / H
    Hp = c / (2 * a) * (1 + a - c - root)
    if Hp > H:
        if Hp - H > 1e-14 * H:
            raise NoStochasticRange(Hp, H)
        Hp = H
    return H, Hp


def closed_form_mp(spec: WalkSpec, dps: int) -> tuple:
    with mpmath.workdps(dps):
        H, Hp = closed_form(spec, sqrt=mpmath.sqrt)
        return +H, +Hp


def limits(spec: WalkSpec, tol: float = 1e-13, max_depth: int = 10000) -> FractionLimits:
    if spec.kind in ("constant", "force"):
        H, Hp = closed_form(spec)
        return FractionLimits(H, Hp, 0, 0.0)

    last = None
    for pair in iter_convergents(spec):
        if last is not None:
            dh = abs(float(pair.h) - float(last.h))
            dhp = abs(float(pair.h_prime) - float(last.h_prime))
            if pair.k >= 2 and dh < tol and dhp < tol:
                H, Hp = float(pair.h), float(pair.h_prime)
                if Hp > H:
                    raise NoStochasticRange(Hp, H)
                return FractionLimits(H, Hp, pair.k, max(dh, dhp))
        if pair.k >= max_depth:
            raise NonConvergent(f"no convergence to tol={tol} within depth {max_depth}")
        last = pair
    # table exhausted: report brackets h'_{-k} < H' and H < h_k
    H, Hp = float(last.h), float(last.h_prime)
    if Hp > H:
        raise NoStochasticRange(Hp, H)
    return FractionLimits(H, Hp, last.k, float("nan"), bracketing=True)


def determinant_identities(spec: WalkSpec, depth: int) -> list[tuple]:
    """``(k, lhs, rhs, lhs', rhs')`` for ``k = 1..depth`` from unscaled recurrences.

    ``A_k B_{k-1} - A_{k-1} B_k = -u_1 ... u_k`` and
    ``A'_{k-1} B'_k - A'_k B'_{k-1} = -w_1 ... w_k``, where ``u`` and ``w`` are
    the step coefficients of H and H'.  Exact for rational walks.
    """
    one = Fraction(1) if spec.is_exact else 1.0
    A, B, P, Q = [one, one], [0 * one, one], [-one, 0 * one], [0 * one, one]
    pu, pw = one, one
    out = []
    for k in range(1, depth + 1):
        u, w = _upper_coef(spec, k), _lower_coef(spec, k)
        for X in (A, B):
            X.append(X[-1] - u * X[-2])
        for X in (P, Q):
            X.append(X[-1] - w * X[-2])
        pu, pw = pu * u, pw * w
        out.append((k, A[-1] * B[-2] - A[-2] * B[-1], -pu, P[-2] * Q[-1] - P[-1] * Q[-2], -pw))
    return out
