"""Closed-form spectral matrices of Darboux transformations of the example walks.

These are independent of the Geronimus/conjugation machinery in
:mod:`zwalk.spectral` and serve as a cross-check for it.  Every density is
returned as a :class:`MatrixMeasure` with the same endpoint exponents as the
constructed one, so the two can be compared pointwise.
"""

from __future__ import annotations

import math

import numpy as np

from .contfrac import closed_form
from .errors import PreconditionViolated
from .factorization import LUFactors, ULFactors, _Factors
from .spectral import ENDPOINT_TOL, MatrixMeasure, sample_density, sigma
from .walk import WalkSpec


def _rank_one(u: float) -> np.ndarray:
    return np.array([[1.0, -u], [-u, u * u]])


def _abc(spec: WalkSpec):
    return tuple(float(v) for v in spec.coeff(0))


def _limits(spec: WalkSpec):
    H, Hp = closed_form(spec, math.sqrt)
    return float(H), float(Hp)


def _quadratic_kernel(A, B, C, scale):
    def G(x):
        return (A[None] + x[:, None, None] * B[None] + (x * x)[:, None, None] * C[None]) * scale(x)[:, None, None]

    return G


def constant_darboux(spec: WalkSpec, factors: _Factors) -> MatrixMeasure:
    """``(A + B x + C x^2) / (pi x sqrt((x - s_-)(s_+ - x))) + M delta_0`` for a constant walk."""
    if spec.kind != "constant":
        raise PreconditionViolated("closed form requires a constant walk")
    a, b, c = _abc(spec)
    lo, hi = sigma(a, c)
    if lo <= 0:
        raise PreconditionViolated("closed form needs sigma_- > 0")
    H, Hp = _limits(spec)
    g = math.sqrt(lo * hi)
    f = factors
    if isinstance(f, ULFactors):
        y0, s0 = float(f.y[0]), float(f.s[0])
        xm, ym = float(f.x[-1]), float(f.y[-1])
        u = xm / ym
        A = (Hp - y0) * (H - y0) / (s0 * y0) * _rank_one(u)
        off = -b * y0 / (2 * c * ym)
        B = np.array([[1.0, off], [off, (y0 * b - c * (1 - c)) * xm**2 / (a * c * ym**2)]])
        C = y0 / (2 * c * ym) * np.array([[0.0, 1.0], [1.0, 0.0]])
        M = (y0 - Hp) * (H - y0) / (s0 * y0 * g) * _rank_one(u)
        order = "UL"
    elif isinstance(f, LUFactors):
        r0, s0, y0 = float(f.r[0]), float(f.s[0]), float(f.y[0])
        xm = float(f.x[-1])
        u = s0 / r0
        # normalized so the (1,1) total mass is 1
        k = xm * s0 / (r0 * y0)
        A = k * r0 * (Hp - r0) * (H - r0) / (xm * s0**2) * _rank_one(u)
        off = -b / (2 * y0 * r0)
        B = np.array([[1.0, off], [off, s0 * xm / (y0 * r0)]])
        C = k / (2 * s0 * xm) * np.array([[0.0, 1.0], [1.0, 0.0]])
        M = k * r0 * (r0 - Hp) * (H - r0) / (s0**2 * xm * g) * _rank_one(u)
        order = "LU"
    else:
        raise TypeError("factors must be ULFactors or LUFactors")
    G = _quadratic_kernel(A, B, C, lambda x: 1 / (math.pi * x))
    prov = {"walk": spec.digest(), "kind": spec.kind, "closed_form": order, "param": float(f.param)}
    return MatrixMeasure((lo, hi), G, (-0.5, -0.5), atoms=((0.0, M),), provenance=prov)


def force_half_darboux(spec: WalkSpec) -> MatrixMeasure:
    """Force walk with ``b = 1/2`` and ``a <= 1/4`` at ``y0 = 1 - 2a``.

    ``sqrt((x - s_-)(s_+ - x)) / (2 pi c x (1 - x)) [B + C x] + M_1 delta_1``.
    """
    a, b, c = _abc(spec)
    if spec.kind != "force" or abs(b - 0.5) > 1e-14 or not 0 < a <= 0.25:
        raise PreconditionViolated("closed form requires a force walk with b = 1/2 and a <= 1/4")
    lo, hi = sigma(a, c)
    k = (1 - 2 * a) / (2 * a)
    B = (1 - 2 * a) * _rank_one(k)
    C = k * np.array([[0.0, 1.0], [1.0, -(1 - 4 * a) / (2 * a)]])
    G = _quadratic_kernel(B, C, np.zeros((2, 2)), lambda x: 1 / (2 * math.pi * c * x * (1 - x)))
    # original atom (1-4a)/(2(1-2a)) times the Geronimus factor y0/s0 = 2(1-2a)
    M1 = (1 - 4 * a) * np.ones((2, 2))
    atoms = ((1.0, M1),) if a < 0.25 else ()
    prov = {"walk": spec.digest(), "kind": spec.kind, "closed_form": "UL", "param": 1 - 2 * a}
    return MatrixMeasure((lo, hi), G, (0.5, 0.5), atoms=atoms, provenance=prov)


def force_m_minus1(spec: WalkSpec) -> np.ndarray:
    """Closed-form ``M_{-1}`` of a force walk with ``b != 1/2``, origin atom excluded."""
    a, b, c = _abc(spec)
    if spec.kind != "force":
        raise PreconditionViolated("closed form requires a force walk")
    if abs(2 * b - 1) <= 1e-14:
        raise PreconditionViolated("b = 1/2 puts an atom at the origin; use force_m_minus1_half")
    lo, hi = sigma(a, c)
    mu = ((a + c) * math.sqrt(lo * hi) - b * abs(a - c)) / (2 * c * (2 * b - 1))
    gamma = 1.0 if c <= a else a / c
    off = (gamma - b * mu) / (a + c)
    M = np.array([[mu, off], [off, mu]])
    if c > a:
        M = M + (c - a) / (c * (2 * b - 1)) * np.array([[b, -(a + c)], [-(a + c), b]])
    return M


def force_m_minus1_half(spec: WalkSpec) -> np.ndarray:
    """Closed-form ``M_{-1}`` for ``b = 1/2``, origin atom excluded.

    The atom at 1 contributes ``(1 - 4a) / (2 (1 - 2a))`` times the all-ones
    matrix.
    """
    a, b, c = _abc(spec)
    if spec.kind != "force" or abs(b - 0.5) > 1e-14 or abs(a - 0.25) < 1e-14:
        raise PreconditionViolated("closed form requires a force walk with b = 1/2 and a != 1/4")
    d = abs(4 * a - 1)
    gamma = 1.0 if c <= a else a / c
    off = 2 * (gamma - 2 * a / d)
    M = np.array([[4 * a / d, off], [off, 4 * a / d]])
    if a < 0.25:
        M = M + (1 - 4 * a) / (2 * (1 - 2 * a)) * np.ones((2, 2))
    return M


def force_conjugates(spec: WalkSpec) -> tuple[float, float]:
    """Radical conjugates of H and H' for the force family (square root negated)."""
    a, c = float(spec.a), float(spec.c)
    p = 1 + c - a
    root = math.sqrt(max(p * p - 4 * c, 0.0))
    return (p - root) / 2, c / (2 * a) * (1 + a - c + root)


def force_darboux_ul(spec: WalkSpec, factors: ULFactors) -> MatrixMeasure:
    """UL Darboux spectrum of a force walk with ``b != 1/2``."""
    a, b, c = _abc(spec)
    if spec.kind != "force" or abs(2 * b - 1) <= 1e-14:
        raise PreconditionViolated("closed form requires a force walk with b != 1/2")
    if not isinstance(factors, ULFactors):
        raise TypeError("force_darboux_ul needs ULFactors")
    lo, hi = sigma(a, c)
    H, Hp = _limits(spec)
    Hb, Hpb = force_conjugates(spec)
    f = factors
    y0, s0, r0 = float(f.y[0]), float(f.s[0]), float(f.r[0])
    xm, ym, sm, rm = float(f.x[-1]), float(f.y[-1]), float(f.s[-1]), float(f.r[-1])
    u = xm / ym
    # (alpha_+ - y0)(alpha_- - y0) with alpha_pm = c (1 +- sqrt(1 - 2a - 2c)) / (a + c)
    quad = (y0 - c / (a + c)) ** 2 - c * c * (1 - 2 * a - 2 * c) / (a + c) ** 2
    A = (a + c) * quad / (s0 * y0) * _rank_one(u)
    off = (c * (1 - 2 * c) - b * y0) * xm / (c * ym)
    B = np.array([[2 * c, off], [off, 2 * (b * y0 - c * (1 - c)) * xm**2 / (c * ym**2)]])
    C = y0 * s0 * xm / (c * ym) * np.array([[0.0, 1.0], [1.0, (a - c) * xm / (c * ym)]])
    G = _quadratic_kernel(A, B, C, lambda x: 1 / (2 * math.pi * c * x * (1 - x) * (x - 2 * b + 1)))
    M0 = a * (Hpb - Hb) * (y0 - Hp) * (H - y0) / (c * (2 * b - 1) * s0 * y0) * _rank_one(u)
    atoms = [(0.0, M0)]
    if c > a:
        # both masses carry the Geronimus factor y0/s0
        g = y0 / s0
        v = np.array([s0 - r0, -(sm - rm)])
        atoms.append((2 * b - 1, g * (c - a) / (2 * c * (2 * b - 1)) * np.outer(v, v)))
        atoms.append((1.0, g * (c - a) / (2 * c) * np.ones((2, 2))))
    prov = {"walk": spec.digest(), "kind": spec.kind, "closed_form": "UL", "param": float(f.param)}
    return MatrixMeasure((lo, hi), G, (0.5, 0.5), atoms=tuple(atoms), provenance=prov)


def force_darboux_lu(spec: WalkSpec, factors: LUFactors) -> MatrixMeasure:
    """LU Darboux spectrum of a force walk with ``b != 1/2``."""
    a, b, c = _abc(spec)
    if spec.kind != "force" or abs(2 * b - 1) <= 1e-14:
        raise PreconditionViolated("closed form requires a force walk with b != 1/2")
    if not isinstance(factors, LUFactors):
        raise TypeError("force_darboux_lu needs LUFactors")
    lo, hi = sigma(a, c)
    H, Hp = _limits(spec)
    Hb, Hpb = force_conjugates(spec)
    f = factors
    r0, s0, y0, x0 = float(f.r[0]), float(f.s[0]), float(f.y[0]), float(f.x[0])
    xm, ym = float(f.x[-1]), float(f.y[-1])
    u = s0 / r0
    # (beta_+ - s0)(beta_- - s0) with beta_pm = (a +- c sqrt(2b - 1)) / (a + c)
    quad = (s0 - a / (a + c)) ** 2 - c * c * (2 * b - 1) / (a + c) ** 2
    A = (a + c) * quad / (s0 * y0) * _rank_one(u)
    off = ((a - c) * r0 - c * (1 - 2 * c)) / (y0 * r0)
    B = np.array([[2 * (c * (1 - c) - a * r0) / (s0 * y0), off], [off, 2 * c * s0 * xm / (y0 * r0)]])
    C = np.array([[(a - c) / (s0 * y0), ym / y0], [ym / y0, 0.0]])
    G = _quadratic_kernel(A, B, C, lambda x: 1 / (2 * math.pi * c * x * (1 - x) * (x - 2 * b + 1)))
    M0 = a * (Hpb - Hb) * (r0 - Hp) * (H - r0) / (c * (2 * b - 1) * s0 * y0) * _rank_one(u)
    atoms = [(0.0, M0)]
    if c > a:
        g = s0 / y0
        v = np.array([x0 - y0, -(xm - ym)])
        atoms.append((2 * b - 1, g * (c - a) / (2 * c * (2 * b - 1)) * np.outer(v, v)))
        atoms.append((1.0, g * (c - a) / (2 * c) * np.ones((2, 2))))
    prov = {"walk": spec.digest(), "kind": spec.kind, "closed_form": "LU", "param": float(f.param)}
    return MatrixMeasure((lo, hi), G, (0.5, 0.5), atoms=tuple(atoms), provenance=prov)


def compare(constructed: MatrixMeasure, closed: MatrixMeasure, points: int = 200) -> tuple[float, float]:
    """(max density difference on a Chebyshev grid, max atom-mass difference)."""
    x, _ = sample_density(closed, points)
    dens = float(np.abs(constructed.density(x) - closed.density(x)).max())
    masses = [(float(t), np.asarray(M, dtype=float)) for t, M in constructed.atoms]
    others = [(float(t), np.asarray(M, dtype=float)) for t, M in closed.atoms]
    worst = 0.0
    for t, M in masses + others:
        mine = sum((N for s, N in masses if abs(s - t) <= ENDPOINT_TOL), np.zeros((2, 2)))
        theirs = sum((N for s, N in others if abs(s - t) <= ENDPOINT_TOL), np.zeros((2, 2)))
        worst = max(worst, float(np.abs(mine - theirs).max()))
    return dens, worst
