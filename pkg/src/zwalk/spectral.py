"""2x2 matrix measures on [-1, 1] and the operations the Darboux theory needs.

A :class:`MatrixMeasure` is an absolutely continuous part

    G(x) (x - lo)**e_lo (hi - x)**e_hi,   lo <= x <= hi,

with a smooth 2x2 kernel ``G`` and declared endpoint exponents, plus point
masses ``M delta_t`` and derivative masses ``D delta'_t`` (pairing
``<D delta'_t; L, R> = -(L D R^T)'(t)``).

Integrals over the AC part use ``x = m + h cos(theta)``, after which every
exponent in {-1/2, +1/2} leaves a smooth periodic integrand in ``theta``;
the midpoint (Gauss-Chebyshev) rule in ``theta`` then converges
geometrically.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import _num
from .contfrac import closed_form
from .errors import (
    DivergentMoment,
    FrameMismatch,
    PreconditionError,
    PreconditionViolated,
    UnclassifiableEndpoint,
)
from .factorization import LUFactors, ULFactors, _Factors
from .polynomials import frame_matrix
from .walk import WalkSpec

DEFAULT_NODES = 512
ENDPOINT_TOL = 1e-12


def default_nodes() -> int:
    """Quadrature node count; ``ZWALK_NODES`` overrides the default."""
    env = os.environ.get("ZWALK_NODES")
    return int(env) if env else DEFAULT_NODES


def _sym(M) -> np.ndarray:
    M = np.asarray(M)
    if M.dtype != object:
        M = M.astype(float)
    return (M + M.T) / 2


@dataclass(frozen=True)
class MatrixMeasure:
    support: tuple
    kernel: Callable | None
    exponents: tuple = (-0.5, -0.5)
    atoms: tuple = ()
    derivative_atoms: tuple = ()
    provenance: dict = field(default_factory=dict, compare=False)
    mp: bool = False

    @property
    def lo(self) -> float:
        return self.support[0]

    @property
    def hi(self) -> float:
        return self.support[1]

    def weight(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u = np.clip(x - self.lo, 0.0, None)
        v = np.clip(self.hi - x, 0.0, None)
        with np.errstate(divide="ignore", invalid="ignore"):
            return u ** self.exponents[0] * v ** self.exponents[1]

    def density(self, x) -> np.ndarray:
        """AC density at ``x`` as an array of shape (len(x), 2, 2); zero off the support."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros((x.size, 2, 2))
        inside = (x > self.lo) & (x < self.hi)
        if self.kernel is not None and inside.any():
            xi = x[inside]
            out[inside] = _num.to_float(self.kernel(xi)) * self.weight(xi)[:, None, None]
        return out

    def atom_at(self, t: float, tol: float = ENDPOINT_TOL):
        for s, M in self.atoms:
            if abs(s - t) <= tol:
                return M
        return None

    def without_atom(self, t: float, tol: float = ENDPOINT_TOL) -> "MatrixMeasure":
        return replace(self, atoms=tuple((s, M) for s, M in self.atoms if abs(s - t) > tol))


@dataclass(frozen=True)
class Moment:
    order: int
    value: np.ndarray


@dataclass(frozen=True)
class Discretization:
    """Quadrature nodes with matrix weights, atoms included as nodes."""

    points: np.ndarray
    weights: np.ndarray
    derivative_atoms: tuple


def _nodes(measure: MatrixMeasure, nodes: int):
    mp = measure.mp
    m = (measure.lo + measure.hi) / 2
    h = (measure.hi - measure.lo) / 2
    pi = _num.pi(mp)
    k = _num.points(np.arange(1, nodes + 1), mp)
    c = _num.cos((2 * k - 1) * pi / (2 * nodes))
    x = m + h * c
    e0, e1 = measure.exponents
    w = (pi / nodes) * h ** (e0 + e1 + 1) * (1 + c) ** int(e0 + 0.5) * (1 - c) ** int(e1 + 0.5)
    return x, w


def discretize(measure: MatrixMeasure, nodes: int | None = None) -> Discretization:
    nodes = nodes or default_nodes()
    pts, wts = [], []
    if measure.kernel is not None and measure.hi > measure.lo:
        x, w = _nodes(measure, nodes)
        pts.append(x)
        wts.append(measure.kernel(x) * w[:, None, None])
    dtype = object if measure.mp else float
    for t, M in measure.atoms:
        pts.append(np.array([t], dtype=dtype))
        wts.append(np.asarray(M, dtype=dtype)[None])
    if not pts:
        return Discretization(np.zeros(0), np.zeros((0, 2, 2)), measure.derivative_atoms)
    return Discretization(np.concatenate(pts), np.concatenate(wts), measure.derivative_atoms)


# -- moments and pairings --------------------------------------------------------


def _origin_in_support(measure: MatrixMeasure) -> bool:
    if measure.kernel is None:
        return False
    lo, hi = measure.support
    if abs(lo) <= ENDPOINT_TOL:
        return measure.exponents[0] <= 0
    if abs(hi) <= ENDPOINT_TOL:
        return measure.exponents[1] <= 0
    return lo < 0 < hi


def moment(measure: MatrixMeasure, k: int, nodes: int | None = None, exclude_origin_atom: bool = False) -> Moment:
    """``int x**k dPsi``.  For ``k = -1`` the pairing must converge.

    ``exclude_origin_atom`` drops a point mass at 0 from a ``k = -1`` moment
    (the Geronimus step turns such a mass into a derivative mass instead).
    """
    if k < -1:
        raise ValueError("moments of order below -1 are not supported")
    if k == -1:
        if _origin_in_support(measure):
            raise DivergentMoment("0 lies in the support of a density not vanishing there")
        if measure.atom_at(0.0) is not None and not exclude_origin_atom:
            raise DivergentMoment("atom at 0: moment of order -1 is undefined")
        if any(abs(t) <= ENDPOINT_TOL for t, _ in measure.derivative_atoms):
            raise DivergentMoment("derivative mass at 0: moment of order -1 is undefined")
        if exclude_origin_atom:
            measure = measure.without_atom(0.0)
    d = discretize(measure, nodes)
    val = np.einsum("k,kij->ij", d.points**k, d.weights)
    for t, D in d.derivative_atoms:
        val = val - (k * t ** (k - 1) if k else 0.0) * np.asarray(D)
    return Moment(k, _sym(val))


def pair_values(d: Discretization, L, R, dL=None, dR=None, deriv_points=None) -> np.ndarray:
    """Gram-type pairing from values at ``d.points``.

    ``L`` and ``R`` have shape (m, 2, K) and (p, 2, K) (m left and p right
    vector functions); returns the (m, p) matrix of pairings.  Derivative
    masses need values and derivatives at their points, passed as callables
    ``deriv_points(t) -> (L(t), L'(t), R(t), R'(t))`` with shapes (m, 2) / (p, 2).
    """
    WR = np.einsum("kij,bjk->bik", d.weights, R)
    G = np.einsum("aik,bik->ab", L, WR)
    for t, D in d.derivative_atoms:
        Lt, dLt, Rt, dRt = deriv_points(t)
        D = np.asarray(D)
        G = G - (dLt @ D @ Rt.T + Lt @ D @ dRt.T)
    return G


def pair(measure: MatrixMeasure, left, right, nodes: int | None = None) -> float:
    """``int left(x) dPsi(x) right(x)^T`` for 2-vectors of polynomials."""
    d = discretize(measure, nodes)
    x = d.points
    L = np.array([[p(x) * np.ones_like(x) for p in left]])
    R = np.array([[p(x) * np.ones_like(x) for p in right]])

    def at(t):
        lv = np.array([[float(p(t)) for p in left]])
        ld = np.array([[float(p.derivative()(t)) for p in left]])
        rv = np.array([[float(p(t)) for p in right]])
        rd = np.array([[float(p.derivative()(t)) for p in right]])
        return lv, ld, rv, rd

    return float(pair_values(d, L, R, deriv_points=at)[0, 0])


# -- closed-form spectra of the two example families -------------------------------


def sigma(a: float, c: float, mp: bool = False) -> tuple[float, float]:
    ra, rc = _num.sqrt(a, mp), _num.sqrt(c, mp)
    return 1 - (ra + rc) ** 2, 1 - (ra - rc) ** 2


def _constant_measure(a, b, c, provenance, mp=False) -> MatrixMeasure:
    lo, hi = sigma(a, c, mp)
    pi = _num.pi(mp)

    def G(x):
        return _num.stack22(x * 0 + 1 / pi, (x - b) / (2 * c * pi), x * 0 + a / (c * pi))

    return MatrixMeasure((lo, hi), G, (-0.5, -0.5), provenance=provenance, mp=mp)


def _force_measure(a, b, c, provenance, mp=False) -> MatrixMeasure:
    lo, hi = sigma(a, c, mp)
    pi = _num.pi(mp)

    def G(x):
        f = (a + c) / (2 * pi * c * (1 - x) * (x - 2 * b + 1))
        return _num.stack22(f, f * (x - b) / (a + c), f)

    atoms = ()
    if c > a:
        m = (c - a) / (2 * c)
        dtype = object if mp else float
        one = np.array([[1, -1], [-1, 1]], dtype=dtype)
        atoms = ((2 * b - 1, m * one), (b * 0 + 1, m * np.abs(one)))
    return MatrixMeasure((lo, hi), G, (0.5, 0.5), atoms=atoms, provenance=provenance, mp=mp)


def example_spectrum(spec: WalkSpec, mp: bool = False) -> MatrixMeasure:
    """Closed-form spectral matrix of a constant or force walk.

    With ``mp`` the measure works in mpmath at the current ``mpmath.mp.dps``.
    """
    a, b, c = (_num.scalar(v, mp) for v in spec.coeff(0))
    if mp:
        # float inputs need not sum to 1 exactly; the boundary cancellations need it
        b = 1 - a - c
    prov = {"walk": spec.digest(), "kind": spec.kind}
    if spec.kind == "constant":
        return _constant_measure(a, b, c, prov, mp)
    if spec.kind == "force":
        try:
            closed_form(spec)
        except PreconditionError as e:
            raise PreconditionViolated(f"force parameters a={a}, c={c} outside the admissible range: {e}") from None
        if a == c:
            return _constant_measure(a, b, c, prov, mp)
        return _force_measure(a, b, c, prov, mp)
    raise PreconditionViolated("closed-form spectra exist only for the constant and force families")


def m_minus1_closed(spec: WalkSpec) -> np.ndarray:
    """Closed-form ``M_{-1}`` of the constant family."""
    if spec.kind != "constant":
        raise ValueError("closed-form M_{-1} is implemented for the constant family")
    a, b, c = (float(v) for v in spec.coeff(0))
    lo, hi = sigma(a, c)
    if lo <= 0:
        raise DivergentMoment("sigma_- = 0: M_{-1} diverges")
    g = math.sqrt(lo * hi)
    off = (1 - b / g) / (2 * c)
    return np.array([[1 / g, off], [off, a / (c * g)]])


# -- Geronimus transformation and conjugation --------------------------------------


def _divide_by_x(measure: MatrixMeasure, coef: float) -> MatrixMeasure:
    """``coef * measure / x`` with an origin atom turned into a derivative mass."""
    lo, hi = measure.support
    e0, e1 = measure.exponents
    kernel = None
    if measure.kernel is not None:
        if _origin_in_support(measure):
            raise DivergentMoment("measure/x is not integrable: 0 lies in the support")
        G = measure.kernel
        if abs(lo) <= ENDPOINT_TOL:
            kernel, e0 = (lambda x: coef * G(x)), e0 - 1
        elif abs(hi) <= ENDPOINT_TOL:
            kernel, e1 = (lambda x: -coef * G(x)), e1 - 1
        else:
            kernel = lambda x: coef * G(x) / x[:, None, None]  # noqa: E731
    atoms, datoms = [], []
    for t, M in measure.atoms:
        if abs(t) <= ENDPOINT_TOL:
            datoms.append((t * 0, -coef * np.asarray(M)))
        else:
            atoms.append((t, coef * np.asarray(M) / t))
    if measure.derivative_atoms:
        raise DivergentMoment("cannot divide a derivative mass by x")
    return MatrixMeasure((lo, hi), kernel, (e0, e1), tuple(atoms), tuple(datoms), dict(measure.provenance), measure.mp)


def _add_origin_atom(measure: MatrixMeasure, K) -> MatrixMeasure:
    atoms = list(measure.atoms)
    zero = _num.scalar(0, measure.mp)
    for i, (t, M) in enumerate(atoms):
        if abs(t) <= ENDPOINT_TOL:
            atoms[i] = (zero, np.asarray(M) + K)
            break
    else:
        atoms.append((zero, np.asarray(K)))
    return replace(measure, atoms=tuple(atoms))


def _m_minus1(measure, m_minus1, nodes):
    if m_minus1 is None:
        m_minus1 = moment(measure, -1, nodes, exclude_origin_atom=True)
    return m_minus1.value if isinstance(m_minus1, Moment) else np.asarray(m_minus1)


def _diag(u, v) -> np.ndarray:
    return np.array([[u, u * 0], [v * 0, v]], dtype=object if not isinstance(u, float) else float)


def geronimus_ul(measure: MatrixMeasure, factors: ULFactors, m_minus1=None, nodes: int | None = None) -> MatrixMeasure:
    """``Psi_S = (y0/s0) Psi/x + [diag(1/s0, 1/r0) - (y0/s0) M_{-1}] delta_0``."""
    y0, s0, r0 = (_num.scalar(v, measure.mp) for v in (factors.y[0], factors.s[0], factors.r[0]))
    M = _m_minus1(measure, m_minus1, nodes)
    coef = y0 / s0
    K = _diag(1 / s0, 1 / r0) - coef * M
    out = _add_origin_atom(_divide_by_x(measure, coef), _sym(K))
    prov = dict(measure.provenance, geronimus="UL", param=float(factors.param))
    return replace(out, provenance=prov)


def geronimus_lu(measure: MatrixMeasure, factors: LUFactors, m_minus1=None, nodes: int | None = None) -> MatrixMeasure:
    """``Psi_T = (s~0/y~0) Psi/x + [(a^_{-1}/c^_0) diag(1/x~_{-1}, 1/y~_{-1}) - (s~0/y~0) M_{-1}] delta_0``."""
    s0, y0, r0, xm, ym = (
        _num.scalar(v, measure.mp) for v in (factors.s[0], factors.y[0], factors.r[0], factors.x[-1], factors.y[-1])
    )
    M = _m_minus1(measure, m_minus1, nodes)
    coef = s0 / y0
    ratio = xm * s0 / (y0 * r0)
    K = ratio * _diag(1 / xm, 1 / ym) - coef * M
    out = _add_origin_atom(_divide_by_x(measure, coef), _sym(K))
    prov = dict(measure.provenance, geronimus="LU", param=float(factors.param))
    return replace(out, provenance=prov)


def geronimus(measure: MatrixMeasure, factors: _Factors, m_minus1=None, nodes: int | None = None) -> MatrixMeasure:
    if isinstance(factors, ULFactors):
        return geronimus_ul(measure, factors, m_minus1, nodes)
    return geronimus_lu(measure, factors, m_minus1, nodes)


@dataclass(frozen=True)
class Frame:
    """Degree-one matrix polynomial ``F(x) = A + x B``."""

    A: np.ndarray
    B: np.ndarray
    order: str | None = None
    param: float | None = None

    @classmethod
    def from_factors(cls, factors: _Factors, mp: bool = False) -> "Frame":
        A, B = frame_matrix(factors, mp)
        return cls(A, B, factors.order, float(factors.param))

    def __call__(self, x) -> np.ndarray:
        x = _num.points(x, self.A.dtype == object)
        return self.A[None] + x[:, None, None] * self.B[None]


def conjugate(measure: MatrixMeasure, frame) -> MatrixMeasure:
    """``F(x) Psi(x) F(x)^T`` for a degree-one frame ``F = A + x B``."""
    if isinstance(frame, _Factors):
        frame = Frame.from_factors(frame, measure.mp)
    prov = measure.provenance
    if frame.order is not None and "geronimus" in prov:
        if prov["geronimus"] != frame.order or abs(prov["param"] - frame.param) > 1e-15:
            raise FrameMismatch(
                f"frame ({frame.order}, {frame.param}) does not match measure ({prov['geronimus']}, {prov['param']})"
            )
    A, B = frame.A, frame.B
    kernel = None
    if measure.kernel is not None:
        G = measure.kernel

        def kernel(x):
            F = frame(x)
            return F @ G(x) @ np.transpose(F, (0, 2, 1))

    atoms = [(t, _sym(frame(t)[0] @ M @ frame(t)[0].T)) for t, M in measure.atoms]
    datoms = []
    for t, D in measure.derivative_atoms:
        F = frame(t)[0]
        datoms.append((t, _sym(F @ D @ F.T)))
        atoms.append((t, _sym(-(B @ D @ F.T + F @ D @ B.T))))
    merged = {}
    for t, M in atoms:
        key = next((s for s in merged if abs(s - t) <= ENDPOINT_TOL), t)
        merged[key] = merged.get(key, 0) + M
    new_prov = {k: v for k, v in prov.items() if k != "geronimus"}
    new_prov["darboux"] = frame.order
    return MatrixMeasure(
        measure.support,
        kernel,
        measure.exponents,
        tuple(merged.items()),
        tuple(datoms),
        new_prov,
        measure.mp,
    )


def darboux_spectrum(measure: MatrixMeasure, factors: _Factors, nodes: int | None = None) -> MatrixMeasure:
    """Spectral matrix of the Darboux walk: Geronimus step, then conjugation by the frame."""
    return conjugate(geronimus(measure, factors, nodes=nodes), Frame.from_factors(factors, measure.mp))


# -- recurrence ---------------------------------------------------------------------


class Recurrence(str, enum.Enum):
    TRANSIENT = "Transient"
    NULL_RECURRENT = "NullRecurrent"
    POSITIVE_RECURRENT = "PositiveRecurrent"


def classify_recurrence(measure: MatrixMeasure, tol: float = ENDPOINT_TOL) -> Recurrence:
    """Atom at 1 -> positive recurrent; otherwise recurrent iff psi/(1-x) diverges at 1."""
    M1 = measure.atom_at(1.0, tol)
    if M1 is not None and np.abs(M1).max() > tol:
        return Recurrence.POSITIVE_RECURRENT
    if measure.kernel is not None and abs(measure.hi - 1.0) <= tol:
        e = measure.exponents[1]
        if e == 0:
            raise UnclassifiableEndpoint("sigma_+ = 1 with exponent 0: no rule decides recurrence")
        return Recurrence.NULL_RECURRENT if e <= -0.5 else Recurrence.TRANSIENT
    return Recurrence.TRANSIENT


# -- sampling (for output) ----------------------------------------------------------


def sample_density(measure: MatrixMeasure, points: int = 200) -> tuple[np.ndarray, np.ndarray]:
    """Density on a grid strictly inside the support (Chebyshev points)."""
    k = np.arange(1, points + 1)
    x = 0.5 * (measure.lo + measure.hi) + 0.5 * (measure.hi - measure.lo) * np.cos((2 * k - 1) * np.pi / (2 * points))
    x = np.sort(x)
    return x, measure.density(x)
