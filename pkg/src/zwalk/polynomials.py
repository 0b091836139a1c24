"""Polynomial families attached to a walk on the integers.

Two solutions ``Q^1, Q^2`` of ``x Q_n = a_n Q_{n+1} + b_n Q_n + c_n Q_{n-1}``
are fixed by ``Q_0 = (1, 0)``, ``Q_{-1} = (0, 1)``.  From a UL factorization
the family ``S_n = s_n Q_n + r_n Q_{n-1}`` is formed, from an LU
factorization ``T_n = y~_n Q_n + x~_n Q_{n+1}``; conjugating either by its
degree-one frame gives the polynomial families of the Darboux walks.

Coefficients are kept in the monomial basis (exactly, when the inputs are
rational).  Pointwise evaluation for quadrature goes through the recurrence,
since the monomial coefficients grow geometrically and Horner's scheme loses
several digits to cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _num
from .darboux import darboux
from .errors import DivisionByZeroProbability, InexactDivision, WindowTooSmall
from .factorization import LUFactors, ULFactors, _Factors
from .walk import WalkSpec
from .window import Seq

TRIM_TOL = 1e-10
DIVISION_TOL = 1e-10


def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction))


@dataclass(frozen=True)
class ScalarPolynomial:
    """Monomial-basis polynomial, ``coeffs[k]`` multiplying ``x**k``.

    Float coefficients below ``TRIM_TOL * max|coeff|`` at the top are dropped
    on construction, so ``degree`` reflects numerical cancellation of the
    leading term.  Exact (rational) coefficients are trimmed only when zero.
    The zero polynomial has degree -1.
    """

    coeffs: tuple

    def __post_init__(self):
        c = list(self.coeffs)
        exact = all(_is_exact(v) for v in c)
        if exact:
            while c and c[-1] == 0:
                c.pop()
        else:
            scale = max((abs(float(v)) for v in c), default=0.0)
            while c and abs(float(c[-1])) <= TRIM_TOL * scale:
                c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def constant(cls, v) -> "ScalarPolynomial":
        return cls((v,))

    @classmethod
    def monomial(cls, k: int, v=1) -> "ScalarPolynomial":
        return cls((0,) * k + (v,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(v) for v in self.coeffs)

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __add__(self, other: "ScalarPolynomial") -> "ScalarPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return ScalarPolynomial(tuple(self.coeff(k) + other.coeff(k) for k in range(n)))

    def __sub__(self, other: "ScalarPolynomial") -> "ScalarPolynomial":
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, v) -> "ScalarPolynomial":
        return ScalarPolynomial(tuple(v * c for c in self.coeffs))

    def shift(self, k: int = 1) -> "ScalarPolynomial":
        """Multiply by ``x**k``."""
        if not self.coeffs:
            return self
        return ScalarPolynomial((0,) * k + self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, ScalarPolynomial):
            return self.scale(other)
        if not self.coeffs or not other.coeffs:
            return ScalarPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, u in enumerate(self.coeffs):
            for j, v in enumerate(other.coeffs):
                out[i + j] = out[i + j] + u * v
        return ScalarPolynomial(tuple(out))

    __rmul__ = __mul__

    def derivative(self) -> "ScalarPolynomial":
        return ScalarPolynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def __call__(self, x):
        """Horner evaluation (scalars or numpy arrays)."""
        acc = x * 0 if isinstance(x, np.ndarray) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_float(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs])

    def max_abs(self) -> float:
        return max((abs(float(c)) for c in self.coeffs), default=0.0)

    def divide_by_x(self, kappa, tol: float = DIVISION_TOL, n=None) -> "ScalarPolynomial":
        """Exact division by ``kappa * x``; raises InexactDivision on a remainder."""
        if not self.coeffs:
            return self
        r = self.coeffs[0]
        if self.is_exact and _is_exact(kappa):
            if r != 0:
                raise InexactDivision(n, float(abs(r)))
        elif abs(float(r)) > tol * self.max_abs():
            raise InexactDivision(n, float(abs(r)))
        return ScalarPolynomial(tuple(c / kappa for c in self.coeffs[1:]))

    def __repr__(self):
        return f"ScalarPolynomial({list(self.coeffs)!r})"


ZERO = ScalarPolynomial(())
ONE = ScalarPolynomial((1,))
X = ScalarPolynomial((0, 1))


FAMILY_TAGS = ("Q", "S", "T", "Q~", "Q^")


@dataclass(frozen=True)
class PolynomialFamily:
    """Pairs ``(P_n^1, P_n^2)`` for ``n`` in ``window``.

    ``walk`` is the walk whose three-term recurrence the Q-type families
    satisfy (the source walk for Q, the Darboux walk for Q~ and Q^).  S and T
    families keep a reference to the Q family and the factors they were made
    from.
    """

    tag: str
    window: tuple
    rows: dict = field(repr=False)
    walk: WalkSpec | None = field(default=None, repr=False)
    factors: _Factors | None = field(default=None, repr=False)
    base: "PolynomialFamily | None" = field(default=None, repr=False)

    def __post_init__(self):
        if self.tag not in FAMILY_TAGS:
            raise ValueError(f"unknown family tag {self.tag!r}")

    def __getitem__(self, n: int) -> tuple[ScalarPolynomial, ScalarPolynomial]:
        if n not in self:
            raise WindowTooSmall(f"{self.tag}_{n} outside window {self.window}")
        return self.rows[n]

    def __contains__(self, n: int) -> bool:
        return self.window[0] <= n <= self.window[1]

    def indices(self) -> range:
        return range(self.window[0], self.window[1] + 1)

    def degrees(self, n: int) -> tuple[int, int]:
        p1, p2 = self[n]
        return p1.degree, p2.degree

    @property
    def is_exact(self) -> bool:
        return all(p.is_exact for n in self.indices() for p in self.rows[n])

    # -- pointwise evaluation ----------------------------------------------

    def values(self, x, derivative: bool = False) -> dict:
        """``{n: array (2, len(x))}`` of values (or first derivatives) at ``x``.

        Q-type families run their three-term recurrence outward from
        ``Q_0, Q_{-1}``; S and T families are combined from Q values.
        """
        mp = _num.is_mp(np.asarray(x))
        x = _num.points(x, mp)
        if self.tag in ("Q", "Q~", "Q^"):
            vals, ders = _recurrence_values(self.walk, self.window, x)
            return ders if derivative else vals
        q = self.base.values(x, derivative=derivative)
        f = self.factors
        v = lambda t: _num.scalar(t, mp)  # noqa: E731
        out = {}
        for n in self.indices():
            if self.tag == "S":
                out[n] = v(f.s[n]) * q[n] + v(f.r[n]) * q[n - 1]
            else:
                out[n] = v(f.y[n]) * q[n] + v(f.x[n]) * q[n + 1]
        return out

    def to_json(self) -> dict:
        return {
            "family": self.tag,
            "window": list(self.window),
            "rows": {
                str(n): [[float(c) for c in p.coeffs] for p in self.rows[n]] for n in self.indices()
            },
        }


def _recurrence_values(walk: WalkSpec, window, x):
    lo, hi = window
    mp = _num.is_mp(x)
    one, zero = x * 0 + 1, x * 0
    q = {0: np.vstack([one, zero]), -1: np.vstack([zero, one])}
    d = {0: np.vstack([zero, zero]), -1: np.vstack([zero, zero])}
    for n in range(0, hi):
        a, b, c = (_num.scalar(v, mp) for v in walk.coeff(n))
        q[n + 1] = ((x - b) * q[n] - c * q[n - 1]) / a
        d[n + 1] = ((x - b) * d[n] + q[n] - c * d[n - 1]) / a
    for n in range(-1, lo, -1):
        a, b, c = (_num.scalar(v, mp) for v in walk.coeff(n))
        q[n - 1] = ((x - b) * q[n] - a * q[n + 1]) / c
        d[n - 1] = ((x - b) * d[n] + q[n] - a * d[n + 1]) / c
    keep = range(lo, hi + 1)
    return {n: q[n] for n in keep}, {n: d[n] for n in keep}


# -- construction -----------------------------------------------------------


def _q_rows(walk: WalkSpec, lo: int, hi: int) -> dict:
    rows = {0: (ONE, ZERO), -1: (ZERO, ONE)}
    for n in range(0, hi):
        a, b, c = walk.coeff(n)
        if a == 0:
            raise DivisionByZeroProbability(f"a_{n} = 0")
        rows[n + 1] = tuple(
            (X * p - p * b - pm * c) * (1 / Fraction(a) if _is_exact(a) else 1.0 / a)
            for p, pm in zip(rows[n], rows[n - 1])
        )
    for n in range(-1, lo, -1):
        a, b, c = walk.coeff(n)
        if c == 0:
            raise DivisionByZeroProbability(f"c_{n} = 0")
        rows[n - 1] = tuple(
            (X * p - p * b - pp * a) * (1 / Fraction(c) if _is_exact(c) else 1.0 / c)
            for p, pp in zip(rows[n], rows[n + 1])
        )
    return {n: rows[n] for n in range(lo, hi + 1)}


def build_q(spec: WalkSpec, N: int) -> PolynomialFamily:
    """``Q_n^alpha`` for ``-N-1 <= n <= N``."""
    if not spec.covers(-N, N - 1):
        raise WindowTooSmall(f"walk window {spec.window} does not cover [-{N}, {N - 1}]")
    return PolynomialFamily("Q", (-N - 1, N), _q_rows(spec, -N - 1, N), walk=spec)


def _need(q: PolynomialFamily, lo: int, hi: int):
    if q.tag != "Q" or lo < q.window[0] or hi > q.window[1]:
        raise WindowTooSmall(f"need a Q family on [{lo}, {hi}], got {q.tag} on {q.window}")


def build_s(factors: ULFactors, q: PolynomialFamily) -> PolynomialFamily:
    """``S_n = s_n Q_n + r_n Q_{n-1}`` on ``-N..N`` (``N`` from ``q``)."""
    N = q.window[1]
    _need(q, -N - 1, N)
    if factors.N < N:
        raise WindowTooSmall(f"factors on {factors.window} do not cover [-{N}, {N}]")
    rows = {}
    for n in range(-N, N + 1):
        s, r = factors.s[n], factors.r[n]
        rows[n] = tuple(p * s + pm * r for p, pm in zip(q[n], q[n - 1]))
    return PolynomialFamily("S", (-N, N), rows, walk=q.walk, factors=factors, base=q)


def build_t(factors: LUFactors, q: PolynomialFamily) -> PolynomialFamily:
    """``T_n = y~_n Q_n + x~_n Q_{n+1}`` on ``-N-1..N-1`` (``N`` from ``q``)."""
    N = q.window[1]
    _need(q, -N - 1, N)
    if factors.N < N + 1:
        raise WindowTooSmall(f"factors on {factors.window} do not cover [-{N + 1}, {N + 1}]")
    rows = {}
    for n in range(-N - 1, N):
        y, x = factors.y[n], factors.x[n]
        rows[n] = tuple(p * y + pp * x for p, pp in zip(q[n], q[n + 1]))
    return PolynomialFamily("T", (-N - 1, N - 1), rows, walk=q.walk, factors=factors, base=q)


def frame_rows(family: PolynomialFamily) -> tuple:
    """Rows of the degree-one frame: ``S_0`` for S (rows S_0, S_{-1}), ``T_0`` for T (rows T_0, T_{-1})."""
    if family.tag not in ("S", "T"):
        raise ValueError("frames exist only for S and T families")
    return family[0], family[-1]


def frame_matrix(factors: _Factors, mp: bool = False):
    """Frame ``F(x) = A + x B`` as the pair (A, B) of 2x2 arrays."""
    f = factors
    s0, r0, xm, ym = (_num.scalar(v, mp) for v in (f.s[0], f.r[0], f.x[-1], f.y[-1]))
    zero = s0 * 0
    dtype = object if mp else float
    if isinstance(f, ULFactors):
        A = np.array([[s0, r0], [-xm * s0 / ym, -xm * r0 / ym]], dtype=dtype)
        B = np.array([[zero, zero], [zero, 1 / ym]], dtype=dtype)
    else:
        A = np.array([[-r0 * xm / s0, -r0 * ym / s0], [xm, ym]], dtype=dtype)
        B = np.array([[1 / s0, zero], [zero, zero]], dtype=dtype)
    return A, B


def conjugate_family(family: PolynomialFamily) -> PolynomialFamily:
    """Q~ (from S) or Q^ (from T): every row multiplied by the inverse frame.

    With ``F = [[p, q], [u, v]]`` built from the frame rows, ``row * adj(F)``
    is divided by ``det F``, a constant multiple of ``x``.
    """
    (p, q), (u, v) = frame_rows(family)
    det = p * v - q * u
    if det.degree != 1:
        raise InexactDivision(None, float(abs(det.coeff(0))))
    kappa = det.coeff(1)
    if not (det.is_exact and _is_exact(kappa)):
        if abs(float(det.coeff(0))) > DIVISION_TOL * det.max_abs():
            raise InexactDivision(None, float(abs(det.coeff(0))))
    rows = {}
    for n in family.indices():
        f1, f2 = family[n]
        g1 = (f1 * v - f2 * u).divide_by_x(kappa, n=n)
        g2 = (f2 * p - f1 * q).divide_by_x(kappa, n=n)
        rows[n] = (g1, g2)
    tag = "Q~" if family.tag == "S" else "Q^"
    dw = darboux(family.factors).walk
    return PolynomialFamily(tag, family.window, rows, walk=dw, factors=family.factors, base=family)


# -- leading coefficients and zero values --------------------------------------


def _prod(vals: Sequence, one):
    out = one
    for v in vals:
        out = out * v
    return out


def _one(spec: WalkSpec):
    return Fraction(1) if spec.is_exact else 1.0


def leading_coefficients(spec: WalkSpec, n: int) -> dict:
    """Closed-form leading coefficients for ``n >= 1``.

    ``R1``: Q_n^1 (degree n); ``R2``: Q_n^2 (degree n-1);
    ``L1``: Q_{-n-1}^1 (degree n-1); ``L2``: Q_{-n-1}^2 (degree n).
    """
    one = _one(spec)
    A = _prod([spec.up(k) for k in range(0, n)], one)
    C = _prod([spec.down(-k) for k in range(1, n + 1)], one)
    return {
        "R1": one / A,
        "R2": -spec.down(0) / A,
        "L1": -spec.up(-1) / C,
        "L2": one / C,
    }


def s_zero_values(factors: ULFactors, N: int) -> dict:
    """``S_n(0)`` from the alternating-product formulas, ``-N <= n <= N``."""
    f = factors
    base = (f.s[0], f.r[0])
    one = f.s[0] * 0 + 1
    out = {0: base}
    for n in range(1, N + 1):
        k = (-1) ** n * _prod([f.y[j] for j in range(n)], one) / _prod([f.x[j] for j in range(n)], one)
        out[n] = (k * base[0], k * base[1])
    for n in range(0, N):
        k = (-1) ** (n + 1) * _prod([f.x[-j] for j in range(1, n + 2)], one) / _prod(
            [f.y[-j] for j in range(1, n + 2)], one
        )
        out[-n - 1] = (k * base[0], k * base[1])
    return out


def t_zero_values(factors: LUFactors, N: int) -> dict:
    """``T_n(0)`` from the alternating-product formulas, ``-N-1 <= n <= N-1``."""
    f = factors
    base = (f.x[-1], f.y[-1])
    one = f.s[0] * 0 + 1
    out = {-1: base}
    for n in range(0, N):
        k = (-1) ** (n + 1) * _prod([f.r[j] for j in range(n + 1)], one) / _prod(
            [f.s[j] for j in range(n + 1)], one
        )
        out[n] = (k * base[0], k * base[1])
    for n in range(1, N + 1):
        k = (-1) ** n * _prod([f.s[-j] for j in range(1, n + 1)], one) / _prod(
            [f.r[-j] for j in range(1, n + 1)], one
        )
        out[-n - 1] = (k * base[0], k * base[1])
    return out


# -- potential coefficients ------------------------------------------------------


@dataclass(frozen=True)
class PotentialCoefficients:
    """``pi_n`` on ``-N..N``; ``alpha_n`` and ``beta_n`` for ``0 <= n <= N``."""

    pi: Seq
    alpha: Seq
    beta: Seq

    @property
    def window(self):
        return self.pi.window

    def __getitem__(self, n: int):
        return self.pi[n]


def potentials(spec: WalkSpec, N: int) -> PotentialCoefficients:
    if not spec.covers(-N - 1, N):
        raise WindowTooSmall(f"walk window {spec.window} does not cover [-{N + 1}, {N}]")
    one = _one(spec)
    pi = {0: one}
    for n in range(1, N + 1):
        pi[n] = pi[n - 1] * spec.up(n - 1) / spec.down(n)
        pi[-n] = pi[-n + 1] * spec.down(-n + 1) / spec.up(-n)
    alpha = {0: one}
    for n in range(1, N + 1):
        alpha[n] = alpha[n - 1] * spec.down(n)
    beta = {0: spec.up(-1) / spec.down(0)}
    for n in range(1, N + 1):
        beta[n] = beta[n - 1] * spec.up(-n - 1)
    return PotentialCoefficients(Seq.from_dict(pi), Seq.from_dict(alpha), Seq.from_dict(beta))


def invariance_defect(spec: WalkSpec, pot: PotentialCoefficients) -> float:
    """max |(pi P)_n - pi_n| over interior indices of the potential window."""
    lo, hi = pot.window
    worst = 0.0
    for n in range(lo + 1, hi):
        v = pot[n - 1] * spec.up(n - 1) + pot[n] * spec.stay(n) + pot[n + 1] * spec.down(n + 1)
        worst = max(worst, abs(float(v - pot[n])))
    return worst
