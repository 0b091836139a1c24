"""Stochastic UL and LU factorizations of a walk over a finite window.

UL: ``P = P_U P_L`` with ``P_U`` pure-birth (``y_n`` stay, ``x_n`` up) and
``P_L`` pure-death (``r_n`` down, ``s_n`` stay).  LU: ``P = P~_L P~_U`` with the
tilde factors laid out the same way.  Each factorization has one free
parameter (``y_0`` for UL, ``r~_0`` for LU) and everything else follows by
recursion outward from the origin.

One direction of each recursion is unstable at the ends of the admissible
range ``[H', H]`` (the end points are repelling fixed points), so float
recursions are carried out in mpmath with adaptively increased precision and
rounded at the end.  Rational inputs are processed exactly with
:class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from . import _num
from .contfrac import closed_form, closed_form_mp, limits
from .errors import NonPositiveCoefficient, OutOfRange, WindowTooSmall
from .walk import TruncatedMatrix, WalkSpec
from .window import Seq

BOUNDARY_TOL = 1e-12
_MAX_DPS = 4096

UPPER = "H"
LOWER = "H'"
_MARKERS = {"H": UPPER, "h": UPPER, "H'": LOWER, "Hprime": LOWER, "hprime": LOWER}


@dataclass(frozen=True)
class _Factors:
    spec: WalkSpec
    param: float
    boundary: str | None = None
    """``"H"`` or ``"H'"`` when the free parameter sits on an end of its range."""
    conditional: bool = False
    """True for table walks, where the range is only known through convergent brackets."""
    residual: float = 0.0
    flagged: tuple = field(default=())
    """(name, index) of values within tolerance of 0 or 1 (boundary parameters only)."""

    @property
    def N(self) -> int:
        return -self.window[0]


@dataclass(frozen=True)
class ULFactors(_Factors):
    x: Seq = None
    y: Seq = None
    s: Seq = None
    r: Seq = None
    order = "UL"

    @property
    def window(self):
        return self.x.window


@dataclass(frozen=True)
class LUFactors(_Factors):
    r: Seq = None
    s: Seq = None
    y: Seq = None
    x: Seq = None
    order = "LU"

    @property
    def window(self):
        return self.x.window


def _resolve(spec: WalkSpec, param):
    """Return (numeric param or None, boundary tag, H', H, conditional)."""
    marker = _MARKERS.get(param) if isinstance(param, str) else None
    if isinstance(param, str) and marker is None:
        raise ValueError(f"free parameter must be a number, 'H' or \"H'\"; got {param!r}")
    if spec.kind in ("constant", "force"):
        H, Hp = closed_form(spec)
        conditional = False
    else:
        lim = limits(spec)
        H, Hp, conditional = lim.H, lim.H_prime, lim.bracketing
    if marker is not None:
        return None, marker, Hp, H, conditional
    v = float(param)
    if spec.kind != "table":
        if abs(v - H) <= BOUNDARY_TOL:
            return param, UPPER, Hp, H, conditional
        if abs(v - Hp) <= BOUNDARY_TOL:
            return param, LOWER, Hp, H, conditional
    if not Hp <= v <= H:
        raise OutOfRange(param, Hp, H)
    return param, None, Hp, H, conditional


class _Checker:
    def __init__(self, boundary):
        self.boundary = boundary
        self.flagged = []

    def __call__(self, name, n, v):
        if 0 < v < 1:
            return v
        near = -BOUNDARY_TOL <= v <= BOUNDARY_TOL or 1 - BOUNDARY_TOL <= v <= 1 + BOUNDARY_TOL
        if self.boundary is not None and near:
            self.flagged.append((name, n))
            return v
        raise NonPositiveCoefficient(name, n, v)


def _ul_recursion(coef, y0, N, chk):
    one = y0 * 0 + 1
    x, y, s, r = {}, {}, {}, {}
    a0, _, c0 = coef(0)
    y[0] = chk("y", 0, y0)
    x[0] = chk("x", 0, one - y0)
    r[0] = chk("r", 0, c0 / y0)
    s[0] = chk("s", 0, one - r[0])
    for n in range(0, N):
        an = coef(n)[0]
        c1 = coef(n + 1)[2]
        s[n + 1] = chk("s", n + 1, an / x[n])
        r[n + 1] = chk("r", n + 1, one - s[n + 1])
        y[n + 1] = chk("y", n + 1, c1 / r[n + 1])
        x[n + 1] = chk("x", n + 1, one - y[n + 1])
    for n in range(0, -N, -1):
        am, _, cm = coef(n - 1)
        x[n - 1] = chk("x", n - 1, am / s[n])
        y[n - 1] = chk("y", n - 1, one - x[n - 1])
        r[n - 1] = chk("r", n - 1, cm / y[n - 1])
        s[n - 1] = chk("s", n - 1, one - r[n - 1])
    return x, y, s, r


def _lu_recursion(coef, r0, N, chk):
    one = r0 * 0 + 1
    r, s, y, x = {}, {}, {}, {}
    a0, _, c0 = coef(0)
    r[0] = chk("r", 0, r0)
    s[0] = chk("s", 0, one - r0)
    x[0] = chk("x", 0, a0 / s[0])
    y[0] = chk("y", 0, one - x[0])
    for n in range(1, N + 1):
        an, _, cn = coef(n)
        r[n] = chk("r", n, cn / y[n - 1])
        s[n] = chk("s", n, one - r[n])
        x[n] = chk("x", n, an / s[n])
        y[n] = chk("y", n, one - x[n])
    for n in range(-1, -N - 1, -1):
        an = coef(n)[0]
        c_next = coef(n + 1)[2]
        y[n] = chk("y", n, c_next / r[n + 1])
        x[n] = chk("x", n, one - y[n])
        s[n] = chk("s", n, an / x[n])
        r[n] = chk("r", n, one - s[n])
    return r, s, y, x


def _run(spec, param, marker, N, recursion, keep_mp=False):
    """Run ``recursion`` exactly or in adaptive mpmath precision.

    Returns (dicts of values, checker).  With ``keep_mp`` the values of the
    final run are returned as mpmath numbers instead of floats.
    """
    if spec.is_exact and isinstance(param, (int, Fraction)):
        if marker is None or _exact_end(spec, marker) == param:
            chk = _Checker(marker)
            return recursion(spec.coeff, Fraction(param), N, chk), chk

    prev, prev_err = None, None
    dps = max(32, mpmath.mp.dps) if keep_mp else 32
    while True:
        chk = _Checker(marker)
        with mpmath.workdps(dps):
            if marker is None:
                p = _num.mpf(param)
            else:
                H, Hp = closed_form_mp(spec, dps) if spec.kind != "table" else map(_num.mpf, _table_ends(spec))
                p = H if marker == UPPER else Hp

            def coef(n):
                return tuple(_num.mpf(v) for v in spec.coeff(n))

            try:
                seqs = recursion(coef, p, N, chk)
                err = None
                result = tuple({n: float(v) for n, v in d.items()} for d in seqs)
                held = seqs
            except NonPositiveCoefficient as e:
                err, result = e, None
        if err is not None and prev_err is not None and (err.name, err.index) == (prev_err.name, prev_err.index):
            raise err
        if result is not None and prev is not None and _agree(result, prev):
            return (held if keep_mp else result), chk
        if dps >= _MAX_DPS:
            if err is not None:
                raise err
            return (held if keep_mp else result), chk
        prev, prev_err = result, err
        dps *= 2


def _exact_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    return Fraction(n, d) if n * n == q.numerator and d * d == q.denominator else None


def _exact_end(spec, marker):
    """H or H' as a Fraction when the closed form is rational, else None."""
    if spec.kind not in ("constant", "force") or not spec.is_exact:
        return None
    a, c = Fraction(spec.a), Fraction(spec.c)
    p = 1 + c - a
    root = _exact_sqrt(p * p - 4 * c)
    if root is None:
        return None
    H = (p + root) / 2
    if marker == UPPER:
        return H
    return c / H if spec.kind == "constant" else c / (2 * a) * (1 + a - c - root)


def _table_ends(spec):
    lim = limits(spec)
    return lim.H, lim.H_prime


def _agree(u, v):
    return all(abs(d1[n] - d2[n]) <= 1e-15 * max(1.0, abs(d1[n])) for d1, d2 in zip(u, v) for n in d1)


def _param_value(param, marker, spec):
    if marker is None:
        return param
    if spec.kind == "table":
        H, Hp = _table_ends(spec)
    else:
        H, Hp = closed_form(spec)
    return H if marker == UPPER else Hp


def factor_ul(spec: WalkSpec, y0, N: int, keep_mp: bool = False) -> ULFactors:
    """UL factors on ``-N..N`` for free parameter ``y0``.

    ``y0`` may be a number or one of the markers ``"H"`` / ``"H'"``.  Values
    within 1e-12 of H or H' are treated as that end point.  ``keep_mp``
    returns mpmath values (at least the current ``mpmath.mp.dps``) for
    high-precision downstream work.
    """
    if not spec.covers(-N - 1, N + 1):
        raise WindowTooSmall(f"walk window {spec.window} does not cover [-{N + 1}, {N + 1}]")
    param, marker, Hp, H, conditional = _resolve(spec, y0)
    (x, y, s, r), chk = _run(spec, param, marker, N, _ul_recursion, keep_mp)
    fac = ULFactors(
        spec=spec,
        param=_param_value(param, marker, spec),
        boundary=marker,
        conditional=conditional,
        flagged=tuple(chk.flagged),
        x=Seq.from_dict(x),
        y=Seq.from_dict(y),
        s=Seq.from_dict(s),
        r=Seq.from_dict(r),
    )
    return _with_residual(fac)


def factor_lu(spec: WalkSpec, r0, N: int, keep_mp: bool = False) -> LUFactors:
    """LU factors on ``-N..N`` for free parameter ``r~_0`` (see :func:`factor_ul`)."""
    if not spec.covers(-N - 1, N + 1):
        raise WindowTooSmall(f"walk window {spec.window} does not cover [-{N + 1}, {N + 1}]")
    param, marker, Hp, H, conditional = _resolve(spec, r0)
    (r, s, y, x), chk = _run(spec, param, marker, N, _lu_recursion, keep_mp)
    fac = LUFactors(
        spec=spec,
        param=_param_value(param, marker, spec),
        boundary=marker,
        conditional=conditional,
        flagged=tuple(chk.flagged),
        r=Seq.from_dict(r),
        s=Seq.from_dict(s),
        y=Seq.from_dict(y),
        x=Seq.from_dict(x),
    )
    return _with_residual(fac)


def product_coefficients(f: _Factors, n: int) -> tuple:
    """(a_n, b_n, c_n) reproduced from the factors."""
    if isinstance(f, ULFactors):
        return f.x[n] * f.s[n + 1], f.x[n] * f.r[n + 1] + f.y[n] * f.s[n], f.y[n] * f.r[n]
    return f.s[n] * f.x[n], f.r[n] * f.x[n - 1] + f.s[n] * f.y[n], f.r[n] * f.y[n - 1]


def residuals(f: _Factors) -> np.ndarray:
    """Per-index max |reproduced - original| over the indices the factors determine."""
    lo, hi = f.window
    idx = range(lo, hi) if isinstance(f, ULFactors) else range(lo + 1, hi + 1)
    out = []
    for n in idx:
        got = product_coefficients(f, n)
        want = f.spec.coeff(n)
        out.append(max(abs(float(g) - float(w)) for g, w in zip(got, want)))
    return np.array(out)


def _with_residual(f):
    from dataclasses import replace

    return replace(f, residual=float(residuals(f).max()))


def factor_matrices(f: _Factors) -> tuple[np.ndarray, np.ndarray]:
    """Dense (first, second) factor on the factor window, in product order."""
    lo, hi = f.window
    size = hi - lo + 1
    up = np.zeros((size, size))
    low = np.zeros((size, size))
    for k, n in enumerate(range(lo, hi + 1)):
        up[k, k] = float(f.y[n])
        low[k, k] = float(f.s[n])
        if k + 1 < size:
            up[k, k + 1] = float(f.x[n])
        if k > 0:
            low[k, k - 1] = float(f.r[n])
    return (up, low) if isinstance(f, ULFactors) else (low, up)


def assemble_product(factors: _Factors, order: str | None, N: int) -> TruncatedMatrix:
    """Explicit product of the two bidiagonal factors, restricted to ``-N..N``.

    ``order`` must match the factors (or be ``None``).
    """
    if order is not None and order.upper() != factors.order:
        raise ValueError(f"factors are {factors.order}, not {order}")
    M = factors.N
    if N > M - 1:
        raise WindowTooSmall(f"factors on [-{M}, {M}] determine rows only up to |n| = {M - 1}")
    first, second = factor_matrices(factors)
    P = first @ second
    k = M - N
    return TruncatedMatrix(N, P[k : k + 2 * N + 1, k : k + 2 * N + 1])


def factor(spec: WalkSpec, order: str, param, N: int, keep_mp: bool = False) -> _Factors:
    order = order.upper()
    if order == "UL":
        return factor_ul(spec, param, N, keep_mp)
    if order == "LU":
        return factor_lu(spec, param, N, keep_mp)
    raise ValueError(f"order must be UL or LU, got {order!r}")
