"""Nearest-neighbour random walks on the integers.

A walk is described by its one-step probabilities ``a_n`` (up), ``b_n`` (stay)
and ``c_n`` (down).  Two infinite families are closed-form (constant
probabilities, and constant probabilities with ``a``/``c`` swapped on the
negative states); anything else is a finite table.

Coefficients are kept in whatever numeric type they were given in, so a walk
built from :class:`fractions.Fraction` values supports exact arithmetic
downstream.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Sequence

import numpy as np

from .errors import IndexOutOfWindow, InvalidWalk
from .window import Seq

STOCHASTIC_TOL = 1e-14

KINDS = ("constant", "force", "table")


def _check_triple(a, b, c, n=None):
    where = "" if n is None else f" at n={n}"
    if not (0 < a < 1 and 0 < c < 1):
        raise InvalidWalk(f"need 0 < a, c < 1{where}; got a={a!r}, c={c!r}")
    if b < 0:
        raise InvalidWalk(f"need b >= 0{where}; got b={b!r}")
    if abs(a + b + c - 1) > STOCHASTIC_TOL:
        raise InvalidWalk(f"a + b + c = {a + b + c!r} != 1{where}")


@dataclass(frozen=True)
class WalkSpec:
    kind: str
    a: Real | Seq
    b: Real | Seq
    c: Real | Seq

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidWalk(f"unknown walk kind {self.kind!r}")
        if self.kind == "table":
            if not (self.a.window == self.b.window == self.c.window):
                raise InvalidWalk("coefficient tables must share one window")
            for n in self.a.indices():
                _check_triple(self.a[n], self.b[n], self.c[n], n)
        else:
            _check_triple(self.a, self.b, self.c)

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, a, b, c) -> "WalkSpec":
        return cls("constant", a, b, c)

    @classmethod
    def force(cls, a, c) -> "WalkSpec":
        """Constant walk whose up/down probabilities swap below the origin.

        ``b = 1 - a - c``; a negative ``b`` is rejected.
        """
        return cls("force", a, 1 - a - c, c)

    @classmethod
    def table(cls, window: tuple[int, int], a: Sequence, b: Sequence, c: Sequence) -> "WalkSpec":
        lo, hi = window
        size = hi - lo + 1
        if not (len(a) == len(b) == len(c) == size):
            raise InvalidWalk(f"tables must have {size} entries for window {window}")
        return cls("table", Seq(tuple(a), lo), Seq(tuple(b), lo), Seq(tuple(c), lo))

    # -- queries ------------------------------------------------------------

    @property
    def window(self) -> tuple[int, int] | None:
        """Index window for tables, ``None`` for the infinite families."""
        return self.a.window if self.kind == "table" else None

    def covers(self, lo: int, hi: int) -> bool:
        w = self.window
        return w is None or (w[0] <= lo and hi <= w[1])

    def coeff(self, n: int) -> tuple:
        if self.kind == "constant":
            return self.a, self.b, self.c
        if self.kind == "force":
            if n >= 0:
                return self.a, self.b, self.c
            return self.c, self.b, self.a
        if n not in self.a:
            raise IndexOutOfWindow(n, self.window)
        return self.a[n], self.b[n], self.c[n]

    def up(self, n: int):
        return self.coeff(n)[0]

    def stay(self, n: int):
        return self.coeff(n)[1]

    def down(self, n: int):
        return self.coeff(n)[2]

    def coeff_arrays(self, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Float arrays of ``a``, ``b``, ``c`` over ``lo..hi``."""
        trip = np.array([[float(v) for v in self.coeff(n)] for n in range(lo, hi + 1)])
        return trip[:, 0], trip[:, 1], trip[:, 2]

    @property
    def is_exact(self) -> bool:
        """True when every coefficient is a rational number type."""
        vals = (self.a.values + self.b.values + self.c.values) if self.kind == "table" else (self.a, self.b, self.c)
        return all(isinstance(v, (int, Fraction)) for v in vals)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "a": float(self.a), "b": float(self.b), "c": float(self.c)}
        if self.kind == "force":
            return {"kind": "force", "a": float(self.a), "c": float(self.c)}
        return {
            "kind": "table",
            "window": list(self.window),
            "a": [float(v) for v in self.a.values],
            "b": [float(v) for v in self.b.values],
            "c": [float(v) for v in self.c.values],
        }

    @classmethod
    def from_json(cls, d: dict) -> "WalkSpec":
        """Inverse of :meth:`to_json`; strings such as ``"1/8"`` become exact fractions."""
        kind = d.get("kind")
        num = _parse_number
        try:
            if kind == "constant":
                return cls.constant(num(d["a"]), num(d["b"]), num(d["c"]))
            if kind == "force":
                return cls.force(num(d["a"]), num(d["c"]))
            if kind == "table":
                return cls.table(
                    tuple(d["window"]), [num(v) for v in d["a"]], [num(v) for v in d["b"]], [num(v) for v in d["c"]]
                )
        except KeyError as e:
            raise InvalidWalk(f"walk spec missing field {e}") from None
        raise InvalidWalk(f"unknown walk kind {kind!r}")

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def _parse_number(v):
    if isinstance(v, str):
        try:
            return Fraction(v)
        except ValueError:
            raise InvalidWalk(f"cannot parse coefficient {v!r}") from None
    return v


def coeff(spec: WalkSpec, n: int) -> tuple:
    return spec.coeff(n)


@dataclass(frozen=True)
class TruncatedMatrix:
    """Dense restriction of the walk to states ``-N..N``.

    Transitions leaving the window are dropped, so the two boundary rows
    lose mass.
    """

    N: int
    matrix: np.ndarray

    @property
    def states(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    def entry(self, i: int, j: int) -> float:
        return float(self.matrix[i + self.N, j + self.N])

    def row_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=1)

    @property
    def defect(self) -> np.ndarray:
        return 1.0 - self.row_sums()


def truncate(spec: WalkSpec, N: int) -> TruncatedMatrix:
    if N < 1:
        raise ValueError("N must be >= 1")
    a, b, c = spec.coeff_arrays(-N, N)
    P = np.diag(b) + np.diag(a[:-1], 1) + np.diag(c[1:], -1)
    return TruncatedMatrix(N, P)
