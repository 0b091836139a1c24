"""End-to-end assembly of (walk, polynomial family, spectral matrix, potentials).

Used by the command line, the scripts and the acceptance tests.  Every object
built with ``dps > 0`` holds mpmath numbers and must be used inside
:func:`precision` with the same ``dps``; the verification helpers here take
care of that.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass

import mpmath

from .darboux import darboux
from .factorization import _Factors, factor
from .kmcg import VerificationReport, orthogonality_suite, verify
from .polynomials import PolynomialFamily, PotentialCoefficients, build_q, build_s, build_t, conjugate_family, potentials
from .spectral import MatrixMeasure, darboux_spectrum, default_nodes, example_spectrum
from .walk import WalkSpec

MP_NODES = 128
"""Node count used in high-precision mode; the integrands are analytic on the support."""


def precision(dps: int):
    """``mpmath.workdps(dps)`` for ``dps > 0``, otherwise a no-op context."""
    return mpmath.workdps(dps) if dps else contextlib.nullcontext()


@dataclass(frozen=True)
class Setup:
    walk: WalkSpec
    family: PolynomialFamily
    measure: MatrixMeasure
    potentials: PotentialCoefficients
    factors: _Factors | None = None
    dps: int = 0

    @property
    def label(self) -> str:
        if self.factors is None:
            return f"{self.walk.kind} original"
        return f"{self.factors.spec.kind} {self.factors.order} darboux at {self.factors.param:.6g}"

    def nodes(self, nodes: int | None = None) -> int:
        if nodes:
            return nodes
        return MP_NODES if self.dps else default_nodes()


def original(spec: WalkSpec, max_index: int, dps: int = 0) -> Setup:
    """Q family, closed-form spectrum and potentials of a constant or force walk."""
    N = max_index + 2
    with precision(dps):
        q = build_q(spec, N)
        measure = example_spectrum(spec, mp=bool(dps))
        pot = potentials(spec, N)
    return Setup(spec, q, measure, pot, None, dps)


def transformed(spec: WalkSpec, order: str, param, max_index: int, max_steps: int = 0, dps: int = 0) -> Setup:
    """Darboux walk, its Q~ / Q^ family, the constructed spectral matrix and potentials.

    The factor window is wide enough for the oracle to reach ``max_index + max_steps``.
    """
    N = max_index + 2
    with precision(dps):
        f = factor(spec, order, param, max(N + 2, max_index + max_steps + 2), keep_mp=bool(dps))
        q = build_q(spec, N)
        base = build_s(f, q) if f.order == "UL" else build_t(f, q)
        fam = conjugate_family(base)
        measure = darboux_spectrum(example_spectrum(spec, mp=bool(dps)), f)
        pot = potentials(fam.walk, N - 1)
    return Setup(fam.walk, fam, measure, pot, f, dps)


def darboux_walk(spec: WalkSpec, order: str, param, N: int) -> WalkSpec:
    return darboux(factor(spec, order, param, N + 1)).walk


def km_report(setup: Setup, max_index: int, max_steps: int, tol: float, nodes: int | None = None) -> VerificationReport:
    with precision(setup.dps):
        return verify(
            setup.measure, setup.family, setup.potentials, setup.walk, max_index, max_steps, tol, setup.nodes(nodes)
        )


def orthogonality_report(setup: Setup, max_index: int, tol: float, nodes: int | None = None) -> VerificationReport:
    with precision(setup.dps):
        return orthogonality_suite(setup.measure, setup.family, setup.potentials, max_index, tol, setup.nodes(nodes))


def default_tol(spec: WalkSpec) -> float:
    """Tolerance ladder: constant spectra are smooth after substitution, force spectra carry atoms."""
    return 1e-8 if spec.kind == "constant" else 1e-7
