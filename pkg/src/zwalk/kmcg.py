"""Karlin-McGregor representation of n-step probabilities and its checks.

``P^(n)_{ij} = pi_j * int x**n Q_i(x) dPsi(x) Q_j(x)^T`` is compared with
the (i, j) entry of a power of a finite truncation, which is exact as long
as the truncation reaches ``n`` states beyond ``i`` and ``j``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import WindowTooSmall
from .polynomials import PolynomialFamily, PotentialCoefficients, potentials
from .spectral import Discretization, MatrixMeasure, default_nodes, discretize, pair_values
from .walk import WalkSpec, truncate

MC_BLOCK = 1 << 16


@dataclass(frozen=True)
class Entry:
    i: int
    j: int
    n: int
    value: float
    reference: float
    error: float
    label: str = "km"


@dataclass
class VerificationReport:
    entries: list = field(default_factory=list)
    nodes: int = 0
    window: tuple = ()
    tol: float = 0.0

    @property
    def max_error(self) -> float:
        return max((e.error for e in self.entries), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tol

    def summary(self) -> str:
        state = "pass" if self.passed else "FAIL"
        return f"{state}: {len(self.entries)} entries, max error {self.max_error:.3e} (tol {self.tol:.1e}, nodes {self.nodes})"

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "max_error": self.max_error,
            "tol": self.tol,
            "nodes": self.nodes,
            "window": list(self.window),
            "entries": [asdict(e) for e in self.entries],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label", "i", "j", "n", "value", "reference", "error"])
        for e in self.entries:
            w.writerow([e.label, e.i, e.j, e.n, repr(e.value), repr(e.reference), repr(e.error)])
        return buf.getvalue()


# -- values of a family on a discretization ---------------------------------------------


@dataclass(frozen=True)
class _Sampled:
    disc: Discretization
    idx: list
    V: np.ndarray  # (m, 2, K)
    at: dict  # t -> (values (m, 2), derivatives (m, 2))


def _sample(measure: MatrixMeasure, family: PolynomialFamily, indices, nodes) -> _Sampled:
    d = discretize(measure, nodes)
    vals = family.values(d.points)
    idx = list(indices)
    V = np.array([vals[n] for n in idx])
    at = {}
    for t, _ in d.derivative_atoms:
        pt = np.array([t], dtype=d.points.dtype)
        v = family.values(pt)
        dv = family.values(pt, derivative=True)
        at[t] = (np.array([v[n][:, 0] for n in idx]), np.array([dv[n][:, 0] for n in idx]))
    return _Sampled(d, idx, V, at)


def _power_gram(s: _Sampled, n: int, rows=None) -> np.ndarray:
    """``int x**n Q_i dPsi Q_j^T`` for all sampled i (or ``rows``) and j."""
    rows = slice(None) if rows is None else rows
    x = s.disc.points
    L = s.V[rows] * (x**n)[None, None, :]

    def deriv(t):
        v, dv = s.at[t]
        tn = t**n
        dtn = n * t ** (n - 1) if n > 0 else 0.0
        return v[rows] * tn, dv[rows] * tn + v[rows] * dtn, v, dv

    return pair_values(s.disc, L, s.V, deriv_points=deriv)


# -- public operations --------------------------------------------------------------------


def km_probability(
    measure: MatrixMeasure,
    q: PolynomialFamily,
    pot: PotentialCoefficients,
    i: int,
    j: int,
    n: int,
    nodes: int | None = None,
) -> float:
    if i not in q or j not in q or j not in pot.pi:
        raise WindowTooSmall(f"indices ({i}, {j}) outside family window {q.window} or potentials {pot.window}")
    s = _sample(measure, q, [i, j], nodes)
    G = _power_gram(s, n, rows=slice(0, 1))
    return float(pot[j]) * float(G[0, 1])


def oracle_power(spec: WalkSpec, i: int, j: int, n: int) -> float:
    """(i, j) entry of the n-th power of a truncation wide enough to be exact."""
    if n == 0:
        return 1.0 if i == j else 0.0
    N = max(abs(i), abs(j)) + n
    if not spec.covers(-N, N):
        raise WindowTooSmall(f"walk window {spec.window} does not cover [-{N}, {N}]")
    T = truncate(spec, N)
    P = np.linalg.matrix_power(T.matrix, n)
    return float(P[i + N, j + N])


def _oracle_powers(spec: WalkSpec, max_index: int, max_steps: int):
    N = max_index + max_steps
    if not spec.covers(-N, N):
        raise WindowTooSmall(f"walk window {spec.window} does not cover [-{N}, {N}]")
    T = truncate(spec, N).matrix
    out = [np.eye(2 * N + 1)]
    for _ in range(max_steps):
        out.append(out[-1] @ T)
    return N, out


def verify(
    measure: MatrixMeasure,
    q: PolynomialFamily,
    pot: PotentialCoefficients,
    spec: WalkSpec,
    max_index: int,
    max_steps: int,
    tol: float,
    nodes: int | None = None,
) -> VerificationReport:
    """Karlin-McGregor values against the truncated-power oracle for |i|, |j| <= max_index, n <= max_steps."""
    nodes = nodes or default_nodes()
    idx = list(range(-max_index, max_index + 1))
    for k in idx:
        if k not in q:
            raise WindowTooSmall(f"index {k} outside family window {q.window}")
    s = _sample(measure, q, idx, nodes)
    N, powers = _oracle_powers(spec, max_index, max_steps)
    pi = np.array([float(pot[j]) for j in idx])
    report = VerificationReport(nodes=nodes, window=(-max_index, max_index), tol=tol)
    for n in range(max_steps + 1):
        km = _power_gram(s, n) * pi[None, :]
        for a, i in enumerate(idx):
            for b, j in enumerate(idx):
                ref = float(powers[n][i + N, j + N])
                v = float(km[a, b])
                report.entries.append(Entry(i, j, n, v, ref, abs(v - ref)))
    return report


def orthogonality_suite(
    measure: MatrixMeasure,
    q: PolynomialFamily,
    pot: PotentialCoefficients | None = None,
    max_index: int = 8,
    tol: float = 1e-9,
    nodes: int | None = None,
) -> VerificationReport:
    """Norms ``delta_ij / pi_j`` and the monomial conditions with ``alpha_n``, ``beta_n``.

    Potentials default to those of the walk the family's recurrence uses.
    Errors are measured on the orthonormal scale: a norm entry (i, j) is
    weighted by ``sqrt(pi_i pi_j)`` and a monomial entry for row i by
    ``sqrt(pi_i)``.  Raw entries for large |i| are sums of terms of size
    ``1/pi`` that cancel, so absolute errors there say nothing about accuracy.
    """
    nodes = nodes or default_nodes()
    if pot is None:
        pot = potentials(q.walk, max_index + 1)
    idx = list(range(-max_index - 1, max_index + 1))
    s = _sample(measure, q, idx, nodes)
    G = _power_gram(s, 0)
    report = VerificationReport(nodes=nodes, window=(-max_index - 1, max_index), tol=tol)

    def add(label, i, j, n, v, ref, scale):
        report.entries.append(Entry(i, j, n, float(v), float(ref), abs(float(v) - float(ref)) * scale, label))

    for a, i in enumerate(idx):
        for b, j in enumerate(idx):
            if abs(i) > max_index or abs(j) > max_index:
                continue
            scale = float(np.sqrt(float(pot[i]) * float(pot[j])))
            add("norm", i, j, 0, G[a, b], (1 / float(pot[j])) if i == j else 0.0, scale)

    # row paired with x**k times unit vectors
    d = s.disc
    x = d.points
    E = np.zeros((2, 2, x.size))
    E[0, 0] = E[1, 1] = 1.0
    for m in range(0, max_index + 1):
        for row, target, beta in ((m, 0, False), (-m - 1, 1, True)):
            a = idx.index(row)
            for k in range(0, m + 1):
                L = s.V[a : a + 1] * (x**k)[None, None, :]
                R = E * 1.0

                def deriv(t, a=a, k=k):
                    v, dv = s.at[t]
                    tk = t**k
                    dtk = k * t ** (k - 1) if k > 0 else 0.0
                    unit = np.eye(2)
                    return v[a : a + 1] * tk, dv[a : a + 1] * tk + v[a : a + 1] * dtk, unit, np.zeros((2, 2))

                vec = pair_values(d, L, R, deriv_points=deriv)[0]
                ref = np.zeros(2)
                if k == m:
                    ref[target] = float(pot.beta[m] if beta else pot.alpha[m])
                label = "monomial_beta" if beta else "monomial_alpha"
                for comp in range(2):
                    add(f"{label}_{comp + 1}", row, k, m, vec[comp], ref[comp], float(np.sqrt(float(pot[row]))))
    return report


# -- Monte Carlo ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EmpiricalDistribution:
    start: int
    steps: int
    paths: int
    seed: int
    states: np.ndarray
    probs: np.ndarray
    stderr: np.ndarray

    def prob(self, j: int) -> float:
        k = j - int(self.states[0])
        return float(self.probs[k]) if 0 <= k < self.probs.size else 0.0

    def se(self, j: int) -> float:
        k = j - int(self.states[0])
        return float(self.stderr[k]) if 0 <= k < self.stderr.size else 0.0


def _block_rng(seed: int, block: int) -> np.random.Generator:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, block], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def simulate(spec: WalkSpec, i: int, n: int, paths: int, seed: int) -> EmpiricalDistribution:
    """Empirical law of ``X_n`` given ``X_0 = i``.

    Paths are split into fixed blocks and block ``k`` draws from a Philox
    stream keyed by ``(seed, k)``, so results do not depend on how blocks are
    scheduled.
    """
    lo, hi = i - n, i + n
    if n > 0 and not spec.covers(lo, hi):
        raise WindowTooSmall(f"walk window {spec.window} does not cover [{lo}, {hi}]")
    counts = np.zeros(hi - lo + 1, dtype=np.int64)
    if n == 0:
        counts[i - lo] = paths
    else:
        a, b, c = spec.coeff_arrays(lo, hi)
        down = c
        stay = c + b
        for block, start in enumerate(range(0, paths, MC_BLOCK)):
            size = min(MC_BLOCK, paths - start)
            u = _block_rng(seed, block).random((n, size))
            pos = np.full(size, i - lo)
            for step in range(n):
                step_u = u[step]
                move = np.where(step_u < down[pos], -1, np.where(step_u < stay[pos], 0, 1))
                pos = pos + move
            counts += np.bincount(pos, minlength=counts.size)
    p = counts / paths
    se = np.sqrt(p * (1 - p) / paths)
    return EmpiricalDistribution(i, n, paths, seed, np.arange(lo, hi + 1), p, se)
