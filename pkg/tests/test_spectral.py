import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from zwalk.errors import DivergentMoment, FrameMismatch, PreconditionViolated
from zwalk.factorization import factor
from zwalk.polynomials import potentials
from zwalk.spectral import (
    Frame,
    MatrixMeasure,
    Recurrence,
    classify_recurrence,
    conjugate,
    darboux_spectrum,
    example_spectrum,
    geronimus,
    m_minus1_closed,
    moment,
    pair,
    sample_density,
    sigma,
)
from zwalk.polynomials import ONE, X
from zwalk.walk import WalkSpec

from conftest import constant_walks, force_walks, interior_param


def _normalization(spec):
    m0 = moment(example_spectrum(spec), 0, 512).value
    pim1 = float(potentials(spec, 1)[-1])
    return np.array([m0[0, 0] - 1, m0[1, 1] - 1 / pim1, m0[0, 1]])


@given(constant_walks())
def test_constant_normalization(spec):
    assert np.abs(_normalization(spec)).max() <= 1e-9


@given(force_walks())
def test_force_normalization(spec):
    assert np.abs(_normalization(spec)).max() <= 1e-9


def test_sigma_and_support():
    lo, hi = sigma(0.125, 0.125)
    assert lo == pytest.approx(0.5) and hi == 1.0
    m = example_spectrum(WalkSpec.constant(0.125, 0.75, 0.125))
    assert m.support == (lo, hi) and m.exponents == (-0.5, -0.5)


def test_force_atoms():
    m = example_spectrum(WalkSpec.force(0.125, 0.375))
    assert m.atom_at(1.0) == pytest.approx(np.full((2, 2), 1 / 3))
    assert m.atom_at(0.0) == pytest.approx(np.array([[1, -1], [-1, 1]]) / 3)
    assert example_spectrum(WalkSpec.force(0.3, 0.1)).atoms == ()


def test_m_minus1_constant():
    spec = WalkSpec.constant(0.125, 0.75, 0.125)
    M = moment(example_spectrum(spec), -1, 512).value
    assert M[0, 0] == pytest.approx(math.sqrt(2), abs=1e-12)
    assert np.abs(M - m_minus1_closed(spec)).max() <= 1e-12


def test_divergent_moments():
    with pytest.raises(DivergentMoment):
        moment(example_spectrum(WalkSpec.constant(0.25, 0.5, 0.25)), -1)
    m = example_spectrum(WalkSpec.force(0.125, 0.375))
    with pytest.raises(DivergentMoment):
        moment(m, -1)
    moment(m, -1, exclude_origin_atom=True)


def test_moments_of_polynomials_by_pairing():
    m = example_spectrum(WalkSpec.constant(0.1, 0.7, 0.2))
    M1 = moment(m, 1).value
    assert pair(m, (X, ONE * 0), (ONE, ONE * 0)) == pytest.approx(M1[0, 0], abs=1e-13)
    assert pair(m, (ONE * 0, X), (ONE, ONE * 0)) == pytest.approx(M1[1, 0], abs=1e-13)


@pytest.mark.parametrize(
    "spec, expected",
    [
        (WalkSpec.constant(0.125, 0.75, 0.125), Recurrence.NULL_RECURRENT),
        (WalkSpec.constant(0.25, 0.5, 0.25), Recurrence.NULL_RECURRENT),
        (WalkSpec.constant(0.1, 0.7, 0.2), Recurrence.TRANSIENT),
        (WalkSpec.constant(0.2, 0.7, 0.1), Recurrence.TRANSIENT),
        (WalkSpec.force(0.125, 0.375), Recurrence.POSITIVE_RECURRENT),
        (WalkSpec.force(0.1, 0.3), Recurrence.POSITIVE_RECURRENT),
        (WalkSpec.force(0.3, 0.1), Recurrence.TRANSIENT),
    ],
)
def test_classification(spec, expected):
    assert classify_recurrence(example_spectrum(spec)) is expected


def test_only_example_families():
    table = WalkSpec.table((-1, 1), [0.2] * 3, [0.6] * 3, [0.2] * 3)
    with pytest.raises(PreconditionViolated):
        example_spectrum(table)


@given(constant_walks(), st.floats(0.05, 0.95), st.sampled_from(["UL", "LU"]))
def test_darboux_spectrum_normalized(spec, u, order):
    f = factor(spec, order, interior_param(spec, u), 6)
    m = darboux_spectrum(example_spectrum(spec), f)
    m0 = moment(m, 0).value
    assert m0[0, 0] == pytest.approx(1.0, abs=1e-8)
    for t, M in m.atoms:
        assert np.linalg.eigvalsh(np.asarray(M, dtype=float)).min() >= -1e-10


def test_frame_mismatch():
    spec = WalkSpec.constant(0.125, 0.75, 0.125)
    f, g = factor(spec, "UL", 0.5, 4), factor(spec, "UL", 0.6, 4)
    with pytest.raises(FrameMismatch):
        conjugate(geronimus(example_spectrum(spec), f), Frame.from_factors(g))


def test_sample_density_shape():
    x, d = sample_density(example_spectrum(WalkSpec.force(0.1, 0.3)), 50)
    assert x.shape == (50,) and d.shape == (50, 2, 2)
    assert np.all(np.diff(x) > 0)
    assert np.allclose(d, np.transpose(d, (0, 2, 1)))


def test_mp_mode_agrees_with_float():
    import mpmath

    spec = WalkSpec.constant(0.125, 0.75, 0.125)
    with mpmath.workdps(30):
        m = example_spectrum(spec, mp=True)
        val = moment(m, 1, 64).value
    assert np.abs(val.astype(float) - moment(example_spectrum(spec), 1).value).max() <= 1e-13
