from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from zwalk.errors import InexactDivision
from zwalk.factorization import factor, factor_lu, factor_ul
from zwalk.polynomials import (
    ONE,
    X,
    ScalarPolynomial,
    build_q,
    build_s,
    build_t,
    conjugate_family,
    frame_rows,
    invariance_defect,
    leading_coefficients,
    potentials,
    s_zero_values,
    t_zero_values,
)
from zwalk.walk import WalkSpec

from conftest import constant_walks, force_walks, interior_param

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=9)


@given(st.lists(rationals, max_size=5), st.lists(rationals, max_size=5), rationals)
def test_scalar_polynomial_ring(p, q, x):
    P, Q = ScalarPolynomial(tuple(p)), ScalarPolynomial(tuple(q))
    assert (P * Q)(x) == P(x) * Q(x)
    assert (P + Q)(x) == P(x) + Q(x)
    assert (P - P).degree == -1


def test_divide_by_x():
    P = ScalarPolynomial((F(0), F(2), F(4)))
    assert P.divide_by_x(F(2)).coeffs == (1, 2)
    with pytest.raises(InexactDivision):
        (P + ONE).divide_by_x(F(2))


def test_initial_rows(force8):
    q = build_q(force8, 3)
    assert q[0] == (ONE, ScalarPolynomial(()))
    assert q[-1] == (ScalarPolynomial(()), ONE)
    assert q.window == (-4, 3) and q.is_exact


@given(force_walks())
def test_degrees_and_leading(spec):
    q = build_q(spec, 6)
    for n in range(1, 6):
        lead = leading_coefficients(spec, n)
        assert q.degrees(n) == (n, n - 1)
        assert q.degrees(-n - 1) == (n - 1, n)
        assert q[n][0].leading == pytest.approx(lead["R1"], rel=1e-10)
        assert q[n][1].leading == pytest.approx(lead["R2"], rel=1e-10)
        assert q[-n - 1][0].leading == pytest.approx(lead["L1"], rel=1e-10)
        assert q[-n - 1][1].leading == pytest.approx(lead["L2"], rel=1e-10)


@given(constant_walks(), st.floats(-0.9, 0.9))
def test_recurrence_values_match_exact(spec, x):
    # the same walk in exact arithmetic gives the reference values
    exact = WalkSpec.constant(*(F(v) for v in spec.coeff(0)))
    q, qe = build_q(spec, 5), build_q(exact, 5)
    vals = q.values(np.array([x]))
    for n in q.indices():
        for k in range(2):
            ref = float(qe[n][k](F(x)))
            assert vals[n][k, 0] == pytest.approx(ref, rel=1e-11, abs=1e-12)


def test_derivative_values(constant8):
    q = build_q(constant8, 4)
    x = np.array([0.3, -0.2])
    d = q.values(x, derivative=True)
    for n in q.indices():
        for k in range(2):
            assert np.allclose(d[n][k], [float(q[n][k].derivative()(t)) for t in x], atol=1e-12)


@pytest.mark.parametrize("param", [F(1, 2), F(1, 3), F(5, 6)])
def test_zero_values_exact(constant8, param):
    q = build_q(constant8, 4)
    f = factor_ul(constant8, param, 6)
    S, z = build_s(f, q), s_zero_values(f, 4)
    assert all(S[n][k].coeff(0) == z[n][k] for n in S.indices() for k in range(2))
    g = factor_lu(constant8, param, 6)
    T, z = build_t(g, q), t_zero_values(g, 4)
    assert all(T[n][k].coeff(0) == z[n][k] for n in T.indices() for k in range(2))


@pytest.mark.parametrize("order", ["UL", "LU"])
def test_degree_drop_exact(constant8, order):
    f = factor(constant8, order, F(1, 2), 6)
    q = build_q(constant8, 4)
    fam = conjugate_family(build_s(f, q) if order == "UL" else build_t(f, q))
    assert fam.is_exact
    assert fam[0] == (ONE, ScalarPolynomial(()))
    for n in range(1, 4):
        assert fam.degrees(n) == (n, n - 1)
        assert fam.degrees(-n - 1) == (n - 1, n)


def test_frame_determinant_is_multiple_of_x(constant8):
    f = factor_ul(constant8, F(1, 2), 5)
    (p, q), (u, v) = frame_rows(build_s(f, build_q(constant8, 3)))
    det = p * v - q * u
    assert det.coeffs == (0, f.s[0] / f.y[-1])


@given(force_walks(), st.floats(0, 1), st.sampled_from(["UL", "LU"]))
def test_conjugated_family_solves_darboux_recurrence(spec, u, order):
    f = factor(spec, order, interior_param(spec, u), 8)
    q = build_q(spec, 5)
    fam = conjugate_family(build_s(f, q) if f.order == "UL" else build_t(f, q))
    x = 0.37
    for n in range(-3, 4):
        a, b, c = (float(v) for v in fam.walk.coeff(n))
        for k in range(2):
            lhs = x * fam[n][k](x)
            rhs = a * fam[n + 1][k](x) + b * fam[n][k](x) + c * fam[n - 1][k](x)
            assert lhs == pytest.approx(rhs, abs=1e-8)


@given(force_walks())
def test_potentials_are_invariant(spec):
    pot = potentials(spec, 8)
    assert pot[0] == 1
    assert invariance_defect(spec, pot) <= 1e-12 * max(pot.pi.values)
    for n in range(-7, 8):
        assert pot[n] * spec.up(n) == pytest.approx(pot[n + 1] * spec.down(n + 1), rel=1e-12)


def test_exact_potentials(force8):
    pot = potentials(force8, 4)
    assert pot[1] == F(1, 3) and pot[-1] == 1 and pot[-2] == F(1, 3)
    assert invariance_defect(force8, pot) == 0.0
    assert pot.alpha[2] == F(9, 64) and pot.beta[0] == 1
