from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from zwalk.darboux import darboux, reversed_product
from zwalk.factorization import LOWER, UPPER, factor
from zwalk.walk import truncate

from conftest import constant_walks, force_walks, interior_param


@pytest.mark.parametrize("order", ["UL", "LU"])
@pytest.mark.parametrize("param", [UPPER, LOWER])
def test_constant_invariance_at_end_points(constant8, order, param):
    dw = darboux(factor(constant8, order, param, 17))
    for n in range(-15, 16):
        got = np.array([float(v) for v in dw.coeff(n)])
        assert np.abs(got - [0.125, 0.75, 0.125]).max() <= 1e-12


def test_force_locality(force8):
    dw = darboux(factor(force8, "UL", F(3, 4), 17))
    assert dw.coeff(0) == (F(1, 8), F(3, 4), F(1, 8))
    for n in range(-15, 16):
        if n != 0:
            assert dw.coeff(n) == force8.coeff(n)


@given(constant_walks(), st.floats(0, 1), st.sampled_from(["UL", "LU"]))
def test_darboux_walk_is_stochastic(spec, u, order):
    dw = darboux(factor(spec, order, interior_param(spec, u), 10))
    for n in range(-9, 10):
        a, b, c = (float(v) for v in dw.coeff(n))
        assert a + b + c == pytest.approx(1.0, abs=1e-13)
        assert min(a, b, c) >= -1e-15


@given(force_walks(), st.floats(0, 1), st.sampled_from(["UL", "LU"]))
def test_reversed_product_matches_table(spec, u, order):
    f = factor(spec, order, interior_param(spec, u), 8)
    dw = darboux(f)
    P = reversed_product(f)
    T = truncate(dw.walk, 7).matrix
    assert np.abs(P[1:-1, 1:-1] - T)[1:-1, 1:-1].max() <= 1e-13


def test_order_recorded(constant8):
    f = factor(constant8, "lu", 0.5, 5)
    dw = darboux(f)
    assert dw.order == "LU" and dw.window == (-4, 4) and dw.source is constant8
