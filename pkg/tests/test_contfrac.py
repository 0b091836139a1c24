import math
from fractions import Fraction as F

import pytest
from hypothesis import given

from zwalk.contfrac import closed_form, convergents, determinant_identities, limits
from zwalk.errors import HypothesisViolated, PreconditionViolated
from zwalk.walk import WalkSpec

from conftest import constant_walks, force_walks


def test_first_convergents_exact():
    w = WalkSpec.constant(F(1, 4), F(1, 2), F(1, 4))
    cv = convergents(w, 4)
    assert cv[0].h == 1 and cv[0].h_prime == 0
    assert cv[1].h_prime == F(1, 4)
    assert cv[2].h_prime == F(1, 3)
    assert cv[1].h == F(3, 4)
    assert cv[2].h == F(2, 3)


def test_closed_forms():
    lim = limits(WalkSpec.constant(0.25, 0.5, 0.25))
    assert lim.H == pytest.approx(0.5) and lim.H_prime == pytest.approx(0.5)
    lim = limits(WalkSpec.constant(0.125, 0.75, 0.125))
    assert lim.H == pytest.approx((1 + math.sqrt(0.5)) / 2, abs=1e-15)
    assert lim.H_prime == pytest.approx(0.125 / lim.H, abs=1e-15)
    H, Hp = closed_form(WalkSpec.force(0.125, 0.375))
    assert H == pytest.approx(0.75, abs=1e-15) and Hp == pytest.approx(0.75, abs=1e-15)


def test_outside_convergence_region():
    with pytest.raises(PreconditionViolated):
        closed_form(WalkSpec.constant(0.5, 0.4, 0.1))


def test_hypothesis_violation_on_tables():
    # c_0 too large for 0 < A < B at the first step of H'
    w = WalkSpec.table((-3, 3), [0.05] * 7, [0.0] * 7, [0.95] * 7)
    with pytest.raises(HypothesisViolated):
        convergents(w, 6)


@given(constant_walks())
def test_monotone_and_sandwich(spec):
    H, Hp = closed_form(spec)
    prev = None
    for p in convergents(spec, 60):
        if prev is not None:
            assert p.h <= prev.h + 1e-15 and p.h_prime >= prev.h_prime - 1e-15
        assert p.h_prime <= Hp + 1e-12 and p.h >= H - 1e-12
        prev = p
    assert H * Hp == pytest.approx(float(spec.c), abs=1e-12)


@given(force_walks())
def test_force_limits_match_convergents(spec):
    H, Hp = closed_form(spec)
    last = convergents(spec, 4000)[-1]
    assert last.h == pytest.approx(H, abs=1e-6)
    assert last.h_prime == pytest.approx(Hp, abs=1e-6)


@pytest.mark.parametrize(
    "spec",
    [WalkSpec.constant(F(1, 8), F(3, 4), F(1, 8)), WalkSpec.force(F(1, 8), F(3, 8)), WalkSpec.force(F(1, 5), F(1, 10))],
)
def test_determinant_identities_exact(spec):
    for k, lhs, rhs, lhs_p, rhs_p in determinant_identities(spec, 6):
        assert isinstance(lhs, F) and lhs == rhs
        assert lhs_p == rhs_p


def test_table_brackets():
    w = WalkSpec.table((-5, 5), [0.125] * 11, [0.75] * 11, [0.125] * 11)
    lim = limits(w)
    H, Hp = closed_form(WalkSpec.constant(0.125, 0.75, 0.125))
    assert lim.bracketing
    assert lim.H > H and lim.H_prime < Hp
