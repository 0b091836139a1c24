import math
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, settings, strategies as st

from zwalk.walk import WalkSpec

settings.register_profile("zwalk", max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("zwalk")

F = Fraction


@pytest.fixture
def constant8():
    return WalkSpec.constant(F(1, 8), F(3, 4), F(1, 8))


@pytest.fixture
def force8():
    return WalkSpec.force(F(1, 8), F(3, 8))


@st.composite
def constant_walks(draw, symmetric=False):
    """Constant walks inside the convergence region a <= (1 - sqrt(c))^2."""
    c = draw(st.floats(0.02, 0.3))
    if symmetric:
        a = c
    else:
        a = draw(st.floats(0.02, 0.95 * (1 - math.sqrt(c)) ** 2))
    return WalkSpec.constant(a, 1 - a - c, c)


@st.composite
def force_walks(draw):
    """Force walks with b != 1/2 inside the admissible range."""
    c = draw(st.floats(0.05, 0.45))
    top = (1 - math.sqrt(c)) ** 2 if c <= 0.25 else (1 - 2 * c) / 2
    a = draw(st.floats(0.02, 0.95 * top))
    if abs(a + c - 0.5) < 1e-3:
        a = 0.9 * a
    # the kernel pole at 2b - 1 sits (sqrt(c) - sqrt(a))^2 below the support;
    # closer than this the default quadrature no longer resolves it
    assume((math.sqrt(c) - math.sqrt(a)) ** 2 > 2e-3)
    return WalkSpec.force(a, c)


def interior_param(spec, u):
    """Point ``u`` of the way from H' to H."""
    from zwalk.contfrac import closed_form

    H, Hp = closed_form(spec)
    return float(Hp + u * (H - Hp))


ACCEPTANCE = []
"""(criterion, passed, detail, seconds) recorded by the acceptance tests."""


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k, ok, detail, secs in sorted(ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}  [{secs:.2f}s]")
