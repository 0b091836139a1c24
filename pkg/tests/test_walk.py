from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given

from zwalk.errors import IndexOutOfWindow, InvalidWalk
from zwalk.walk import WalkSpec, truncate
from zwalk.window import Seq

from conftest import constant_walks, force_walks


def test_force_swaps_below_origin(force8):
    assert force8.coeff(0) == (F(1, 8), F(1, 2), F(3, 8))
    assert force8.coeff(-1) == (F(3, 8), F(1, 2), F(1, 8))
    assert force8.is_exact


@pytest.mark.parametrize("abc", [(0.5, 0.6, 0.1), (-0.1, 0.9, 0.2), (0.0, 0.8, 0.2)])
def test_invalid_triples(abc):
    with pytest.raises(InvalidWalk):
        WalkSpec.constant(*abc)


def test_table_window_and_lookup():
    w = WalkSpec.table((-1, 1), [0.2, 0.3, 0.4], [0.5, 0.4, 0.3], [0.3, 0.3, 0.3])
    assert w.window == (-1, 1)
    assert w.coeff(1) == (0.4, 0.3, 0.3)
    with pytest.raises(IndexOutOfWindow):
        w.coeff(2)


def test_json_roundtrip_and_fractions():
    w = WalkSpec.from_json({"kind": "constant", "a": "1/8", "b": "3/4", "c": "1/8"})
    assert w.a == F(1, 8) and w.is_exact
    back = WalkSpec.from_json(w.to_json())
    assert float(back.a) == 0.125 and back.digest() == w.digest()
    with pytest.raises(InvalidWalk):
        WalkSpec.from_json({"kind": "force", "a": "x", "c": "1/8"})
    with pytest.raises(InvalidWalk):
        WalkSpec.from_json({"kind": "constant", "a": 0.1})


@given(constant_walks())
def test_truncation_rows_sum_to_one_inside(spec):
    T = truncate(spec, 6)
    assert np.allclose(T.row_sums()[1:-1], 1.0, atol=1e-15)
    assert T.defect[0] > 0 and T.defect[-1] > 0


@given(force_walks())
def test_truncation_entries(spec):
    T = truncate(spec, 3)
    assert T.entry(0, 1) == pytest.approx(float(spec.a))
    assert T.entry(-1, -2) == pytest.approx(float(spec.a))
    assert T.entry(-1, 0) == pytest.approx(float(spec.c))


def test_seq_restrict():
    s = Seq.from_dict({-1: 1, 0: 2, 1: 3})
    assert s.window == (-1, 1) and list(s.restrict(0, 1).values) == [2, 3]
    with pytest.raises(IndexOutOfWindow):
        s[5]
