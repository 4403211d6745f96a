from fractions import Fraction

import pytest

from conepf import _rational as Q


@pytest.mark.parametrize("raw, want", [
    ("3/4", Fraction(3, 4)), (" -2 / 6 ", Fraction(-1, 3)), ("4/2", 2), (5, 5), (0.5, Fraction(1, 2)),
])
def test_to_exact(raw, want):
    got = Q.to_exact(raw)
    assert got == want
    assert not isinstance(got, float)


def test_fraction_with_unit_denominator_collapses_to_int():
    assert type(Q.normalize(Fraction(6, 3))) is int


def test_nullspace_and_rank():
    rows = [[1, 2, 3], [2, 4, 6]]
    assert Q.rank(rows) == 1
    ns = Q.nullspace(rows, 3)
    assert len(ns) == 2
    for v in ns:
        assert Q.matvec(Q.matrix(rows), v) == (0, 0)


def test_det_and_primitive():
    assert Q.det([[2, 1], [1, 2]]) == 3
    assert Q.primitive((Fraction(2, 3), Fraction(4, 3))) == (1, 2)


def test_same_ray():
    assert Q.same_ray((1, 2), (Fraction(1, 2), 1))
    assert not Q.same_ray((1, 2), (-1, -2))
