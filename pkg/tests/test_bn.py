from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from paramfeas import bn
from paramfeas.exact import binom_eval


def test_rho():
    assert bn.rho(5, 2, 3) == 2
    assert bn.rho(4, 1, 3) == 1
    for r in range(1, 8):
        assert bn.rho(r, 0, r) == 0  # rational normal curve


def test_point_bounds():
    assert bn.max_points_bound(5, 2, 3) == 10
    assert bn.max_points_bound(6, 2, 4) == 9
    assert bn.max_points_guaranteed(5, 2, 3) == 7
    assert bn.max_points_guaranteed(6, 2, 4) == 6
    for d in range(1, 30):
        # at r = 3 the genus term drops out: 4d / 2
        assert bn.max_points_bound(d, 0, 3) == 2 * d
    with pytest.raises(ZeroDivisionError):
        bn.max_points_bound(3, 0, 1)


def test_vanishing_dimension():
    assert bn.expected_vanishing_dim(1496, 0, 17, 4) == 0
    assert bn.expected_vanishing_dim(1495, 0, 17, 4) == 4
    assert bn.expected_vanishing_dim(10, 0, 3, 1) == 0
    assert bn.expected_vanishing_dim(100, 0, 3, 2) == 0


def test_exception_tables():
    assert bn.exceptions("interpolation_nonspecial") == ((5, 2, 3), (6, 2, 4), (7, 2, 5))
    assert bn.exceptions("points_nonspecial") == ((5, 2, 3), (7, 2, 5))
    assert bn.exceptions("quadric_intersection_p3") == ((4, 1), (5, 2), (6, 2), (6, 4), (7, 5), (8, 6))
    assert bn.exceptions("plane_intersection_p3") == ((6, 4),)
    assert bn.exceptions("hyperplane_intersection_p4") == ((8, 5), (9, 6), (10, 7))
    assert bn.exceptions("interpolation_space_curve") == ((5, 2), (6, 4))
    assert bn.exceptions("interpolation_p4") == ((6, 2),)
    assert bn.exceptions("interpolation_p4_twist") == ((6, 2), (8, 5), (9, 6), (10, 7))
    assert bn.is_exception("interpolation_nonspecial", (6, 2, 4))
    assert not bn.is_exception("points_nonspecial", (6, 2, 4))
    with pytest.raises(KeyError):
        bn.exceptions("cubic_surfaces")


def test_mrc_vertex_demo():
    d, g = bn.mrc_vertex_demo(17, 4)
    assert (d, g) == (Fraction(50711, 25), Fraction(53244, 25))
    assert bn.rho(d, g, 17) == 0
    assert 4 * d + 1 - g == binom_eval(17, 4)


@given(st.integers(0, 60), st.integers(0, 40), st.integers(2, 8))
def test_guaranteed_is_three_below_bound(d, g, r):
    assert bn.max_points_bound(d, g, r) - bn.max_points_guaranteed(d, g, r) == 3


@given(st.integers(0, 60), st.integers(0, 40), st.integers(1, 8))
def test_rho_is_affine_in_degree(d, g, r):
    assert bn.rho(d + 1, g, r) - bn.rho(d, g, r) == r + 1
    assert bn.rho(d, g + 1, r) - bn.rho(d, g, r) == -r


@given(st.integers(0, 200), st.integers(0, 60), st.integers(3, 6), st.integers(1, 4))
def test_vanishing_dimension_is_nonnegative(d, g, r, k):
    v = bn.expected_vanishing_dim(d, g, r, k)
    assert v >= 0
    if v:
        assert v == binom_eval(r, k) - (k * d + 1 - g)
