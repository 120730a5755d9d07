"""Brill-Noether numerology and exception tables for curves in projective space."""
from __future__ import annotations

from fractions import Fraction
from math import floor

from .exact import binom_eval

# Exception lists, keyed by context.  Triples are (d, g, r); pairs are (d, g).
EXCEPTIONS = {
    # normal bundle of a general nonspecial BN-curve fails interpolation
    "interpolation_nonspecial": ((5, 2, 3), (6, 2, 4), (7, 2, 5)),
    # general nonspecial BN-curve fails to pass through the expected number of points
    "points_nonspecial": ((5, 2, 3), (7, 2, 5)),
    # intersection with a quadric (space curves) is not a general set of points
    "quadric_intersection_p3": ((4, 1), (5, 2), (6, 2), (6, 4), (7, 5), (8, 6)),
    # intersection with a plane (space curves)
    "plane_intersection_p3": ((6, 4),),
    # intersection with a hyperplane (curves in P^4)
    "hyperplane_intersection_p4": ((8, 5), (9, 6), (10, 7)),
    # normal bundle of a general BN space curve fails interpolation
    "interpolation_space_curve": ((5, 2), (6, 4)),
    # normal bundle of a general BN-curve in P^4 fails interpolation
    "interpolation_p4": ((6, 2),),
    # twist N_C(-1) of a general BN-curve in P^4 fails interpolation
    "interpolation_p4_twist": ((6, 2), (8, 5), (9, 6), (10, 7)),
}


def rho(d, g, r) -> Fraction:
    """Brill-Noether number ``(r + 1) d - r g - r (r + 1)``; rational d, g allowed."""
    d, g, r = Fraction(d), Fraction(g), Fraction(r)
    return (r + 1) * d - r * g - r * (r + 1)


def rho_int(d: int, g: int, r: int) -> int:
    return int(rho(d, g, r))


def _check_r(r):
    if r == 1:
        raise ZeroDivisionError("point-count bound is undefined for r = 1")
    if r < 2:
        raise ValueError("r must be at least 2")


def max_points_bound(d: int, g: int, r: int) -> int:
    """``floor(((r + 1) d - (r - 3)(g - 1)) / (r - 1))``."""
    _check_r(r)
    return floor(Fraction((r + 1) * d - (r - 3) * (g - 1), r - 1))


def max_points_guaranteed(d: int, g: int, r: int) -> int:
    """Point count reached unconditionally: three below :func:`max_points_bound`."""
    return max_points_bound(d, g, r) - 3


def expected_vanishing_dim(d: int, g: int, r: int, k: int) -> int:
    """Expected dimension of degree-``k`` forms vanishing on a general BN-curve."""
    if r < 3 or k < 1:
        raise ValueError("need r >= 3 and k >= 1")
    forms = binom_eval(r, k)
    restricted = k * d + 1 - g
    if k >= 2 and restricted <= forms:
        return forms - restricted
    return 0


def contexts() -> list[str]:
    return sorted(EXCEPTIONS)


def exceptions(context: str) -> tuple:
    try:
        return EXCEPTIONS[context]
    except KeyError:
        raise KeyError(f"unknown context {context!r}; choose from {', '.join(contexts())}") from None


def is_exception(context: str, key) -> bool:
    return tuple(key) in exceptions(context)


def mrc_vertex_demo(r: int, k: int) -> tuple[Fraction, Fraction]:
    """Solve ``rho(d, g, r) = 0`` and ``k d + 1 - g = binom(r + k, k)`` exactly."""
    # (r+1) d - r g = r (r+1);  k d - g = B - 1
    a11, a12, b1 = Fraction(r + 1), Fraction(-r), Fraction(r * (r + 1))
    a21, a22, b2 = Fraction(k), Fraction(-1), Fraction(binom_eval(r, k) - 1)
    det = a11 * a22 - a12 * a21
    if det == 0:
        raise ValueError(f"singular system at r={r}, k={k}")
    d = (b1 * a22 - a12 * b2) / det
    g = (a11 * b2 - b1 * a21) / det
    return d, g
