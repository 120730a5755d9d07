"""Dense univariate polynomials over the rationals.

A polynomial is a tuple of :class:`~fractions.Fraction` coefficients, lowest
degree first, with no trailing zeros (the zero polynomial is ``()``).
"""
from __future__ import annotations

from fractions import Fraction
from math import floor
from typing import Sequence

UPoly = tuple


def trim(coeffs: Sequence) -> UPoly:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(p: UPoly) -> int:
    return len(p) - 1


def lc(p: UPoly) -> Fraction:
    return p[-1] if p else Fraction(0)


def evaluate(p: UPoly, t) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * t + c
    return acc


def add(p: UPoly, q: UPoly) -> UPoly:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def neg(p: UPoly) -> UPoly:
    return tuple(-c for c in p)


def sub(p: UPoly, q: UPoly) -> UPoly:
    return add(p, neg(q))


def mul(p: UPoly, q: UPoly) -> UPoly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def derivative(p: UPoly) -> UPoly:
    return trim([i * p[i] for i in range(1, len(p))])


def divmod_poly(p: UPoly, q: UPoly) -> tuple[UPoly, UPoly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    dq, lq = len(q) - 1, q[-1]
    while len(rem) - 1 >= dq and rem:
        shift = len(rem) - 1 - dq
        f = rem[-1] / lq
        quot[shift] = f
        for i, c in enumerate(q):
            rem[shift + i] -= f * c
        rem.pop()
        while rem and rem[-1] == 0:
            rem.pop()
    return trim(quot), trim(rem)


def monic(p: UPoly) -> UPoly:
    return tuple(c / p[-1] for c in p) if p else p


def gcd(p: UPoly, q: UPoly) -> UPoly:
    while q:
        p, q = q, divmod_poly(p, q)[1]
    return monic(p)


def squarefree_part(p: UPoly) -> UPoly:
    if degree(p) < 1:
        return p
    g = gcd(p, derivative(p))
    return monic(divmod_poly(p, g)[0])


def sturm_chain(p: UPoly) -> list[UPoly]:
    """Standard Sturm sequence ``p, p', -rem(p, p'), ...``."""
    if not p:
        raise ValueError("Sturm chain of the zero polynomial")
    chain = [p]
    q = derivative(p)
    while q:
        chain.append(q)
        q = neg(divmod_poly(chain[-2], chain[-1])[1])
    return chain


def _variations(signs) -> int:
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def variations_at(chain, t) -> int:
    return _variations(_sign(evaluate(p, t)) for p in chain)


def variations_at_infinity(chain, positive: bool = True) -> int:
    out = []
    for p in chain:
        s = _sign(lc(p))
        if not positive and degree(p) % 2:
            s = -s
        out.append(s)
    return _variations(out)


def count_roots_above(p: UPoly, t0) -> int:
    """Number of distinct real roots in ``(t0, inf)``; requires ``p(t0) != 0``."""
    chain = sturm_chain(p)
    return variations_at(chain, t0) - variations_at_infinity(chain)


def count_roots_between(p: UPoly, a, b) -> int:
    """Distinct real roots in ``(a, b]``."""
    chain = sturm_chain(p)
    return variations_at(chain, a) - variations_at(chain, b)


def cauchy_bound(p: UPoly) -> Fraction:
    """``1 + max |a_i / a_n|``: every complex root has modulus below this."""
    if degree(p) < 1:
        return Fraction(0)
    n = lc(p)
    return 1 + max(abs(c / n) for c in p[:-1])


def positive_on_ray(p: UPoly, t0) -> bool:
    """True iff ``p(t) > 0`` for every real ``t >= t0``."""
    if not p:
        raise ValueError("positivity of the zero polynomial is undefined")
    t0 = Fraction(t0)
    if evaluate(p, t0) <= 0:
        return False
    if degree(p) == 0:
        return True
    return count_roots_above(p, t0) == 0


def has_root_at_or_above(p: UPoly, t0) -> bool:
    t0 = Fraction(t0)
    if not p:
        return True
    if degree(p) == 0:
        return False
    if evaluate(p, t0) == 0:
        return True
    return count_roots_above(p, t0) > 0


def positivity_threshold(p: UPoly, t0: int, cap: int | None = None) -> int | None:
    """Smallest integer ``t >= t0`` with ``p > 0`` on ``[t, inf)``, or None.

    Positivity on a ray is monotone in its start, so the answer is found by
    bisection below the integer just past the Cauchy root bound.
    """
    if not p or lc(p) < 0:
        return None
    if positive_on_ray(p, t0):
        return t0
    hi = max(t0, floor(cauchy_bound(p)) + 1)
    if cap is not None and hi > t0 + cap:
        if not positive_on_ray(p, t0 + cap):
            return None
        hi = t0 + cap
    lo = t0  # invariant: fails at lo, holds at hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if positive_on_ray(p, mid):
            hi = mid
        else:
            lo = mid
    return hi


def interpolate(xs: Sequence, ys: Sequence) -> UPoly:
    """Newton interpolation through the points ``(xs[i], ys[i])``."""
    xs = [Fraction(x) for x in xs]
    coef = [Fraction(y) for y in ys]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    p: UPoly = ()
    for i in range(n - 1, -1, -1):
        p = add(mul(p, (-xs[i], Fraction(1))), (coef[i],))
    return p
