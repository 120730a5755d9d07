"""Positivity of bivariate polynomials ``P(r, k)`` on a quadrant.

``certify_positive`` proves ``P(r, k) > 0`` for all real ``r >= r0`` and
``k >= k0`` from five checkable conditions:

(a) every monomial on the outer (north-east) boundary of the Newton polygon
    has a positive coefficient;
(b) the leading coefficient in ``r`` is positive for ``k >= k0``;
(c) the leading coefficient in ``k`` is positive for ``r >= r0``;
(d) the boundary slice ``P(r0, k)`` is positive for ``k >= k0``;
(e) ``k0`` exceeds every branch point of the projection of ``P = 0`` onto
    the ``k`` axis (real roots of the discriminant in ``r`` and of the
    leading coefficient in ``r``).

The conditions are sufficient, not necessary; failure is ``Inconclusive``.
Univariate and constant inputs bypass the five conditions and are decided
exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from typing import Union

from . import univariate as U
from .exact import MultiPoly, PolyError, format_poly

OUTER_RULE = ("outer monomials: exponent points maximising some linear functional "
              "with strictly positive weights on both exponents")


class BivarPoly:
    """``sum c[i, j] * r**i * k**j`` with exact coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {(int(i), int(j)): Fraction(c)
                       for (i, j), c in (coeffs or {}).items() if c}

    @classmethod
    def from_multipoly(cls, p: MultiPoly, r: str = "r", k: str = "k") -> "BivarPoly":
        extra = p.symbols() - {r, k}
        if extra:
            raise PolyError(f"not a polynomial in {r}, {k} only: extra symbols {sorted(extra)}")
        out = {}
        for mono, c in p.items():
            d = dict(mono)
            out[(d.get(r, 0), d.get(k, 0))] = c
        return cls(out)

    @classmethod
    def coerce(cls, p) -> "BivarPoly":
        if isinstance(p, BivarPoly):
            return p
        if isinstance(p, MultiPoly):
            return cls.from_multipoly(p)
        return cls({(0, 0): Fraction(p)})

    def to_multipoly(self) -> MultiPoly:
        return MultiPoly({(("r", i), ("k", j)): c for (i, j), c in self.coeffs.items()})

    def __str__(self):
        return format_poly(self.to_multipoly())

    def __repr__(self):
        return f"BivarPoly({self})"

    def __eq__(self, other):
        return isinstance(other, BivarPoly) and self.coeffs == other.coeffs

    def scale(self, c) -> "BivarPoly":
        return BivarPoly({m: v * c for m, v in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def deg_r(self) -> int:
        return max((i for i, _ in self.coeffs), default=0)

    @property
    def deg_k(self) -> int:
        return max((j for _, j in self.coeffs), default=0)

    def __call__(self, r, k) -> Fraction:
        return sum((c * Fraction(r) ** i * Fraction(k) ** j
                    for (i, j), c in self.coeffs.items()), Fraction(0))

    def coeff_in_r(self, i: int) -> U.UPoly:
        """Coefficient of ``r**i`` as a polynomial in ``k``."""
        out = [Fraction(0)] * (self.deg_k + 1)
        for (a, b), c in self.coeffs.items():
            if a == i:
                out[b] = c
        return U.trim(out)

    def coeff_in_k(self, j: int) -> U.UPoly:
        out = [Fraction(0)] * (self.deg_r + 1)
        for (a, b), c in self.coeffs.items():
            if b == j:
                out[a] = c
        return U.trim(out)

    def at_r(self, r) -> U.UPoly:
        """``P(r, .)`` as a polynomial in ``k``."""
        out = [Fraction(0)] * (self.deg_k + 1)
        for (i, j), c in self.coeffs.items():
            out[j] += c * Fraction(r) ** i
        return U.trim(out)

    def at_k(self, k) -> U.UPoly:
        """``P(., k)`` as a polynomial in ``r``."""
        out = [Fraction(0)] * (self.deg_r + 1)
        for (i, j), c in self.coeffs.items():
            out[i] += c * Fraction(k) ** j
        return U.trim(out)


Polyish = Union[BivarPoly, MultiPoly]


def univ_positive_on_ray(q, t0) -> bool:
    """Exact test of ``q(t) > 0`` for all ``t >= t0`` (Sturm root count)."""
    q = U.trim(q)
    return bool(q) and U.positive_on_ray(q, t0)


def leading_coeff(p: Polyish, var: str) -> U.UPoly:
    p = BivarPoly.coerce(p)
    if p.is_zero():
        raise ValueError("leading coefficient of the zero polynomial")
    if var == "r":
        return p.coeff_in_r(p.deg_r)
    if var == "k":
        return p.coeff_in_k(p.deg_k)
    raise ValueError(f"variable must be 'r' or 'k', not {var!r}")


# -- Newton polygon ------------------------------------------------------------

@dataclass
class NewtonPolygonReport:
    points: list
    hull: list
    outer: list
    signs: dict
    rule: str = OUTER_RULE

    @property
    def passed(self) -> bool:
        return all(self.signs[m] > 0 for m in self.outer)

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "hull": [list(p) for p in self.hull],
            "outer": [{"monomial": list(m), "sign": self.signs[m]} for m in self.outer],
            "passed": self.passed,
        }


def _hull(points):
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _is_outer(p, points) -> bool:
    # weights (1 - s, s) with 0 < s < 1; p must beat every q, linear in s
    lo, hi = Fraction(0), Fraction(1)
    for q in points:
        di, dj = q[0] - p[0], q[1] - p[1]
        # (1 - s) * di + s * dj <= 0
        slope = dj - di
        if slope == 0:
            if di > 0:
                return False
        elif slope > 0:
            hi = min(hi, Fraction(-di, slope))
        else:
            lo = max(lo, Fraction(-di, slope))
    return lo <= hi and lo < 1 and hi > 0


def newton_outer(p: Polyish) -> NewtonPolygonReport:
    p = BivarPoly.coerce(p)
    if p.is_zero():
        raise ValueError("Newton polygon of the zero polynomial")
    points = sorted(p.coeffs)
    outer = [m for m in points if _is_outer(m, points)]
    signs = {m: (1 if p.coeffs[m] > 0 else -1) for m in points}
    return NewtonPolygonReport(points, _hull(points), outer, signs)


# -- discriminant and branch points ------------------------------------------

def _det(matrix) -> Fraction:
    m = [list(row) for row in matrix]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                for j in range(c, n):
                    m[i][j] -= f * m[c][j]
    return det


def sylvester(f, g) -> list:
    """Sylvester matrix of coefficient lists given highest degree first."""
    n, m = len(f) - 1, len(g) - 1
    size = n + m
    rows = []
    for i in range(m):
        rows.append([Fraction(0)] * i + list(f) + [Fraction(0)] * (size - n - 1 - i))
    for i in range(n):
        rows.append([Fraction(0)] * i + list(g) + [Fraction(0)] * (size - m - 1 - i))
    return rows


def discriminant_wrt(p: Polyish, var: str = "r") -> U.UPoly:
    """Discriminant of ``p`` as a polynomial in ``var``; result lives in the other variable.

    ``(-1)**(n(n-1)/2) * Res_var(p, dp/dvar) / lc_var(p)``, computed by exact
    evaluation of the Sylvester determinant and interpolation.
    """
    p = BivarPoly.coerce(p)
    if var == "k":
        p = BivarPoly({(j, i): c for (i, j), c in p.coeffs.items()})
    elif var != "r":
        raise ValueError(f"variable must be 'r' or 'k', not {var!r}")
    n = p.deg_r
    if p.is_zero() or n < 1:
        raise ValueError("discriminant needs degree >= 1 in the chosen variable")
    columns = [p.coeff_in_r(i) for i in range(n + 1)]
    npts = (2 * n - 1) * p.deg_k + 1
    xs = list(range(npts))
    ys = []
    for x in xs:
        f = [U.evaluate(columns[i], x) for i in range(n, -1, -1)]
        g = [i * U.evaluate(columns[i], x) for i in range(n, 0, -1)]
        ys.append(_det(sylvester(f, g)))
    res = U.interpolate(xs, ys)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    quot, rem = U.divmod_poly(res, columns[n])
    if rem:
        raise ArithmeticError("resultant not divisible by the leading coefficient")
    return tuple(sign * c for c in quot)


class InconclusiveError(Exception):
    """A check could not be decided by the method at hand."""


def branch_polynomials(p: Polyish) -> list:
    """Square-free univariate polynomials in ``k`` whose real roots are the branch points."""
    p = BivarPoly.coerce(p)
    disc = discriminant_wrt(p, "r")
    if not disc:
        raise InconclusiveError(
            "discriminant in r vanishes identically (repeated factor in r); "
            "divide out the repeated factor first")
    out = []
    for q in (disc, leading_coeff(p, "r")):
        if U.degree(q) >= 1:
            out.append(U.squarefree_part(q))
    return out


def branch_point_bound(p: Polyish) -> Fraction:
    """Rational upper bound on all branch points (0 when there are none)."""
    polys = branch_polynomials(p)
    return max((U.cauchy_bound(q) for q in polys), default=Fraction(0))


# -- certificates ------------------------------------------------------------

@dataclass
class Condition:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, **self.detail}


@dataclass
class PositivityCertificate:
    poly: str
    r0: int
    k0: int
    method: str
    conditions: list

    certified = True

    def to_dict(self) -> dict:
        return {"poly": self.poly, "r0": self.r0, "k0": self.k0, "method": self.method,
                "conditions": [c.to_dict() for c in self.conditions]}


@dataclass
class Inconclusive:
    poly: str
    r0: int
    k0: int
    failed: str
    reason: str
    conditions: list = field(default_factory=list)

    certified = False

    def to_dict(self) -> dict:
        return {"poly": self.poly, "r0": self.r0, "k0": self.k0, "failed": self.failed,
                "reason": self.reason, "conditions": [c.to_dict() for c in self.conditions]}


def _fmt_u(q, var):
    return format_poly(MultiPoly({((var, i),): c for i, c in enumerate(q)}))


def certify_positive(p: Polyish, r0: int, k0: int, exact_branch: bool = False):
    """Return a :class:`PositivityCertificate` or an :class:`Inconclusive`.

    With ``exact_branch`` condition (e) checks for roots of the branch
    polynomials in ``[k0, inf)`` by Sturm counting instead of comparing
    ``k0`` against a Cauchy bound.
    """
    p = BivarPoly.coerce(p)
    text = str(p)
    r0, k0 = int(r0), int(k0)

    def result(method, conds):
        bad = next((c for c in conds if not c.passed), None)
        if bad is None:
            return PositivityCertificate(text, r0, k0, method, conds)
        return Inconclusive(text, r0, k0, bad.name, bad.detail.get("reason", ""), conds)

    if p.is_zero() or (p.deg_r == 0 and p.deg_k == 0):
        c = p.coeffs.get((0, 0), Fraction(0))
        return result("constant", [Condition("constant", c > 0, {
            "value": str(c), **({} if c > 0 else {"reason": f"constant {c} is not positive"})})])
    if p.deg_k == 0:
        q = p.at_k(0)
        ok = U.positive_on_ray(q, r0)
        return result("univariate-r", [Condition("univariate", ok, {
            "slice": _fmt_u(q, "r"), **({} if ok else {"reason": f"{_fmt_u(q, 'r')} not positive for r >= {r0}"})})])
    if p.deg_r == 0:
        q = p.at_r(0)
        ok = U.positive_on_ray(q, k0)
        return result("univariate-k", [Condition("univariate", ok, {
            "slice": _fmt_u(q, "k"), **({} if ok else {"reason": f"{_fmt_u(q, 'k')} not positive for k >= {k0}"})})])

    conds = []
    newton = newton_outer(p)
    conds.append(Condition("a", newton.passed, {
        "newton": newton.to_dict(),
        **({} if newton.passed else {"reason": "an outer monomial has a negative coefficient"})}))

    lcr = leading_coeff(p, "r")
    ok = U.positive_on_ray(lcr, k0)
    conds.append(Condition("b", ok, {"leading_coeff_r": _fmt_u(lcr, "k"), **(
        {} if ok else {"reason": f"leading coefficient in r, {_fmt_u(lcr, 'k')}, not positive for k >= {k0}"})}))

    lck = leading_coeff(p, "k")
    ok = U.positive_on_ray(lck, r0)
    conds.append(Condition("c", ok, {"leading_coeff_k": _fmt_u(lck, "r"), **(
        {} if ok else {"reason": f"leading coefficient in k, {_fmt_u(lck, 'r')}, not positive for r >= {r0}"})}))

    sl = p.at_r(r0)
    ok = bool(sl) and U.positive_on_ray(sl, k0)
    conds.append(Condition("d", ok, {"boundary_slice": _fmt_u(sl, "k"), **(
        {} if ok else {"reason": f"P({r0}, k) = {_fmt_u(sl, 'k')} not positive for k >= {k0}"})}))

    try:
        polys = branch_polynomials(p)
    except InconclusiveError as exc:
        conds.append(Condition("e", False, {"reason": str(exc)}))
    else:
        detail = {"branch_polys": [_fmt_u(q, "k") for q in polys]}
        if exact_branch:
            ok = not any(U.has_root_at_or_above(q, k0) for q in polys)
            detail["mode"] = "sturm"
        else:
            beta = max((U.cauchy_bound(q) for q in polys), default=Fraction(0))
            ok = not polys or k0 > beta
            detail.update(mode="cauchy", bound=str(beta))
        if not ok:
            detail["reason"] = f"k0 = {k0} does not exceed all branch points"
        conds.append(Condition("e", ok, detail))
    return result("five-conditions", conds)


def find_negative_sample(p: Polyish, r0: int, k0: int, budget: int = 10_000):
    """Search integer points of the quadrant for ``p(r, k) <= 0``.

    Points are visited in square shells ``max(r - r0, k - k0) = s``; the first
    shell containing a non-positive value returns its minimiser as
    ``(r, k, value)``.  Returns None when the budget runs out.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    p = BivarPoly.coerce(p)
    used = 0
    for s in count():
        best = None
        shell = [(r0 + s, k0 + j) for j in range(s + 1)] + [(r0 + i, k0 + s) for i in range(s)]
        for r, k in shell:
            v = p(r, k)
            used += 1
            if v <= 0 and (best is None or v < best[2]):
                best = (r, k, v)
            if used >= budget:
                return best
        if best is not None:
            return best
