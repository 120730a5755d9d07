"""Fourier-Motzkin elimination with polynomial coefficients.

Systems are lists of polynomials ``p`` read as ``p >= 0``; each is affine in
the decision variables, with coefficients polynomial in the parameters
``r``, ``k`` and ``B``.  Eliminating ``n`` pairs every upper bound
``n <= a/b`` with every lower bound ``n >= c/d``:

* real mode keeps ``a*d - b*c >= 0`` (exact projection);
* integer mode keeps ``a*d - b*c - (b - 1)*(d - 1) >= 0``, which guarantees
  an integer ``n`` in the bound interval when ``a, b, c, d`` are integers
  and ``b, d >= 1`` (sufficient only).

Denominators ``b`` and ``d`` must have a known sign on the parameter
domain, supplied by a sign oracle.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exact import BINOM, MultiPoly, binom_eval, format_poly, poly_eval
from .positivity import BivarPoly, certify_positive

REAL = "real"
INTEGER = "integer"
MODES = (REAL, INTEGER)


class Inconclusive(Exception):
    """The sign of a coefficient polynomial could not be certified."""

    def __init__(self, poly: MultiPoly, message: str | None = None):
        self.poly = poly
        super().__init__(message or f"cannot certify the sign of {format_poly(poly)}")


@dataclass(frozen=True)
class SignWitness:
    polynomial: MultiPoly
    sign: int  # +1 or -1
    method: str  # constant | positivity-certificate | fixed-parameter-evaluation


@dataclass
class VarBounds:
    var: str
    uppers: list = field(default_factory=list)  # (a, b): var <= a / b
    lowers: list = field(default_factory=list)  # (c, d): var >= c / d
    free: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)


SignOracle = Callable[[MultiPoly], SignWitness]


def constant_signs(poly: MultiPoly) -> SignWitness:
    """Sign oracle that only knows nonzero constants."""
    if poly.is_constant() and poly.constant_value() != 0:
        return SignWitness(poly, 1 if poly.constant_value() > 0 else -1, "constant")
    raise Inconclusive(poly)


class DomainSigns:
    """Certify signs on ``r >= r0, k >= k0`` (cheapest method first).

    Constants are read off directly; otherwise a positivity certificate is
    attempted for ``p`` and ``-p``.  ``B`` is bounded below by 1: if every
    coefficient of a positive power of ``B`` is certified positive, ``p`` is
    at least the sum of its ``B``-coefficients.  With ``fixed`` set, the
    polynomial is evaluated at that parameter point instead.
    """

    def __init__(self, r0: int = 0, k0: int = 0, fixed: dict | None = None):
        self.r0, self.k0 = r0, k0
        self.fixed = fixed
        self._cache: dict = {}

    def __call__(self, poly: MultiPoly) -> SignWitness:
        if poly.is_constant():
            return constant_signs(poly)
        if self.fixed is not None:
            v = poly_eval(poly, self.fixed)
            if v == 0:
                raise Inconclusive(poly, f"{format_poly(poly)} vanishes at {self.fixed}")
            return SignWitness(poly, 1 if v > 0 else -1, "fixed-parameter-evaluation")
        if poly not in self._cache:
            self._cache[poly] = self._certify(poly)
        sign = self._cache[poly]
        if sign is None:
            raise Inconclusive(poly)
        return SignWitness(poly, sign, "positivity-certificate")

    def _certify(self, poly):
        for sign in (1, -1):
            if self.positive(poly.scale(sign)):
                return sign
        return None

    def positive(self, poly: MultiPoly) -> bool:
        if BINOM not in poly.symbols():
            return certify_positive(BivarPoly.from_multipoly(poly), self.r0, self.k0).certified
        lower = poly.coefficient(BINOM, 0)
        for e in range(1, poly.degree(BINOM) + 1):
            c = poly.coefficient(BINOM, e)
            if c.is_zero():
                continue
            if BINOM in c.symbols() or not self.positive(c):
                return False
            lower = lower + c
        return not lower.is_zero() and self.positive(lower)


def classify_bounds(system: Iterable[MultiPoly], var: str,
                    signs: SignOracle = constant_signs) -> VarBounds:
    """Route each ``coeff*var + rest >= 0`` to an upper bound, lower bound, or free row."""
    out = VarBounds(var)
    for p in system:
        coeff = p.coefficient(var, 1)
        if p.degree(var) > 1:
            raise ValueError(f"{format_poly(p)} is not affine in {var}")
        if coeff.is_zero():
            out.free.append(p)
            continue
        rest = p - coeff * MultiPoly.var(var)
        w = signs(coeff)
        out.witnesses.append(w)
        if w.sign > 0:
            out.lowers.append((-rest, coeff))
        else:
            out.uppers.append((rest, -coeff))
    return out


def real_gap(a, b, c, d):
    """``a*d - b*c``: nonnegative iff ``[c/d, a/b]`` is nonempty (``b, d > 0``)."""
    return a * d - b * c


def rounding_gap(a, b, c, d):
    """``a*d - b*c - (b - 1)*(d - 1)``: nonnegative guarantees an integer in ``[c/d, a/b]``.

    Works on integers and on polynomials alike.
    """
    return a * d - b * c - (b - 1) * (d - 1)


def _pairs(bounds: VarBounds, gap) -> list[MultiPoly]:
    out = list(bounds.free)
    for a, b in bounds.uppers:
        for c, d in bounds.lowers:
            out.append(gap(a, b, c, d))
    return out


def eliminate_real(bounds: VarBounds) -> list[MultiPoly]:
    return _pairs(bounds, real_gap)


def eliminate_integer(bounds: VarBounds) -> list[MultiPoly]:
    return _pairs(bounds, rounding_gap)


def _tidy(rows: Sequence[MultiPoly]) -> list[MultiPoly]:
    seen, out = set(), []
    for p in rows:
        if p.is_constant() and p.constant_value() >= 0:
            continue
        if p.has_integer_coefficients() or p.is_constant():
            q = p.primitive()
        else:
            q = p
        if q not in seen:
            seen.add(q)
            out.append(q)
    return out


def eliminate_all(system: Sequence[MultiPoly], order: Sequence[str], mode: str = INTEGER,
                  signs: SignOracle = constant_signs, trace: list | None = None) -> list[MultiPoly]:
    """Eliminate ``order`` one variable at a time.

    Rows are divided by their positive integer content and deduplicated
    between steps; trivially true constant rows are dropped.  With an empty
    ``order`` the system is returned unchanged.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    rows = list(system)
    if not order:
        return rows
    step = eliminate_integer if mode == INTEGER else eliminate_real
    for var in order:
        bounds = classify_bounds(rows, var, signs)
        if trace is not None:
            trace.append(bounds)
        rows = _tidy(step(bounds))
    return rows


def is_satisfied_constant(rows: Iterable[MultiPoly]) -> bool:
    """All rows constant and nonnegative (raises if a row is not constant)."""
    return all(p.constant_value() >= 0 for p in rows)


def instantiate_rows(rows: Iterable[MultiPoly], values: dict) -> list[MultiPoly]:
    """Substitute parameter values (``B`` forced to the binomial) into rows."""
    values = {s: Fraction(v) for s, v in values.items()}
    mapping = dict(values)
    if "r" in values and "k" in values:
        mapping[BINOM] = binom_eval(int(values["r"]), int(values["k"]))
    return [p.subs(mapping) for p in rows]
