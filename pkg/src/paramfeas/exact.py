"""Exact rational scalars and sparse multivariate polynomials.

Rationals are :class:`fractions.Fraction` (always reduced, positive
denominator).  Polynomials are immutable maps from monomials to nonzero
coefficients, where a monomial is a sorted tuple of ``(symbol, exponent)``
pairs.  The symbol ``B`` is reserved and stands for ``binom(r + k, k)``.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb, factorial, gcd, lcm
from typing import Iterable, Mapping, Union

Rat = Fraction
Monomial = tuple  # tuple[tuple[str, int], ...]

BINOM = "B"
_FIXED_ORDER = {"r": 0, "k": 1, BINOM: 2}


class PolyError(ValueError):
    """Raised for invalid polynomial operations (bad symbols, domain errors)."""


def symbol_key(name: str):
    return (_FIXED_ORDER.get(name, 3), name)


def as_rat(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def binom_eval(r: int, k: int) -> int:
    """Return ``binom(r + k, k)`` for nonnegative integers."""
    if r < 0 or k < 0:
        raise PolyError(f"binom_eval needs r, k >= 0 (got r={r}, k={k})")
    return comb(r + k, k)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for s, e in b:
        exps[s] = exps.get(s, 0) + e
    return tuple(sorted(exps.items(), key=lambda se: symbol_key(se[0])))


Scalar = Union[int, Fraction]


class MultiPoly:
    """Immutable polynomial with exact rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = as_rat(c)
                if c:
                    mono = tuple(sorted(((s, e) for s, e in mono if e),
                                        key=lambda se: symbol_key(se[0])))
                    clean[mono] = clean.get(mono, 0) + c
                    if not clean[mono]:
                        del clean[mono]
        self._terms = clean
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c: Scalar) -> "MultiPoly":
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> "MultiPoly":
        return cls({((name, 1),): 1})

    @classmethod
    def lift(cls, value) -> "MultiPoly":
        if isinstance(value, MultiPoly):
            return value
        return cls.const(as_rat(value))

    # basic protocol -----------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        return format_poly(self)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = MultiPoly.lift(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return MultiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-MultiPoly.lift(other))

    def __rsub__(self, other):
        return MultiPoly.lift(other) - self

    def __mul__(self, other):
        other = MultiPoly.lift(other)
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return MultiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise PolyError("only nonnegative integer powers are supported")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: Scalar) -> "MultiPoly":
        c = as_rat(c)
        return MultiPoly({m: c * v for m, v in self._terms.items()})

    # queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise PolyError(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def symbols(self) -> frozenset:
        return frozenset(s for m in self._terms for s, _ in m)

    def degree(self, sym: str) -> int:
        return max((dict(m).get(sym, 0) for m in self._terms), default=0)

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._terms), default=0)

    def coefficient(self, sym: str, power: int = 1) -> "MultiPoly":
        """Coefficient of ``sym**power`` viewing the poly as univariate in ``sym``."""
        out = {}
        for m, c in self._terms.items():
            d = dict(m)
            if d.get(sym, 0) == power:
                d.pop(sym, None)
                out[tuple(d.items())] = c
        return MultiPoly(out)

    def has_integer_coefficients(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def primitive(self) -> "MultiPoly":
        """Divide by the positive rational content (integer, primitive result)."""
        if not self._terms:
            return self
        den = lcm(*(c.denominator for c in self._terms.values()))
        num = 0
        for c in self._terms.values():
            num = gcd(num, abs(c.numerator * (den // c.denominator)))
        return self.scale(Fraction(den, num))

    # transformations ----------------------------------------------------
    def subs(self, mapping: Mapping[str, object]) -> "MultiPoly":
        """Substitute symbols by polynomials or scalars (partial allowed)."""
        values = {s: MultiPoly.lift(v) for s, v in mapping.items()}
        out = MultiPoly()
        cache: dict = {}
        for m, c in self._terms.items():
            term = MultiPoly.const(c)
            rest = []
            for s, e in m:
                if s in values:
                    key = (s, e)
                    if key not in cache:
                        cache[key] = values[s] ** e
                    term = term * cache[key]
                else:
                    rest.append((s, e))
            if rest:
                term = term * MultiPoly({tuple(rest): 1})
            out = out + term
        return out

    def derivative(self, sym: str) -> "MultiPoly":
        return poly_derivative(self, sym)


def poly_derivative(p: MultiPoly, var: str) -> MultiPoly:
    """Formal partial derivative with respect to a plain symbol."""
    if var == BINOM:
        raise PolyError("differentiation with respect to B is not supported")
    out = {}
    for m, c in p.items():
        d = dict(m)
        e = d.get(var, 0)
        if e:
            d[var] = e - 1
            mono = tuple((s, x) for s, x in d.items() if x)
            out[mono] = out.get(mono, 0) + c * e
    return MultiPoly(out)


def binom_poly(k_value: int) -> MultiPoly:
    """``binom(r + k_value, k_value)`` as a polynomial in ``r``."""
    if k_value < 0:
        raise PolyError("k must be nonnegative to expand B")
    r = MultiPoly.var("r")
    p = MultiPoly.const(1)
    for i in range(1, k_value + 1):
        p = p * (r + i)
    return p.scale(Fraction(1, factorial(k_value)))


def expand_binom(p: MultiPoly, k_value: int) -> MultiPoly:
    """Specialise ``k`` to ``k_value`` and replace ``B`` by its polynomial in ``r``."""
    if k_value < 0:
        raise PolyError("k must be nonnegative to expand B")
    return p.subs({BINOM: binom_poly(k_value), "k": k_value})


def poly_eval(p: MultiPoly, assignment: Mapping[str, object]) -> Fraction:
    """Evaluate exactly; ``B`` is always forced to ``binom(r + k, k)``."""
    values = {s: as_rat(v) for s, v in assignment.items()}
    if BINOM in p.symbols() or BINOM in values:
        r, k = values.get("r"), values.get("k")
        if r is None or k is None or r.denominator != 1 or k.denominator != 1 or r < 0 or k < 0:
            raise PolyError("B is only defined for nonnegative integer r and k")
        forced = Fraction(binom_eval(int(r), int(k)))
        if BINOM in values and values[BINOM] != forced:
            raise PolyError(f"B is binom(r+k,k) = {forced}; cannot assign {values[BINOM]}")
        values[BINOM] = forced
    syms = p.symbols()
    missing = sorted(syms - values.keys(), key=symbol_key)
    if missing:
        raise PolyError(f"missing value for symbol(s): {', '.join(missing)}")
    total = Fraction(0)
    for m, c in p.items():
        term = c
        for s, e in m:
            term *= values[s] ** e
        total += term
    return total


def format_poly(p: MultiPoly) -> str:
    """Canonical text form, parseable by the problem-file grammar."""
    if p.is_zero():
        return "0"

    def order(item):
        m, _ = item
        return (-sum(e for _, e in m), [(symbol_key(s), -e) for s, e in m])

    parts = []
    for m, c in sorted(p.items(), key=order):
        mono = "*".join(s if e == 1 else f"{s}^{e}" for s, e in m)
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{_fmt_rat(mag)}*{mono}"
        else:
            body = _fmt_rat(mag)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


def _fmt_rat(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def linear_form(coeffs: Iterable[Scalar], names: Iterable[str], const: Scalar = 0) -> MultiPoly:
    """Build ``sum(c_i * x_i) + const``."""
    out = MultiPoly.const(const)
    for c, n in zip(coeffs, names):
        out = out + MultiPoly.var(n).scale(c)
    return out
