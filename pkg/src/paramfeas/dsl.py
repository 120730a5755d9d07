"""Problem-file language: parsing, validation and canonical printing.

A problem file declares integer parameters with lower bounds, universally
quantified integer decision variables constrained by a base system, and an
optional goal: a disjunction of ``exists`` blocks, each introducing new
integer variables and a system over all names in scope::

    param r >= 3;
    var d, g;
    system { (r+1)*d - r*g - r*(r+1) >= 0; }
    goal exists (n) { n >= 1; n <= d; } or exists (m) { m = g; }

Expressions use integer literals, ``+ - * ^``, division by an integer
literal, parentheses, declared names, and the reserved symbol ``B``
(alias ``binom(r+k,k)``).  ``#`` starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import BINOM, MultiPoly, format_poly

KEYWORDS = {"param", "var", "system", "goal", "exists", "or", "binom"}
PARAM_NAMES = ("r", "k")
SENSES = (">=", "<=", "=")


class DSLError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + message)


class ParseError(DSLError):
    pass


class DeclarationError(DSLError):
    pass


class UnknownSymbolError(DSLError):
    pass


class NonlinearityError(DSLError):
    pass


class ValidationError(DSLError):
    pass


@dataclass(frozen=True)
class Inequality:
    """``lhs sense 0``; parsed ``a >= b`` is stored as ``a - b >= 0``."""

    lhs: MultiPoly
    sense: str = ">="

    def normalized(self) -> list[MultiPoly]:
        """Equivalent list of polynomials each constrained ``>= 0``."""
        if self.sense == ">=":
            return [self.lhs]
        if self.sense == "<=":
            return [-self.lhs]
        return [self.lhs, -self.lhs]

    def __str__(self):
        return f"{format_poly(self.lhs)} {self.sense} 0"


@dataclass(frozen=True)
class ExistsBlock:
    new_vars: tuple
    system: tuple


@dataclass(frozen=True)
class ProblemSpec:
    params: tuple  # ((name, lower_bound), ...)
    vars: tuple
    base_system: tuple
    goal: tuple = ()

    @property
    def param_bounds(self) -> dict:
        return dict(self.params)


# -- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>>=|<=|[=+\-*/^(){};,])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            if kind == "name" and m.group() in KEYWORDS:
                kind = "kw"
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# -- parser --------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg, tok=None, cls=ParseError):
        tok = tok or self.tok
        return cls(msg, tok.line, tok.col)

    def accept(self, text) -> Token | None:
        if self.tok.text == text and self.tok.kind in ("op", "kw"):
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, text) -> Token:
        t = self.accept(text)
        if t is None:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return t

    def name(self) -> Token:
        if self.tok.kind != "name":
            found = self.tok.text or "end of input"
            raise self.error(f"expected a name, found {found!r}")
        t = self.tok
        self.i += 1
        return t

    def integer(self) -> int:
        neg = self.accept("-") is not None
        if self.tok.kind != "int":
            raise self.error("expected an integer literal")
        v = int(self.tok.text)
        self.i += 1
        return -v if neg else v

    # problem structure
    def problem(self) -> ProblemSpec:
        params, variables = [], []
        declared: set = set()
        while self.tok.text in ("param", "var") and self.tok.kind == "kw":
            if self.accept("param"):
                t = self.name()
                self._declare(t, declared)
                self.expect(">=")
                params.append((t.text, self.integer()))
                self.expect(";")
            else:
                self.expect("var")
                while True:
                    t = self.name()
                    self._declare(t, declared)
                    variables.append(t.text)
                    if not self.accept(","):
                        break
                self.expect(";")
        self.expect("system")
        scope = {p for p, _ in params} | {BINOM}
        base = self.block(scope, set(variables))
        goal = []
        if self.accept("goal"):
            goal.append(self.exists(scope, set(variables), declared))
            while self.accept("or"):
                goal.append(self.exists(scope, set(variables), declared))
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r} after end of problem")
        return ProblemSpec(tuple(params), tuple(variables), tuple(base), tuple(goal))

    def _declare(self, t: Token, declared: set):
        if t.text == BINOM:
            raise self.error("B is reserved for binom(r+k,k)", t, DeclarationError)
        if t.text in declared:
            raise self.error(f"duplicate declaration of {t.text!r}", t, DeclarationError)
        declared.add(t.text)

    def exists(self, params: set, outer_vars: set, declared: set) -> ExistsBlock:
        self.expect("exists")
        self.expect("(")
        new = []
        local = set(declared)
        while True:
            t = self.name()
            self._declare(t, local)
            new.append(t.text)
            if not self.accept(","):
                break
        self.expect(")")
        system = self.block(params, outer_vars | set(new))
        return ExistsBlock(tuple(new), tuple(system))

    def block(self, params: set, variables: set) -> list[Inequality]:
        self.expect("{")
        out = []
        while not self.accept("}"):
            out.append(self.inequality(params, variables))
            self.expect(";")
        return out

    def inequality(self, params: set, variables: set) -> Inequality:
        start = self.tok
        left = self.expr(params | variables)
        if self.tok.text not in SENSES:
            raise self.error("expected '>=', '<=' or '='")
        sense = self.tok.text
        self.i += 1
        right = self.expr(params | variables)
        lhs = left - right
        bad = nonlinear_monomial(lhs, variables)
        if bad is not None:
            raise self.error(f"inequality is not affine in the decision variables "
                             f"(monomial {bad})", start, NonlinearityError)
        return Inequality(lhs, sense)

    # expressions
    def expr(self, scope) -> MultiPoly:
        value = self.term(scope)
        while True:
            if self.accept("+"):
                value = value + self.term(scope)
            elif self.accept("-"):
                value = value - self.term(scope)
            else:
                return value

    def term(self, scope) -> MultiPoly:
        value = self.unary(scope)
        while True:
            if self.accept("*"):
                value = value * self.unary(scope)
            elif self.accept("/"):
                tok = self.tok
                d = self.integer()
                if d == 0:
                    raise self.error("division by zero", tok)
                value = value.scale(Fraction(1, d))
            else:
                return value

    def unary(self, scope) -> MultiPoly:
        if self.accept("-"):
            return -self.unary(scope)
        if self.accept("+"):
            return self.unary(scope)
        base = self.atom(scope)
        if self.accept("^"):
            if self.tok.kind != "int":
                raise self.error("exponent must be a nonnegative integer literal")
            base = base ** int(self.tok.text)
            self.i += 1
        return base

    def atom(self, scope) -> MultiPoly:
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return MultiPoly.const(int(t.text))
        if t.kind == "name":
            self.i += 1
            if t.text not in scope:
                raise self.error(f"unknown symbol {t.text!r}", t, UnknownSymbolError)
            return MultiPoly.var(t.text)
        if self.accept("binom"):
            self.expect("(")
            a = self.expr(scope)
            self.expect(",")
            b = self.expr(scope)
            self.expect(")")
            r, k = MultiPoly.var("r"), MultiPoly.var("k")
            if a != r + k or b != k:
                raise self.error("only binom(r+k,k) is supported", t)
            if BINOM not in scope:
                raise self.error("binom(r+k,k) is not available here", t, UnknownSymbolError)
            return MultiPoly.var(BINOM)
        if self.accept("("):
            value = self.expr(scope)
            self.expect(")")
            return value
        found = t.text or "end of input"
        raise self.error(f"unexpected {found!r} in expression")


def nonlinear_monomial(p: MultiPoly, variables) -> str | None:
    """Return a monomial of ``p`` that is not affine in ``variables``, if any."""
    for mono, _ in p.items():
        degree = sum(e for s, e in mono if s in variables)
        if degree > 1:
            return "*".join(s if e == 1 else f"{s}^{e}" for s, e in mono)
    return None


def parse(text: str) -> ProblemSpec:
    return _Parser(text).problem()


def parse_expression(text: str, symbols=("r", "k", BINOM)) -> MultiPoly:
    """Parse a standalone polynomial expression over ``symbols``."""
    p = _Parser(text)
    value = p.expr(set(symbols))
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after expression")
    return value


def to_source(spec: ProblemSpec) -> str:
    """Canonical text for ``spec``; ``parse(to_source(s)) == s``."""
    lines = [f"param {name} >= {lb};" for name, lb in spec.params]
    if spec.vars:
        lines.append(f"var {', '.join(spec.vars)};")
    lines.append("system " + _block_source(spec.base_system))
    if spec.goal:
        blocks = [f"exists ({', '.join(b.new_vars)}) {_block_source(b.system)}"
                  for b in spec.goal]
        lines.append("goal " + "\nor ".join(blocks))
    return "\n".join(lines) + "\n"


def _block_source(system) -> str:
    if not system:
        return "{ }"
    body = "".join(f"  {ineq};\n" for ineq in system)
    return "{\n" + body + "}"


# -- validation ----------------------------------------------------------------

@dataclass(frozen=True)
class AffineRow:
    """``sum(coeffs[v] * v) + const >= 0`` with parameter-only coefficients."""

    poly: MultiPoly
    coeffs: tuple  # ((var, MultiPoly), ...) in variable order, zero coeffs omitted
    const: MultiPoly

    @property
    def is_parameter_only(self) -> bool:
        return not self.coeffs

    def coeff(self, var: str) -> MultiPoly:
        return dict(self.coeffs).get(var, MultiPoly())


def affine_decompose(p: MultiPoly, variables) -> AffineRow:
    bad = nonlinear_monomial(p, variables)
    if bad is not None:
        raise NonlinearityError(f"{format_poly(p)} >= 0 is not affine (monomial {bad})")
    coeffs = []
    rest = p
    for v in variables:
        c = p.coefficient(v, 1)
        if not c.is_zero():
            coeffs.append((v, c))
            rest = rest - c * MultiPoly.var(v)
    return AffineRow(p, tuple(coeffs), rest)


@dataclass(frozen=True)
class CheckedBlock:
    new_vars: tuple
    rows: tuple


@dataclass(frozen=True)
class CheckedProblem:
    spec: ProblemSpec
    params: dict = field(hash=False)
    vars: tuple = ()
    base: tuple = ()
    blocks: tuple = ()

    @property
    def base_polys(self) -> list[MultiPoly]:
        return [row.poly for row in self.base]

    def block_polys(self, i: int) -> list[MultiPoly]:
        return [row.poly for row in self.blocks[i].rows]

    @property
    def source(self) -> str:
        return to_source(self.spec)


def validate(spec: ProblemSpec) -> CheckedProblem:
    params = dict(spec.params)
    for name in params:
        if name not in PARAM_NAMES:
            raise ValidationError(f"parameter {name!r} not supported; parameters are r and k")
    declared = set(params) | set(spec.vars) | {BINOM}
    if not spec.base_system and not any(b.system for b in spec.goal):
        raise ValidationError("empty system: nothing to check")

    def rows(system, variables, scope):
        out = []
        for ineq in system:
            unknown = ineq.lhs.symbols() - scope
            if unknown:
                raise UnknownSymbolError(f"undeclared symbol(s) {sorted(unknown)} in {ineq}")
            if BINOM in ineq.lhs.symbols():
                missing = [p for p in PARAM_NAMES if p not in params]
                if missing:
                    raise ValidationError(f"B needs parameter(s) {missing} declared")
                if any(params[p] < 0 for p in PARAM_NAMES):
                    raise ValidationError("B needs nonnegative lower bounds on r and k")
            for p in ineq.normalized():
                out.append(affine_decompose(p, variables))
        return tuple(out)

    base = rows(spec.base_system, spec.vars, declared)
    blocks = []
    for b in spec.goal:
        clash = set(b.new_vars) & declared
        if clash:
            raise DeclarationError(f"exists variable(s) {sorted(clash)} shadow outer names")
        variables = tuple(spec.vars) + tuple(b.new_vars)
        blocks.append(CheckedBlock(tuple(b.new_vars),
                                   rows(b.system, variables, declared | set(b.new_vars))))
    return CheckedProblem(spec, params, tuple(spec.vars), base, tuple(blocks))


def load(text: str) -> CheckedProblem:
    return validate(parse(text))
