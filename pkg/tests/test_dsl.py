from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from paramfeas.dsl import (DeclarationError, NonlinearityError, ParseError, UnknownSymbolError,
                           ValidationError, affine_decompose, load, parse, parse_expression,
                           to_source, validate)
from paramfeas.exact import BINOM, MultiPoly

RHO = "param r >= 3; var d, g; system { (r+1)*d - r*g - r*(r+1) >= 0; }"
r, k = MultiPoly.var("r"), MultiPoly.var("k")


def test_parse_rho_system():
    spec = parse(RHO)
    assert spec.vars == ("d", "g")
    assert len(spec.base_system) == 1
    assert spec.param_bounds == {"r": 3}


def test_products_of_variables_rejected():
    with pytest.raises(NonlinearityError):
        load("var d; system { d*d >= 0; }")
    with pytest.raises(NonlinearityError):
        load("var d, g; system { d*g >= 1; }")


def test_binomial_symbol():
    p = load("param r >= 0; param k >= 1; system { B - k >= 0; }")
    assert BINOM in p.base_polys[0].symbols()
    alias = load("param r >= 0; param k >= 1; system { binom(r+k,k) - k >= 0; }")
    assert alias.base_polys == p.base_polys
    with pytest.raises(ParseError):
        load("param r >= 0; param k >= 1; system { binom(r,k) >= 0; }")


def test_binomial_needs_both_parameters():
    with pytest.raises(ValidationError):
        load("param k >= 1; system { B - k >= 0; }")


def test_affine_decomposition():
    p = load(RHO)
    row = p.base[0]
    assert row.coeff("d") == r + 1
    assert row.coeff("g") == -r
    assert row.const == -r * (r + 1)
    const_row = affine_decompose(r - 3, ("d", "g"))
    assert const_row.is_parameter_only


def test_equality_splits():
    p = load("var x; system { x = 2; }")
    assert len(p.base) == 2
    assert {str(q) for q in p.base_polys} == {"x - 2", "-x + 2"}


def test_errors_carry_positions():
    with pytest.raises(UnknownSymbolError):
        load("var x; system { x + y >= 0; }")
    with pytest.raises(DeclarationError):
        load("var x, x; system { x >= 0; }")
    with pytest.raises(DeclarationError):
        load("var x; system { x >= 0; } goal exists (x) { x >= 0; }")
    with pytest.raises(ParseError) as exc:
        load("var x;\nsystem { x >= ; }")
    assert exc.value.line == 2
    with pytest.raises(ValidationError):
        load("param q >= 1; system { q >= 0; }")
    with pytest.raises(ValidationError):
        load("system { }")


def test_parse_expression():
    assert parse_expression("r*k - 100") == r * k - 100
    assert parse_expression("(r+1)^2/2") == ((r + 1) * (r + 1)).scale(MultiPoly.const(1).constant_value() / 2)
    with pytest.raises(UnknownSymbolError):
        parse_expression("r + z")


def test_round_trip_on_demos(demos: Path):
    for path in sorted(demos.glob("*.pf")):
        spec = parse(path.read_text())
        text = to_source(spec)
        assert parse(text) == spec
        assert to_source(parse(text)) == text


# -- properties ---------------------------------------------------------------

names = st.sampled_from(["r", "k", "x", "y", "n"])


@st.composite
def expressions(draw, depth=2):
    if depth == 0 or draw(st.booleans()):
        return draw(st.one_of(names, st.integers(0, 9).map(str)))
    a, b = draw(expressions(depth=depth - 1)), draw(expressions(depth=depth - 1))
    op = draw(st.sampled_from(["+", "-", "*"]))
    return f"({a} {op} {b})"


@given(st.lists(st.tuples(expressions(), st.sampled_from([">=", "<=", "="])), min_size=1, max_size=4))
def test_validate_never_accepts_variable_products(rows):
    text = "param r >= 0; param k >= 0; var x, y; system { x >= 0; } goal exists (n) { "
    text += " ".join(f"{e} {s} 0;" for e, s in rows) + " }"
    try:
        p = validate(parse(text))
    except (NonlinearityError, ParseError):
        return
    decision = {"x", "y", "n"}
    for block_rows in [p.base] + [b.rows for b in p.blocks]:
        for row in block_rows:
            for mono, _ in row.poly.items():
                assert sum(e for s, e in mono if s in decision) <= 1
    assert parse(to_source(p.spec)) == p.spec
