import pytest

from cpoisson import Expr, ParseError, parse
from cpoisson.parser import tokenize


def test_literal_and_precedence():
    assert parse("1 + 2*3", 1) == Expr.const(7)
    assert parse("2^3", 1) == Expr.const(8)
    assert parse("-z1^2", 1) == -(parse("z1", 1) ** 2)
    assert parse("(z1 + 1)*(z1 - 1)", 1) == parse("z1^2 - 1", 1)
    assert parse("z1/zb1/z1", 1) == parse("1/zb1", 1)


def test_complex_literals():
    assert parse("2i", 1) == Expr.const(2j)
    assert parse("i*i", 1) == Expr.const(-1)
    assert parse("3/4 + i/2", 1) == Expr.const(0.75 + 0.5j)


def test_decimals_are_exact():
    assert parse("0.5*z1", 1) == parse("z1/2", 1)
    assert parse(".25", 1) == parse("1/4", 1)
    assert parse("0.1 + 0.2", 1) == parse("3/10", 1)


def test_symbols_and_jets():
    e = parse("c*P_z1zb2 + Pb", 2)
    assert e.free_symbols == {"c", "P_z1zb2", "Pb"}


def test_whitespace_is_ignored():
    assert parse("  z1 *\tzb1 ", 1) == parse("z1*zb1", 1)


@pytest.mark.parametrize(
    "text, pos",
    [
        ("z1 +", 4),
        ("z1 * * zb1", 5),
        ("(z1 + 1", 7),
        ("z1 $ 2", 3),
        ("z1 )", 3),
        ("z1^zb1", 3),
        ("2^3^1", 3),
    ],
)
def test_syntax_error_positions(text, pos):
    with pytest.raises(ParseError) as info:
        parse(text, 1)
    assert info.value.pos == pos
    assert f"position {pos}" in str(info.value)


def test_empty_input():
    with pytest.raises(ParseError):
        parse("   ", 1)


def test_index_out_of_range():
    with pytest.raises(ParseError, match="index out of range"):
        parse("z3", 2)
    with pytest.raises(ParseError, match="index out of range"):
        parse("zb2 + 1", 1)
    with pytest.raises(ParseError, match="index out of range"):
        parse("P_z1z2", 1)


def test_unknown_variables():
    with pytest.raises(ParseError, match="unknown variable"):
        parse("x_1 + 1", 1)
    with pytest.raises(ParseError, match="unknown constant"):
        parse("k*z1", 1, symbols={"c", "cb"})
    with pytest.raises(ParseError, match="unknown function"):
        parse("Q", 1, symbols={"P"})
    assert parse("cb*P_z1", 1, symbols={"c", "cb", "P"}).free_symbols == {"cb", "P_z1"}


def test_division_by_literal_zero():
    with pytest.raises(ParseError, match="division by zero") as info:
        parse("z1/(1 - 1)", 1)
    assert info.value.pos == 2


def test_negative_power_of_zero():
    with pytest.raises(ParseError):
        parse("(z1 - z1)^-1", 1)


def test_tokens_carry_positions():
    toks = tokenize("2i*zb1")
    assert [(t.kind, t.value, t.pos) for t in toks] == [
        ("num", "2i", 0),
        ("op", "*", 2),
        ("ident", "zb1", 3),
        ("end", "", 6),
    ]


def test_bad_dimension():
    with pytest.raises(ValueError):
        parse("z1", 0)
