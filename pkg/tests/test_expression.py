"""
Tests for the generator expression language
"""

import math

import numpy as np
import pytest

from shared.errors import ExpressionSyntaxError
from shared.generators.expression import expression_terminal, parse_expression, tokenize


def value(text, d=1, horizon=1.0, **point):
    return float(parse_expression(text, d=d, horizon=horizon).evaluate(d=d, **point))


@pytest.mark.parametrize("text, expected", [
    ("1 + 2 * 3", 7.0),
    ("(1 + 2) * 3", 9.0),
    ("8 / 4 / 2", 1.0),
    ("2 ^ 3 ^ 2", 512.0),
    ("2 ** 3", 8.0),
    ("-2 ^ 2", -4.0),
    ("2 ^ -1", 0.5),
    ("--3", 3.0),
    ("1.5e1 + .5", 15.5),
    ("min(3, 4) + max(3, 4)", 7.0),
    ("ind(1 < 2) + ind(2 <= 1)", 1.0),
    ("cbrt(27) + sqrt(16)", 7.0),
    ("sign(-3)", -1.0),
])
def test_arithmetic(text, expected):
    """Precedence, associativity and built-in functions"""
    assert value(text) == pytest.approx(expected)


def test_constants():
    """pi and e are bound"""
    assert value("pi") == pytest.approx(math.pi)
    assert value("ln(e)") == pytest.approx(1.0)


def test_variables_and_components():
    """t, T, y, b[k], z[k], absb and absz read the evaluation point"""
    b = np.array([3.0, 4.0])
    z = np.array([1.0, -2.0])
    assert value("t + T", d=2, horizon=2.0, t=0.25) == pytest.approx(2.25)
    assert value("b[2] - z[2]", d=2, b=b, z=z) == pytest.approx(6.0)
    assert value("absb", d=2, b=b) == pytest.approx(5.0)
    assert value("absz ^ 2", d=2, z=z) == pytest.approx(5.0)
    assert value("b + y", d=2, b=b, y=1.0) == pytest.approx(4.0)


def test_vectorized_evaluation():
    """Batches of points broadcast"""
    expression = parse_expression("y * absz", d=1)
    out = expression.evaluate(y=np.array([1.0, 2.0]), z=np.array([[3.0], [-3.0]]))
    assert out.tolist() == [3.0, 6.0]


def test_variables_recorded():
    """The parsed tree reports which variables it reads"""
    assert parse_expression("sin(t) + absb * y", horizon=1.0).variables == frozenset({"t", "b", "y"})
    assert parse_expression("T + 1", horizon=1.0).variables == frozenset()


@pytest.mark.parametrize("text, column", [
    ("1 + $", 5),
    ("1 +", 4),
    ("foo(1)", 1),
    ("sqrt(1, 2)", 1),
    ("(1 + 2", 7),
    ("1 2", 3),
    ("z[3]", 3),
    ("ind(1)", 6),
])
def test_syntax_errors_report_column(text, column):
    """Errors carry the 1-based column of the offending token"""
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression(text, d=2, horizon=1.0)
    assert info.value.column == column


def test_empty_expression():
    """Empty input is a syntax error"""
    with pytest.raises(ExpressionSyntaxError, match="empty"):
        parse_expression("   ")


def test_horizon_unavailable():
    """T is rejected when no horizon is bound"""
    with pytest.raises(ExpressionSyntaxError, match="T is not available"):
        parse_expression("T", horizon=None)


def test_tokenizer_normalizes_double_star():
    """** tokenizes as ^"""
    assert [token.text for token in tokenize("a**2")][:3] == ["a", "^", "2"]


def test_terminal_reads_only_b():
    """Terminal expressions reject t, y and z"""
    xi = expression_terminal("b^2 + 1")
    assert xi.eval(np.array([[2.0]])).tolist() == [5.0]
    with pytest.raises(ExpressionSyntaxError):
        expression_terminal("b + y")
    with pytest.raises(ExpressionSyntaxError):
        expression_terminal("T * b")
