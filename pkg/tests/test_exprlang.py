import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vekua.errors import ExprDomainError, ExprSyntaxError
from vekua.exprlang import eval_jet2, eval_jet3, is_constant, parameters, parse, to_string


def test_parse_with_parameter():
    tree = parse("exp(c*y)", {"c"})
    assert to_string(tree) == "exp(c * y)"
    assert parameters(tree) == {"c"}


def test_parse_difference_of_powers():
    assert to_string(parse("x^2 - y^2")) == "x^2 - y^2"


@pytest.mark.parametrize("text, offset", [
    ("x +* y", 3), ("(x", 2), ("x^1.5", 2), ("foo(x)", 0), ("q*x", 0),
])
def test_syntax_errors_carry_offset(text, offset):
    with pytest.raises(ExprSyntaxError) as info:
        parse(text)
    assert info.value.offset == offset


def test_jet2_product():
    j = eval_jet2("x*y", (2, 3))
    assert (j.value, j.dx, j.dy, j.dxy, j.dxx) == (6, 3, 2, 1, 0)


def test_jet2_exponential():
    j = eval_jet2("exp(y)", (0, 0))
    assert (j.value, j.dy, j.dyy, j.dx) == (1, 1, 1, 0)


def test_jet2_polynomial():
    j = eval_jet2("x^2-y^2", (1, 2))
    assert (j.value, j.dxx, j.dyy, j.dxy) == (-3, 2, -2, 0)


def test_jet3_examples():
    g = eval_jet3("x", (1, 1, 1))
    assert tuple(g.gradient()) == (1, 0, 0)
    assert eval_jet3("x^2+y^2+z3^2", (0, 0, 0)).laplacian().value == 6
    j = eval_jet3("exp(c*z3)", (0, 0, 0), {"c": 1})
    assert j.value == 1 and j.partial(2) == 1


@pytest.mark.parametrize("text", ["log(x)", "1/x", "sqrt(x)"])
def test_domain_errors_name_subexpression(text):
    with pytest.raises(ExprDomainError) as info:
        eval_jet2(text, (0, 0))
    assert info.value.subexpr


def test_constants():
    assert is_constant(parse("2*i + 1"))
    assert not is_constant(parse("x + 1"))
    assert eval_jet2("2*i + 1", (0.1, 0.2)).value == 1 + 2j
    assert abs(eval_jet2("pi", (0, 0)).value - math.pi) < 1e-15


SMOOTH = ["sin(x)*cos(y)", "exp(x*y)", "x^3 - 3*x*y^2", "sinh(x) + cosh(y)",
          "1/(2 + x^2 + y^2)", "log(2 + x)*y", "sqrt(1 + x^2)"]


@given(st.sampled_from(SMOOTH), st.floats(-1, 1), st.floats(-1, 1))
def test_derivatives_match_finite_differences(text, x, y):
    h = 1e-5
    j = eval_jet2(text, (x, y))
    val = lambda a, b: eval_jet2(text, (a, b)).value
    assert abs(j.dx - (val(x + h, y) - val(x - h, y)) / (2 * h)) < 1e-8
    assert abs(j.dy - (val(x, y + h) - val(x, y - h)) / (2 * h)) < 1e-8
    d = lambda a, b: eval_jet2(text, (a, b)).dx
    assert abs(j.dxy - (d(x, y + h) - d(x, y - h)) / (2 * h)) < 1e-6


@given(st.sampled_from(SMOOTH))
def test_printing_round_trips(text):
    tree = parse(text)
    assert parse(to_string(tree)) == tree


def test_vectorized_evaluation():
    x = np.linspace(-1, 1, 7)
    j = eval_jet2("x*y", (x, 2 * x))
    assert np.allclose(j.value, 2 * x * x)
