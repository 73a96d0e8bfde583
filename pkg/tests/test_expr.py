import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from invint.errors import DomainError, ParseError, UnboundVariable, UnknownVariable
from invint.expr import BinOp, Call, Const, Neg, Var, differentiate, parse


def test_parse_function_application():
    assert parse("exp(x)") == Call("exp", Var("x"))


def test_parse_precedence():
    assert parse("x^3 + 1") == BinOp("+", BinOp("^", Var("x"), Const(3.0)), Const(1.0))


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse("x + * 2")
    assert exc.value.position == 4
    assert "expected" in str(exc.value)


def test_parse_unknown_variable():
    with pytest.raises(UnknownVariable):
        parse("x + y", ("x",))


def test_parse_unknown_function():
    with pytest.raises(ParseError):
        parse("foo(x)")


def test_parse_trailing_input():
    with pytest.raises(ParseError):
        parse("x 2")


def test_reserved_constant_names():
    assert parse("pi", ()).evaluate({}) == math.pi
    assert parse("e", ()).evaluate({}) == math.e
    with pytest.raises(ValueError):
        parse("x", ("x", "pi"))


@pytest.mark.parametrize(
    "text,x,expected",
    [
        ("exp(x)", 0.0, 1.0),
        ("log(x)", math.e, 1.0),
        ("x^3", 2.0, 8.0),
        ("2^3^2", 1.0, 512.0),  # right-associative power
        ("-x^2", 3.0, -9.0),
        ("2^-2", 1.0, 0.25),
        ("(-2)^3", 1.0, -8.0),
        ("6/2/3", 1.0, 1.0),
        ("1 - 2 - 3", 0.0, -4.0),
    ],
)
def test_evaluate(text, x, expected):
    assert parse(text).evaluate({"x": x}) == pytest.approx(expected, rel=1e-15)


def test_evaluate_unbound_variable():
    with pytest.raises(UnboundVariable):
        parse("x").evaluate({})


@pytest.mark.parametrize(
    "text,x",
    [
        ("log(x)", -1.0),
        ("1/x", 0.0),
        ("sqrt(x)", -2.0),
        ("x^0.5", -2.0),
        ("exp(x)", 1e6),  # overflow must not leak inf
    ],
)
def test_evaluate_domain_errors(text, x):
    with pytest.raises(DomainError):
        parse(text).evaluate({"x": x})


def test_evaluate_domain_error_on_array():
    with pytest.raises(DomainError):
        parse("log(x)").evaluate({"x": np.array([1.0, 2.0, -1.0])})


def test_vectorized_matches_scalar():
    e = parse("x*exp(-x) + sin(x)/(2 + cos(x))")
    xs = np.linspace(-2.0, 2.0, 23)
    batch = e.evaluate({"x": xs})
    singles = np.array([e.evaluate({"x": float(x)}) for x in xs])
    assert np.allclose(batch, singles, rtol=0, atol=0)


@pytest.mark.parametrize(
    "text,x,expected",
    [
        ("x^3", 2.0, 12.0),  # 3 x^2
        ("exp(x)", 1.3, math.exp(1.3)),
        ("log(x)", 2.0, 0.5),
        ("sqrt(x)", 4.0, 0.25),
        ("tan(x)", 0.7, 1.0 / math.cos(0.7) ** 2),
        ("atan(x)", 0.9, 1.0 / (1.0 + 0.81)),
        ("abs(x)", -2.0, -1.0),
    ],
)
def test_differentiate_pointwise(text, x, expected):
    d = differentiate(parse(text))
    assert d.evaluate({"x": x}) == pytest.approx(expected, rel=1e-12)


def test_differentiate_exp_fixed_point():
    assert differentiate(parse("exp(x)")) == parse("exp(x)")


_CORPUS_TEXTS = [
    "exp(x)",
    "x^3",
    "x + sin(x)/2",
    "tan(x)",
    "atan(x)",
    "x + atan(x)",
    "exp(-x)",
    "1/x",
    "-log(cos(x))",
    "x*atan(x) - log(1 + x^2)/2",
    "sinh(x)*cosh(x) - tanh(x)",
    "x^2.5 + sqrt(x)",
]


@pytest.mark.parametrize("text", _CORPUS_TEXTS)
def test_print_parse_round_trip(text):
    e = parse(text)
    again = parse(str(e))
    rng = np.random.default_rng(20240811)
    xs = 0.5 + rng.uniform(0.0, 0.4, size=20)  # safely inside every domain
    a = e.evaluate({"x": xs})
    b = again.evaluate({"x": xs})
    assert np.all(np.abs(a - b) <= 1e-12 * (1.0 + np.abs(a)))


@pytest.mark.parametrize("text", _CORPUS_TEXTS)
def test_derivative_matches_central_difference(text):
    e = parse(text)
    d = differentiate(e)
    rng = np.random.default_rng(7)
    h = 1e-5
    for x in 0.5 + rng.uniform(0.0, 0.4, size=10):
        slope = (e.evaluate({"x": x + h}) - e.evaluate({"x": x - h})) / (2.0 * h)
        sym = d.evaluate({"x": x})
        assert abs(sym - slope) <= 1e-6 * (1.0 + abs(sym))


def test_derivative_round_trips_through_text():
    d = differentiate(parse("x^3 + exp(-x)*sin(x)"))
    again = parse(str(d))
    for x in (0.3, 1.1, 2.4):
        assert again.evaluate({"x": x}) == pytest.approx(
            d.evaluate({"x": x}), rel=1e-14
        )


_leaves = st.sampled_from(
    [Var("x"), Const(0.5), Const(2.0), Const(3.0), Const(0.25)]
)


def _compose(children):
    return st.one_of(
        st.tuples(st.sampled_from("+-*/"), children, children).map(
            lambda t: BinOp(t[0], t[1], t[2])
        ),
        children.map(Neg),
        st.tuples(
            st.sampled_from(["sin", "cos", "exp", "tanh", "atan"]), children
        ).map(lambda t: Call(t[0], t[1])),
        st.tuples(children, st.sampled_from([2.0, 3.0, 0.5])).map(
            lambda t: BinOp("^", t[0], Const(t[1]))
        ),
    )


@settings(max_examples=200, deadline=None)
@given(st.recursive(_leaves, _compose, max_leaves=10), st.floats(-3.0, 3.0))
def test_print_parse_round_trip_random_trees(e, x):
    try:
        expected = e.evaluate({"x": x})
    except DomainError:
        assume(False)
    again = parse(str(e)).evaluate({"x": x})
    assert again == pytest.approx(expected, rel=1e-12, abs=1e-12)
