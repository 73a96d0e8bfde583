import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invint.errors import NoConvergence, NonMonotone, OutOfCodomain
from invint.expr import parse
from invint.monotone import (
    IntervalDomain,
    build,
    inverse_as_function,
    invert,
)


def test_interval_domain_validation():
    with pytest.raises(ValueError):
        IntervalDomain(1.0, 1.0)
    with pytest.raises(ValueError):
        IntervalDomain(2.0, 1.0)
    with pytest.raises(ValueError):
        IntervalDomain(0.0, math.inf)


def test_build_increasing():
    f = build(parse("exp(x)"), IntervalDomain(0.0, 1.0), 1024)
    assert f.direction == 1
    assert f.codomain == pytest.approx((1.0, math.e), rel=1e-15)
    assert "screened, not proven" in f.screening


def test_build_decreasing():
    f = build(parse("-x"), IntervalDomain(0.0, 1.0), 1024)
    assert f.direction == -1
    assert f.codomain == pytest.approx((-1.0, 0.0), abs=1e-15)


def test_build_rejects_sin_with_witnesses():
    with pytest.raises(NonMonotone) as exc:
        build(parse("sin(x)"), IntervalDomain(0.0, 3.0), 1024)
    err = exc.value
    assert err.increasing is not None and err.decreasing is not None
    x1, x2 = err.decreasing
    assert x1 < x2
    assert math.sin(x1) > math.sin(x2)
    # the flip shows up at the peak
    assert abs(x1 - math.pi / 2) < 0.01


def test_build_rejects_plateau():
    # x - abs(x) is flat on [0, 1]
    with pytest.raises(NonMonotone) as exc:
        build(parse("x - abs(x)"), IntervalDomain(-1.0, 1.0), 512)
    assert "strictly" in str(exc.value) or "flips" in str(exc.value)


def test_build_propagates_domain_error():
    from invint.errors import DomainError

    with pytest.raises(DomainError):
        build(parse("log(x)"), IntervalDomain(-1.0, 1.0), 64)


@pytest.mark.parametrize(
    "text,domain,y,expected",
    [
        ("exp(x)", (-1.0, 2.0), 1.0, 0.0),
        ("x^3", (0.0, 2.0), 8.0, 2.0),
        ("-x", (0.0, 1.0), -0.25, 0.25),
    ],
)
def test_invert_examples(text, domain, y, expected):
    f = build(parse(text), IntervalDomain(*domain))
    assert invert(f, y, 1e-12) == pytest.approx(expected, abs=5e-12)


def test_invert_codomain_endpoints_are_exact():
    f = build(parse("x^3"), IntervalDomain(0.0, 2.0))
    assert invert(f, 0.0) == 0.0
    assert invert(f, 8.0) == 2.0
    g = build(parse("-x"), IntervalDomain(0.0, 1.0))
    assert invert(g, g.codomain[0]) == 1.0
    assert invert(g, g.codomain[1]) == 0.0


def test_invert_out_of_codomain():
    f = build(parse("exp(x)"), IntervalDomain(0.0, 1.0))
    with pytest.raises(OutOfCodomain):
        invert(f, 100.0)
    with pytest.raises(OutOfCodomain):
        invert(f, 0.5)


def test_invert_slack_clamps_to_endpoint():
    f = build(parse("exp(x)"), IntervalDomain(0.0, 1.0))
    tol = 1e-9
    eps_inside_slack = f.codomain[1] + 0.5 * tol * (1.0 + f.codomain[1])
    assert invert(f, eps_inside_slack, tol) == 1.0


def test_invert_unreachable_tolerance():
    f = build(parse("exp(x)"), IntervalDomain(0.0, 1.0))
    with pytest.raises(NoConvergence):
        invert(f, 1.7, 1e-30)


def test_invert_vectorized_matches_scalar():
    f = build(parse("tan(x)"), IntervalDomain(-1.4, 1.4))
    ys = np.linspace(*f.codomain, 17)
    xs = invert(f, ys, 1e-12)
    singles = np.array([invert(f, float(y), 1e-12) for y in ys])
    assert np.allclose(xs, singles, rtol=0, atol=1e-12)


def test_inverse_as_function_examples():
    f = build(parse("exp(x)"), IntervalDomain(0.0, 1.0))
    inv = inverse_as_function(f)
    assert inv(math.e) == pytest.approx(1.0, abs=1e-12)
    assert inv.direction == 1
    assert inverse_as_function(build(parse("-x"), IntervalDomain(0.0, 1.0))).direction == -1
    fx3 = build(parse("x^3"), IntervalDomain(0.0, 2.0))
    assert inverse_as_function(fx3)(1.0) == pytest.approx(1.0, abs=1e-12)


def test_inverse_function_domain_is_the_codomain():
    f = build(parse("exp(-x)"), IntervalDomain(0.0, 2.0))
    inv = inverse_as_function(f)
    assert (inv.domain.a, inv.domain.b) == pytest.approx(f.codomain, rel=1e-15)
    assert inv.codomain == (0.0, 2.0)


def test_round_trip_grid_all_corpus(corpus_functions):
    tau = 1e-10
    for _, f, _ in corpus_functions:
        ys = np.linspace(*f.codomain, 101)
        xs = invert(f, ys, tau)
        vals = f(xs)
        assert np.all(np.abs(vals - ys) <= tau * (1.0 + np.abs(ys))), f.body


def test_direction_agreement_all_corpus(corpus_functions):
    directions = set()
    for _, f, _ in corpus_functions:
        assert inverse_as_function(f).direction == f.direction
        directions.add(f.direction)
    assert directions == {1, -1}


def test_order_preservation(corpus_functions):
    tau = 1e-10
    for _, f, _ in corpus_functions:
        c, d = f.codomain
        ys = np.linspace(c, d, 33)
        xs = invert(f, ys, tau)
        if f.direction > 0:
            assert np.all(np.diff(xs) >= -2.0 * tau)
        else:
            assert np.all(np.diff(xs) <= 2.0 * tau)


@settings(max_examples=80, deadline=None)
@given(st.floats(1.0, math.e))
def test_round_trip_hypothesis_exp(y):
    f = build(parse("exp(x)"), IntervalDomain(0.0, 1.0))
    tau = 1e-10
    x = invert(f, y, tau)
    assert 0.0 <= x <= 1.0
    assert abs(f(x) - y) <= tau * (1.0 + abs(y))
