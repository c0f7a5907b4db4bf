import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from jetcalc import FIXTURES, load_fixture
from jetcalc.elements import Space
from jetcalc.polynomial import Polynomial
from jetcalc.scenario import (ParseError, parse_expression, parse_scenario, render_expression,
                              render_polynomial, render_scenario, render_tensor)
from jetcalc.sampling import random_polynomial, random_tensor


def test_parse_examples(curve):
    assert parse_expression("0", curve.pres) == Polynomial(3)
    v = parse_expression("3*y*n1", curve.pres)
    assert v.length == 1 and v.coefficient((0,)) == curve.pres.ring.var("y") * 3
    t = parse_expression("n1@n1 + 2*(n2@n1)", curve.pres)
    assert t.space == Space("T", 2) and t.coefficient((1, 0)) == Polynomial.constant(3, 2)
    half = parse_expression("1/2*x^2*(n1@n2)", curve.pres)
    assert half.coefficient((0, 1)) == curve.pres.ring.var("x") ** 2 * Fraction(1, 2)


@pytest.mark.parametrize("text, message", [
    ("x +", "unexpected end"),
    ("n1 + n1@n2", "length mismatch"),
    ("n1*n2", "use '@'"),
    ("x/y", "division"),
    ("w", "unknown identifier"),
    ("x $ y", "unexpected character"),
    ("(x", r"expected '\)'"),
    ("n1^2", "ring elements only"),
])
def test_parse_errors(curve, text, message):
    with pytest.raises(ParseError, match=message):
        parse_expression(text, curve.pres)


def test_parse_error_position(curve):
    with pytest.raises(ParseError) as exc:
        parse_expression("x + w", curve.pres, line=4, col=10)
    assert exc.value.line == 4 and exc.value.col == 14


def test_render_examples(curve):
    pres = curve.pres
    assert render_expression(Polynomial(3), pres) == "0"
    val = pres.normal_form(curve.gamma(curve.p("x*n1")))
    assert render_tensor(val, pres) == "7*y*(n1@n1)"
    assert render_polynomial(curve.p("z + 2*x - 1/3*y"), pres.ring) == "2*x - 1/3*y + z"


@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_round_trip(name):
    s = load_fixture(name)
    text = render_scenario(s)
    assert parse_scenario(text) == s
    assert render_scenario(parse_scenario(text)) == text


def test_fixture_shapes():
    nodal = load_fixture("nodal")
    assert (len(nodal.ring.names), len(nodal.ring.ideal), len(nodal.module.names), len(nodal.module.relations)) == (2, 1, 2, 1)
    curve = load_fixture("nongorenstein")
    assert curve.ring.weights == (3, 4, 5) and curve.module.weights == (-2, -3)
    assert len(curve.module.relations) == 3 and curve.connection is not None


@pytest.mark.parametrize("text, message", [
    ("", "missing \\[ring\\]"),
    ("[ring]\nvars = x:1\n[ring]\n", "duplicate section"),
    ("[ring]\nvars = x:1\n[module]\ngens = a:0\n", "missing \\[derivation\\]"),
    ("[ring]\nvars = x:1\n[module]\ngens = a:0\n[derivation]\ndegree = 0\n", "missing D\\(x\\)"),
    ("[ring]\nvars = x\n[module]\ngens = a:0\n[derivation]\ndegree = 0\n", "name:weight"),
    ("[ring]\nvars = x:1\n[bogus]\n", "unknown section"),
    ("[ring]\nvars = x:1\n[module]\ngens = x:0\n[derivation]\ndegree = 0\nD(x) = 0\n", "both variables and generators"),
    ("[ring]\nvars = x:1\n[module]\ngens = a:0\n[derivation]\ndegree = 0\nD(x) = a\n[connection]\nG(a) = a\n",
     "length 2"),
])
def test_scenario_errors(text, message):
    with pytest.raises(ParseError, match=message):
        parse_scenario(text)


def test_scenario_error_line():
    text = "[ring]\nvars = x:1\n[module]\ngens = a:0\n[derivation]\ndegree = 0\nD(x) = a +\n"
    with pytest.raises(ParseError) as exc:
        parse_scenario(text)
    assert exc.value.line == 7


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["curve", "free", "nodal"]), st.integers(0, 3))
def test_render_parse_round_trip(request_seed, name, n):
    from tests.conftest import build
    s = build({"curve": "nongorenstein", "free": "free_plane", "nodal": "nodal"}[name])
    rng = random.Random(request_seed)
    if n == 0:
        v = random_polynomial(s.pres, rng.randrange(0, 10), rng)
        assert parse_expression(render_expression(v, s.pres), s.pres) == v
        return
    t = random_tensor(s.pres, Space("T", n), n * min(s.pres.module.weights) + rng.randrange(0, 8), rng)
    back = parse_expression(render_expression(t, s.pres), s.pres)
    if t.terms:
        assert back == t
    else:
        assert back == Polynomial(s.pres.nvars)
