"""Randomized property suites (10^4 derandomized cases each for the core five)."""
from fractions import Fraction

from conftest import PROPERTY
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from strategies import expressions, smooth_expressions, with_phi_powers

from porosym.liealg import AlgebraElement, structure_constants
from porosym.solutions import apply_group
from porosym.symexpr import (
    ONE,
    ZERO,
    DomainError,
    Expr,
    add_all,
    differentiate,
    eval_numeric,
    parse,
    phi_power,
    to_text,
    total_derivative,
    var,
)
from porosym.symexpr.core import Jet, JetOrderError


@PROPERTY
@given(with_phi_powers())
def test_normalization_idempotent(e):
    again = add_all(Expr((term,)) for term in reversed(e.terms))
    assert again == e and hash(again) == hash(e)
    assert add_all([again]).terms == e.terms
    assert add_all([e, ZERO]) == e
    assert e * ONE == e


@PROPERTY
@given(with_phi_powers())
def test_print_parse_round_trip(e):
    assert parse(to_text(e)) == e


def _eval(e, at):
    try:
        return eval_numeric(e, at)
    except DomainError:
        assume(False)


@PROPERTY
@given(smooth_expressions(), st.floats(0.5, 1.5), st.floats(0.5, 1.5), st.floats(0.5, 1.5),
       st.floats(0.5, 1.5))
def test_derivative_matches_central_difference(e, x, y, t, k):
    at = lambda xx: {"x": xx, "y": y, "t": t, "k": k}
    d = _eval(differentiate(e, var("x")), at(x))
    step = 2e-5
    f0 = _eval(e, at(x))
    # stiff compositions such as exp(exp(6 + x)) defeat any fixed difference step
    assume(abs(d) < 1e4 and abs(f0) < 1e4)
    f = [_eval(e, at(x + j * step)) for j in (-2, -1, 1, 2)]
    fd = (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * step)
    assert abs(d - fd) <= 1e-6 * max(1.0, abs(d), abs(f0))


rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))
elements = st.tuples(*[rationals] * 5).map(lambda v: AlgebraElement.of(*v))


@PROPERTY
@given(elements, elements, elements)
def test_jacobi_identity(a, b, c):
    br = structure_constants().bracket
    total = br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))
    assert total.is_zero()


small = st.builds(Fraction, st.integers(-8, 8), st.just(16))


def _close(u, v):
    return abs(u - v) <= 1e-9 * max(1.0, abs(u), abs(v))


@PROPERTY
@given(smooth_expressions(max_leaves=4), st.integers(1, 5), small, small,
       st.floats(0.5, 1.5), st.floats(0.5, 1.5), st.floats(0.5, 1.5), st.floats(0.1, 0.9))
def test_group_law(phi, i, e1, e2, x, y, t, theta):
    left = apply_group(i, e1, apply_group(i, e2, phi))
    right = apply_group(i, e1 + e2, phi)
    at = {"x": x, "y": y, "t": t, "k": 0.7, "theta": theta}
    assert _close(_eval(left, at), _eval(right, at))


@settings(max_examples=2000)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-3, 3)), min_size=1, max_size=5),
       st.booleans())
def test_phi_powers_stay_on_lattice(pairs, divide):
    e = ONE
    for m, n in pairs:
        e = e / phi_power(m, n) if divide else e * phi_power(m, n)
    for mono, _ in e.terms:
        for a, k in mono:
            if a == Jet("phi"):
                assert isinstance(k, tuple) and all(isinstance(v, int) for v in k)


@settings(max_examples=2000)
@given(expressions(max_leaves=5))
def test_total_derivatives_commute(e):
    try:
        xy = total_derivative(total_derivative(e, "x"), "y")
        yx = total_derivative(total_derivative(e, "y"), "x")
    except JetOrderError:
        assume(False)
    assert xy == yx
