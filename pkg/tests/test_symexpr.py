import math
from fractions import Fraction

import pytest

from porosym.model import delta, onshell, rhs
from porosym.symexpr import (
    THETA,
    ZERO,
    Constraints,
    DomainError,
    ParseError,
    Verdict,
    const,
    differentiate,
    eval_numeric,
    exp_,
    expand_defined,
    is_zero,
    ln_,
    param,
    parse,
    pow_,
    subs,
    substitute,
    to_text,
    total_derivative,
    var,
    zero_report,
)
from porosym.symexpr.core import Jet, JetOrderError, Param


def test_parse_delta():
    d = parse("phi_t - 2*phi_x^2 - 2*phi*phi_xx - 2*phi_y^2 - 2*phi*phi_yy + h*phi^theta")
    assert d == delta()


def test_parse_zero_is_canonical():
    assert parse("0") == ZERO
    assert parse("x - x") == ZERO
    assert not parse("0").terms


def test_lattice_exponent_addition():
    e = parse("phi^theta * phi^(-1)")
    ((mono, c),) = e.terms
    assert c == 1 and mono == ((Jet("phi"), (-1, 1)),)


def test_parse_errors():
    with pytest.raises(ParseError):
        parse("2*")
    with pytest.raises(ParseError):
        parse("unknown_name + 1")
    with pytest.raises(ParseError, match="order"):
        parse("phi_xxxxx")
    with pytest.raises(JetOrderError):
        total_derivative(parse("phi_xxxx"), "y")


def test_power_rule_symbolic_exponent():
    d = differentiate(parse("phi^theta"), Jet("phi"))
    assert d == parse("theta*phi^(theta-1)")


def test_derivative_in_jet():
    assert differentiate(parse("x*phi_x^2"), Jet("phi", 1)) == parse("2*x*phi_x")


def test_exp_ln_derivative_matches_finite_difference():
    e = exp_(ln_(param("lam")) / (param("theta") - 2))
    d = differentiate(e, Param("lam"))
    want = e / ((param("theta") - 2) * param("lam"))
    assert is_zero(d - want) is Verdict.ZERO
    rng = __import__("random").Random(3)
    for _ in range(10):
        lam, th = rng.uniform(0.5, 3), rng.uniform(0.05, 0.95)
        at = lambda l, th=th: {"lam": l, "theta": th}
        h = 1e-6 * lam
        fd = (eval_numeric(e, at(lam + h)) - eval_numeric(e, at(lam - h))) / (2 * h)
        assert abs(eval_numeric(d, at(lam)) - fd) <= 1e-7 * abs(fd)


def test_total_derivatives():
    assert total_derivative(parse("phi^2"), "x") == parse("2*phi*phi_x")
    assert total_derivative(parse("phi_x"), "t") == parse("phi_xt")
    got = total_derivative(parse("2*phi_x*phi_t + 2*phi*phi_tx"), "x")
    assert got == parse("2*phi_xx*phi_t + 4*phi_x*phi_tx + 2*phi*phi_txx")


def test_total_derivative_chained_fd_on_smooth_field():
    # phi = sin(x) exp(-t) + y^2; D_x(phi*phi_t) evaluated through the jet values
    e = total_derivative(parse("phi*phi_t"), "x")
    x, y, t = 0.7, 0.3, 0.4
    f = lambda x: math.sin(x) * math.exp(-t) + y * y
    ft = lambda x: -math.sin(x) * math.exp(-t)
    h = 1e-5
    fd = (f(x + h) * ft(x + h) - f(x - h) * ft(x - h)) / (2 * h)
    at = {"phi": f(x), "phi_x": math.cos(x) * math.exp(-t), "phi_t": ft(x),
          "phi_xt": -math.cos(x) * math.exp(-t), "x": x, "y": y, "t": t}
    assert abs(eval_numeric(e, at) - fd) < 1e-8


def test_substitute_gamma_into_theta():
    k = parse("(2*gamma^2 + 1)*alpha1^2 - 2*alpha3^2")
    out = substitute(k, Param("gamma"), parse("(theta-2)/(2*(theta-1))"))
    assert "gamma" not in to_text(out)
    assert expand_defined(k) == out


def test_substitute_phi_t_gives_zero():
    assert substitute(delta(), Jet("phi", 0, 0, 1), rhs()) == ZERO
    assert onshell(delta()) == ZERO


def test_is_zero_verdicts():
    assert is_zero(onshell(delta())) is Verdict.ZERO
    assert is_zero(parse("phi_x")) is Verdict.NONZERO


def test_is_zero_rotation_time_solution():
    phi = parse("(16/(h*(theta-2)^2*(x^2+y^2)))^(1/(theta-2))")
    res = subs(delta(), {Jet("phi"): phi, Jet("phi", 0, 0, 1): total_derivative(phi, "t"),
                         Jet("phi", 1): total_derivative(phi, "x"),
                         Jet("phi", 0, 1): total_derivative(phi, "y"),
                         Jet("phi", 2): total_derivative(total_derivative(phi, "x"), "x"),
                         Jet("phi", 0, 2): total_derivative(total_derivative(phi, "y"), "y")})
    assert zero_report(expand_defined(res)).verdict is Verdict.ZERO


def test_eval_delta_on_paraboloid():
    x, y, t = 1.0, 1.0, 2.0
    at = {"phi": -(x * x + y * y) / (16 * t), "phi_t": (x * x + y * y) / (16 * t * t),
          "phi_x": -x / (8 * t), "phi_y": -y / (8 * t), "phi_xx": -1 / (8 * t),
          "phi_yy": -1 / (8 * t), "h": 0.0, "theta": 0.5}
    d0 = subs(delta(), {Param("h"): ZERO})
    assert abs(eval_numeric(d0, at)) < 1e-12


def test_eval_fractional_power():
    assert eval_numeric(parse("phi^theta"), {"phi": 4.0, "theta": 0.5}) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        eval_numeric(parse("phi^theta"), {"phi": -1.0, "theta": 0.5})


def test_integer_lattice_power_of_negative_is_fine():
    assert eval_numeric(parse("phi^(-2)"), {"phi": -2.0}) == pytest.approx(0.25)


def test_constraints_fixed_values():
    c = Constraints().with_fixed(h=0)
    assert c.apply_fixed(parse("h*phi + 1")) == parse("1")
    assert c.without_fixed("h").fixed == {}


def test_const_and_pow_rational():
    assert eval_numeric(pow_(const(4), const(Fraction(1, 2))), {}) == pytest.approx(2.0)
    assert var("x") * 0 == ZERO
    assert THETA == Param("theta")
