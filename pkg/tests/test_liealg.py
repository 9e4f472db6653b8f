import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from porosym.liealg import (
    AlgebraElement, VectorField, adjoint_action, adjoint_series, adjoint_transform_matrix,
    classify, commutator, expand, invariance_residual, invariant_values, killing_form, prolong2,
    standard_generators, structure_constants, verify_generator, ad_matrix, trace, mat_mul,
)
from porosym.model import GAMMA
from porosym.suites import random_alpha, replay_sequential, round_trip
from porosym.symexpr import ZERO, expand_defined, Verdict, const, eval_numeric, is_zero, parse, var

E = AlgebraElement.basis
X1, X2, X3, X4, X5 = standard_generators()


def test_generators_as_published():
    assert X2.xi == (ZERO, ZERO, const(1), ZERO)
    assert X3.xi == (var("y"), -var("x"), ZERO, ZERO)
    assert X1[3] == parse("-tau*phi")
    assert is_zero(expand_defined(X1[3] + parse("phi/(theta-1)"))) is Verdict.ZERO


@pytest.mark.parametrize("i,j,want", [(1, 2, -E(2)), (3, 4, E(5)), (4, 4, AlgebraElement.of(0, 0, 0, 0, 0))])
def test_commutator_examples(i, j, want):
    gens = standard_generators()
    got = AlgebraElement(expand(commutator(gens[i - 1], gens[j - 1])))
    assert got == want


def test_structure_constant_entries():
    sc = structure_constants()
    assert sc.entry(1, 4, 4) == -GAMMA
    assert sc.entry(5, 3, 4) == const(1)
    assert sc.jacobi(1, 3, 4).is_zero()


def test_antisymmetry():
    sc = structure_constants()
    for i in range(1, 6):
        for j in range(1, 6):
            for k in range(1, 6):
                assert sc.entry(i, j, k) == -sc.entry(j, i, k)


@pytest.mark.parametrize("v", [X4, X2])
def test_prolongation_of_translations_vanishes(v):
    assert all(not c.terms for c in prolong2(v).values())


def test_invariance():
    assert not invariance_residual(X2).terms
    assert verify_generator(X1) is Verdict.ZERO
    x_dilation = VectorField((var("x"), ZERO, ZERO, ZERO))
    assert is_zero(invariance_residual(x_dilation)) is Verdict.NONZERO


def test_ad_matrix():
    m = ad_matrix(E(1))
    assert m[1][1] == const(1)
    zero = ad_matrix(AlgebraElement.of(0, 0, 0, 0, 0))
    assert all(not c.terms for row in zero for c in row)
    assert trace(mat_mul(m, m)) == parse("2*gamma^2 + 1")


@pytest.mark.parametrize("a,want", [
    (E(1) + E(3), "2*gamma^2 - 1"), (E(3), "-2"), (E(4), "0")])
def test_killing_values(a, want):
    assert killing_form(a, a) == parse(want)


def test_adjoint_action_examples():
    eps = parse("eps1")
    assert adjoint_action(2, eps, E(1)) == E(1) - E(2).scale(eps)
    assert adjoint_action(1, eps, E(4)) == E(4).scale(parse("exp(gamma*eps1)"))
    a = AlgebraElement.symbolic()
    for i in range(1, 6):
        assert adjoint_action(i, ZERO, a) == a


def test_transform_matrix():
    ident = adjoint_transform_matrix()
    assert all(ident[r][c] == const(int(r == c)) for r in range(5) for c in range(5))
    m = adjoint_transform_matrix(*[parse(f"eps{i}") for i in range(1, 6)])
    assert is_zero(m[0][1] - parse("-eps2*exp(eps1)")) is Verdict.ZERO


def test_invariant_values_examples():
    assert invariant_values(E(2) + E(3)).as_tuple()[1:] == (0, 1, 1, 1, 0, 1, 0)
    assert invariant_values(E(2) + E(3)).K == const(-2)
    for a4 in (Fraction(-3), Fraction(2, 7)):
        iv = invariant_values(E(4).scale(const(a4)))
        assert iv.as_tuple() == (ZERO, 0, 0, 0, 1, (a4 > 0) - (a4 < 0), 0, 0)
    iv = invariant_values(AlgebraElement.of(0, 0, 0, 0, 0))
    assert iv.P == iv.Q == 0 and iv.as_tuple()[1:] == (0,) * 7


@pytest.mark.parametrize("alpha,case,label", [
    ((1, 5, 2, 3, -1), 1, "X1+2*X3"),
    ((0, 3, 1, 2, -1), 2, "X2+X3"),
    ((0, 0, 0, 0, 2), 4, "2*X5"),
    ((1, 0, 0, 0, 0), 3, "X1"),
    ((0, 0, 1, 0, 0), 2, "X3"),
])
def test_classify_examples(alpha, case, label):
    c = classify(AlgebraElement.of(*alpha), Fraction(1, 2))
    assert (c.case, c.label) == (case, label)
    _, listed, agree = round_trip(AlgebraElement.of(*alpha))
    assert listed and agree


def test_classify_rejects():
    with pytest.raises(ValueError):
        classify(AlgebraElement.of(0, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        classify(E(1), Fraction(3, 2))


def test_classify_is_idempotent():
    rng = random.Random(7)
    for _ in range(200):
        c = classify(random_alpha(rng))
        again = classify(c.representative)
        assert again.representative == c.representative and again.case == c.case


def test_invariants_agree_within_a_class():
    """Equivalent elements share the scale-free invariants."""
    rng = random.Random(11)
    for _ in range(1000):
        a = random_alpha(rng)
        c = classify(a)
        if c.scale <= 0:
            continue  # negative scaling flips the sign-type invariants
        u, v = invariant_values(a), invariant_values(c.representative)
        assert (u.P, u.Q) == (v.P, v.Q)
        assert u.K * const(c.scale) ** 2 == v.K


def _num(e, at):
    return complex(eval_numeric(e, at)).real


@pytest.mark.parametrize("i", range(1, 6))
@pytest.mark.parametrize("j", range(1, 6))
def test_series_matches_closed_form(i, j):
    """Second-order series against closed form at eps=0.1, theta=0.4."""
    eps = Fraction(1, 10)
    at = {"theta": 0.4, "gamma": (0.4 - 2) / (2 * (0.4 - 1))}
    closed = adjoint_action(i, const(eps), E(j))
    series = adjoint_series(i, const(eps), E(j), order=2)
    exact = all(not (a - b).terms for a, b in zip(closed.alpha, series.alpha))
    for a, b in zip(closed.alpha, series.alpha):
        tol = 1e-10 if exact else 5e-4
        assert abs(_num(a, at) - _num(b, at)) < tol


def test_replay_matches_matrix_product():
    rng = random.Random(3)
    for _ in range(50):
        a = random_alpha(rng)
        c = classify(a)
        assert replay_sequential(a, c.eps, c.scale, c.gamma) == c.representative


rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))


@given(st.tuples(*[rationals] * 5), st.tuples(*[rationals] * 5))
def test_bracket_antisymmetric(u, v):
    br = structure_constants().bracket
    a, b = AlgebraElement.of(*u), AlgebraElement.of(*v)
    assert (br(a, b) + br(b, a)).is_zero()


def test_killing_closed_form_symbolic():
    a = AlgebraElement.symbolic()
    k = killing_form(a, a)
    assert k == parse("(2*gamma^2+1)*alpha1^2 - 2*alpha3^2")
    assert math.isclose(_num(k, {"gamma": 1.5, **{f"alpha{i}": 1.0 for i in range(1, 6)}}), 3.5)


def test_sign_invariant_flips_under_negative_scaling():
    """S = sgn(a2) is invariant under the group but not under A -> -A."""
    a = AlgebraElement.of(0, 3, -1, 0, 0)
    c = classify(a)
    assert c.scale == -1 and c.label == "-X2+X3"
    assert invariant_values(a).S == -invariant_values(c.representative).S
