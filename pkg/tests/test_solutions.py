from fractions import Fraction

import pytest

from porosym.model import H
from porosym.solutions import (
    FAMILIES, MAPS, ODES, apply_group, family, map_residual, ode_residual, pde_residual,
    reduced_ode, similarity_map, verify_family,
)
from porosym.suites import _MAP_CONS, s6_kernel_analysis
from porosym.symexpr import (
    ZERO, Constraints, Verdict, const, is_zero, parse, pow_, subs, var, zero_report,
)
from porosym.symexpr.core import Param, Var

S1 = FAMILIES["S1"].phi


def test_zero_field():
    assert not pde_residual(ZERO, ZERO).terms


@pytest.mark.parametrize("fid", ["S1", "S2", "S3", "S4", "S5"])
def test_families_solve_the_equation(fid):
    assert verify_family(fid).verdict is Verdict.ZERO


def test_s2_s4_with_h_symbolic():
    for fid in ("S2", "S4"):
        r = verify_family(fid)
        assert r.verdict is Verdict.ZERO and "h" not in r.fixed


def test_plane_wave_residual_is_the_source():
    s3 = FAMILIES["S3"]
    res = pde_residual(s3.phi) - H * pow_(s3.phi, parse("theta"))
    cons = s3.constraints().without_fixed("h")
    assert is_zero(res, cons) is Verdict.ZERO
    assert verify_family("S3", h_symbolic=True).verdict is Verdict.NONZERO


def test_s6_needs_the_prefactor_minus_one():
    """With the prefactor replaced by a symbol p the residual vanishes only at p = -1."""
    k = s6_kernel_analysis()
    assert k == {"1": Verdict.NONZERO, "-1": Verdict.ZERO}
    r = verify_family("S6", h_symbolic=True)
    assert r.verdict is not Verdict.ZERO


def test_s6_numeric_sampling_is_skipped():
    r = verify_family("S6")
    assert r.report.numeric_skipped and r.report.samples == 0


def test_verify_family_params():
    assert verify_family("S4", {"c3": 2, "c4": 1}).verdict is Verdict.ZERO
    with pytest.raises(ValueError):
        verify_family("S4", {"c3": 0})
    with pytest.raises(KeyError):
        family("S9")


def test_reduced_ode_texts():
    rt = reduced_ode("rot-time").residual
    assert rt == parse("-h*G^theta + 8*(lam*Gp^2 + G*(Gp + lam*Gpp))")
    assert ODES["dil"].residual == ODES["rot-dil"].residual
    assert ODES["rot-dil/h0"].residual == subs(ODES["rot-dil"].residual, {H: ZERO})
    with pytest.raises(KeyError):
        reduced_ode("nope")


def test_ode_solutions():
    lam = parse("lam")
    assert not ode_residual(ODES["rot-dil/h0"], -lam / 16).terms
    g = parse(ODES["rot-time"].solution)
    assert is_zero(ode_residual(ODES["rot-time"], g), Constraints(positive=frozenset({"lam"}))) \
        is Verdict.ZERO


def test_linear_g_leaves_only_the_source():
    g = parse("c1*(theta-1)*lam/16")
    res = ode_residual(ODES["c3=0"], g)
    assert is_zero(res + H * pow_(g, parse("theta")), allow_numeric_skip=True) is Verdict.ZERO
    assert not subs(res, {H: ZERO}).terms or \
        is_zero(subs(res, {H: ZERO}), allow_numeric_skip=True) is Verdict.ZERO


def test_travel_map_variables():
    m = similarity_map("travel")
    assert m.X == parse("x - alpha4*t/alpha2")
    assert m.Y == parse("y - alpha5*t/alpha2")


def test_rotation_map_at_time_zero():
    m = similarity_map("rot-time")
    t0 = {Var("t"): ZERO}
    assert subs(m.X, t0) == var("y") and subs(m.Y, t0) == var("x")


@pytest.mark.parametrize("cid", ["rot-dil", "rot-time", "dil", "travel", "c1=0"])
def test_maps_reduce_to_the_displayed_equation(cid):
    r = zero_report(map_residual(MAPS[cid]), _MAP_CONS, allow_numeric_skip=True)
    assert r.verdict is Verdict.ZERO


def test_misprinted_map_and_its_correction():
    m = MAPS["c2=0"]
    assert zero_report(map_residual(m), _MAP_CONS, allow_numeric_skip=True).verdict is not Verdict.ZERO
    assert zero_report(map_residual(m.corrected()), _MAP_CONS,
                       allow_numeric_skip=True).verdict is Verdict.ZERO


def test_apply_group_translations():
    eps = parse("eps1")
    assert apply_group(4, eps, S1) == parse("-((x-eps1)^2+y^2)/(16*t)")
    assert apply_group(2, eps, S1) == parse("-(x^2+y^2)/(16*(t-eps1))")
    with pytest.raises(ValueError):
        apply_group(6, eps, S1)


def test_dilated_s2_is_a_solution():
    phi = apply_group(1, Fraction(3, 10), FAMILIES["S2"].phi)
    assert is_zero(pde_residual(phi)) is Verdict.ZERO


@pytest.mark.parametrize("fid", ["S1", "S2", "S3"])
@pytest.mark.parametrize("i", range(1, 6))
@pytest.mark.parametrize("eps", [Fraction(1, 4), Fraction(-2, 3)])
def test_group_maps_solutions_to_solutions(fid, i, eps):
    fam = FAMILIES[fid]
    phi = apply_group(i, eps, fam.phi)
    cons = fam.constraints()
    assert is_zero(pde_residual(phi), cons) is Verdict.ZERO
