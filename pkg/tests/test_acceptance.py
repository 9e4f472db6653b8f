"""Acceptance criteria 1-10, each at its stated tolerance.

Every test prints one ``criterion N: PASS|FAIL`` line.  Criteria that cannot be
met are left failing; the reasons are kept in the decisions ledger.
"""
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from porosym import numgrid as ng
from porosym.conslaw import (
    PSI,
    Difference,
    Multiplier,
    adjoint_expression,
    compare_vectors,
    constructed_eta,
    divergence_report,
    euler_lagrange,
    formal_lagrangian,
    printed_eta,
    self_adjointness_residual,
)
from porosym.liealg import standard_generators, verify_generator
from porosym.model import H
from porosym.solutions import FAMILIES, verify_family
from porosym.suites import (
    check_adjoint_tables,
    check_commutation,
    check_invariants,
    check_killing,
    random_alpha,
    round_trip,
)
from porosym.symexpr import (
    ZERO,
    DomainError,
    Var,
    Verdict,
    differentiate,
    eval_numeric,
    expand_defined,
    is_zero,
    parse,
)
from porosym.symexpr.zerotest import sample_point


@pytest.fixture
def say(capsys):
    def emit(n, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    return emit


def test_criterion_1_tables(say):
    start = time.perf_counter()
    reps = [check_commutation(), check_adjoint_tables(), check_invariants()]
    elapsed = time.perf_counter() - start
    # documented misprints are reported separately; everything else must pass
    bad = [c.name for r in reps for c in r.checks
           if c.status.value not in ("pass", "documented-discrepancy")]
    names = {c.name for r in reps for c in r.checks}
    ok = not bad and elapsed < 5.0 and "tables/invariants" in names
    say(1, ok, f"{sum(len(r.checks) for r in reps)} checks, failures {bad}, {elapsed:.2f} s")
    assert not bad
    assert elapsed < 5.0


def test_criterion_2_killing_form(say):
    rep = check_killing()
    ok = rep.checks[0].status.value == "pass"
    say(2, ok, rep.checks[0].detail)
    assert ok


def test_criterion_3_symmetries(say):
    start = time.perf_counter()
    verdicts = [verify_generator(g) for g in standard_generators()]
    elapsed = time.perf_counter() - start
    ok = all(v is Verdict.ZERO for v in verdicts) and elapsed < 30
    say(3, ok, f"{[v.value for v in verdicts]} in {elapsed:.1f} s")
    assert ok


def test_criterion_4_optimal_round_trip(say):
    rng = random.Random(20240)
    bad = []
    for _ in range(1000):
        a = random_alpha(rng)
        _, listed, agree = round_trip(a, Fraction(1, 2))
        if not (listed and agree):
            bad.append(a.label())
    say(4, not bad, f"{1000 - len(bad)}/1000 exact round trips")
    assert not bad


def _numeric_residual(fid, n=100, seed=0):
    """Max relative PDE residual at n admissible points, assembled from numeric derivatives."""
    fam = FAMILIES[fid]
    phi = fam.phi
    x, y, t = Var("x"), Var("y"), Var("t")
    px, py = differentiate(phi, x), differentiate(phi, y)
    parts = {"phi": phi, "pt": differentiate(phi, t), "px": px, "py": py,
             "pxx": differentiate(px, x), "pyy": differentiate(py, y)}
    cons = fam.constraints()
    atoms = sorted(set().union(*(e.free_atoms() for e in parts.values())) | {H.terms[0][0][0][0]})
    rng = np.random.default_rng(seed)
    worst, got, tries = 0.0, 0, 0
    while got < n and tries < 50 * n:
        tries += 1
        pt = sample_point(atoms, cons, rng)
        at = {getattr(a, "name", str(a)): v for a, v in pt.items()}
        at.update({k: float(v) for k, v in fam.fixed.items()})
        try:
            v = {k: float(eval_numeric(expand_defined(e), at)) for k, e in parts.items()}
            src = at["h"] * v["phi"] ** at["theta"] if at["h"] else 0.0
        except (DomainError, ZeroDivisionError, ValueError):
            continue
        if isinstance(src, complex) or not np.isfinite(list(v.values())).all():
            continue
        terms = [v["pt"], -2 * v["px"] ** 2, -2 * v["phi"] * v["pxx"], -2 * v["py"] ** 2,
                 -2 * v["phi"] * v["pyy"], src]
        worst = max(worst, abs(sum(terms)) / max(1.0, max(abs(q) for q in terms)))
        got += 1
    return got, worst


def test_criterion_5_solution_residuals(say):
    sym = {fid: verify_family(fid, samples=100).verdict for fid in FAMILIES}
    symbolic_h = {fid: verify_family(fid, h_symbolic=True, samples=100).verdict for fid in ("S2", "S4")}
    numeric = {fid: _numeric_residual(fid) for fid in FAMILIES}
    s6 = verify_family("S6", samples=100)
    skipped = s6.report.numeric_skipped and numeric["S6"][0] == 0
    ok_sym = all(v is Verdict.ZERO for v in sym.values()) and all(
        v is Verdict.ZERO for v in symbolic_h.values())
    ok_num = all(got == 100 and w < 1e-9 for fid, (got, w) in numeric.items() if fid != "S6")
    ok = ok_sym and ok_num and skipped
    detail = ", ".join(f"{k}={v.value}" for k, v in sym.items())
    detail += "; numeric " + ", ".join(f"{k}:{g}pts/{w:.1e}" for k, (g, w) in numeric.items())
    detail += f"; S6 numeric skip reported={skipped}"
    say(5, ok, detail)
    assert ok_num
    assert skipped
    assert ok_sym, "S6 residual under h=0 is not Zero (see ledger)"


def test_criterion_6_adjoint_equation(say):
    d = euler_lagrange(formal_lagrangian(PSI)) - adjoint_expression()
    say(6, not d.terms, "Euler-Lagrange(Psi*Delta) - S")
    assert not d.terms


def test_criterion_7_self_adjointness(say):
    fam = Multiplier.family()
    ident = is_zero(self_adjointness_residual(fam) - parse("h*theta*phi^(theta-1)") * fam.psi)
    at0 = is_zero(self_adjointness_residual(fam, ZERO))
    ok = ident is Verdict.ZERO and at0 is Verdict.ZERO
    say(7, ok, f"identity {ident.value}, h=0 {at0.value}; reported as documented-discrepancy")
    assert ok


def test_criterion_8_conservation(say):
    div = [divergence_report(constructed_eta(i, ZERO), ZERO).verdict for i in range(1, 6)]
    kinds = []
    explained = True
    for i in range(1, 6):
        for d in compare_vectors(constructed_eta(i, ZERO), printed_eta(i), ZERO):
            kinds.append(f"X{i}.{d.name}:{d.kind.name}")
            if d.kind is Difference.MISMATCH and not d.onshell.terms:
                explained = False
            if d.kind is Difference.MULTIPLE_OF_DELTA and d.factor is None:
                explained = False
    ok = all(v is Verdict.ZERO for v in div) and explained
    say(8, ok, f"divergences {[v.value for v in div]}; "
               f"{sum('MISMATCH' in k for k in kinds)} mismatched components with exact differences")
    assert ok


def test_criterion_9_numerics(say):
    cfg = ng.SimConfig(steps=100, h=2.0)
    start = time.perf_counter()
    drift = ng.stationarity_drift("S2", ng.Grid2D.annulus(64), cfg, t0=1.0)
    elapsed = time.perf_counter() - start

    s3_params = {"alpha2": 1.0, "alpha4": 0.5, "alpha5": 1.5, "d1": 1.0, "d2": 2.0}
    grid = ng.Grid2D.box(1.0, 2.0, 1.0, 2.0, 32)
    f0 = ng.sample("S3", grid, 1.0, s3_params)
    dt = 0.5 * ng.stable_dt(f0.values, grid)
    cfg3 = ng.SimConfig(params=s3_params)
    conv = ng.dt_convergence("S3", grid, cfg3, 1.0, 1.0 + 100 * dt, dt)
    sp = ng.spatial_ratio("S2", ng.Grid2D.annulus(33), 1.0, h=2.0)

    parts = {"drift": drift < 1e-3 and elapsed < 10,
             "dt-ratio": 1.6 <= conv["ratio"] <= 2.4,
             "dx-ratio": 3.4 <= sp["ratio"] <= 4.6}
    say(9, all(parts.values()),
        f"drift {drift:.1e} in {elapsed:.1f} s; S3 errors {conv['err_dt']:.1e}/{conv['err_half']:.1e} "
        f"ratio {conv['ratio']:.2f}; spatial ratio {sp['ratio']:.2f}")
    assert parts["drift"] and parts["dx-ratio"]
    assert parts["dt-ratio"], "S3 is reproduced to round-off, so no dt error exists to halve (see ledger)"


def test_criterion_10_property_suites(say):
    import test_properties as props
    suites = [props.test_normalization_idempotent, props.test_print_parse_round_trip,
              props.test_derivative_matches_central_difference, props.test_jacobi_identity,
              props.test_group_law]
    failed = []
    for run in suites:
        try:
            run()
        except Exception as exc:  # noqa: BLE001 - report every suite before failing
            failed.append(f"{run.__name__}: {type(exc).__name__}")
    say(10, not failed, f"{len(suites) - len(failed)}/{len(suites)} suites green at 10^4 cases"
        + (f"; {failed}" if failed else ""))
    assert not failed
