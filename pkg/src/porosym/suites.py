"""Verification suites shared by the command line and the acceptance tests.

Each suite returns a Report: a list of named checks, each with a status, a
detail string and an anchor naming the published item it checks.
"""
from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from . import transcribed as T
from .conslaw import (
    PSI, Difference, Multiplier, adjoint_expression, compare_vectors, constructed_eta,
    divergence_report, euler_lagrange, formal_lagrangian, printed_eta, self_adjointness_residual,
)
from .liealg import (
    AlgebraElement, VectorField, ad_matrix, adjoint_action, adjoint_matrix,
    adjoint_transform_matrix, apply_row, classify, eps_symbols, in_optimal_list,
    invariance_residual, invariant_values, killing_form,
    parse_transcribed, standard_generators, structure_constants, verify_generator,
)
from .model import H, THETA
from .solutions import (
    FAMILIES, MAPS, ODES, map_residual, ode_residual, pde_residual, verify_family,
)
from .symexpr import (
    ZERO, Constraints, Param, Verdict, const, pow_, expand_defined, parse, subs, to_text, zero_report,
)


class Status(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    UNKNOWN = "unknown"
    DOCUMENTED = "documented-discrepancy"


@dataclass
class Check:
    name: str
    status: Status
    detail: str = ""
    anchor: str = ""


@dataclass
class Report:
    section: str
    checks: list = field(default_factory=list)

    def add(self, name, status, detail="", anchor=""):
        self.checks.append(Check(name, Status(status), detail, anchor))
        return self.checks[-1]

    def extend(self, other: "Report") -> "Report":
        self.checks.extend(other.checks)
        return self

    def failures(self, expected: dict | None = None) -> list:
        """Checks that are not pass and not an expected non-pass outcome."""
        expected = expected or {}
        return [c for c in self.checks
                if c.status is not Status.PASS and expected.get(c.name) != c.status.value]

    def counts(self) -> dict:
        out = {s.value: 0 for s in Status}
        for c in self.checks:
            out[c.status.value] += 1
        return out

    def to_json(self) -> str:
        return json.dumps({"section": self.section,
                           "checks": [{"name": c.name, "verdict": c.status.value,
                                       "detail": c.detail, "paper_ref": c.anchor}
                                      for c in self.checks]}, indent=2)

    def render(self) -> str:
        lines = [f"== {self.section}"]
        for c in self.checks:
            lines.append(f"[{c.status.value:>22}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        cnt = self.counts()
        lines.append("   " + ", ".join(f"{k} {v}" for k, v in cnt.items() if v))
        return "\n".join(lines)


def load_expectations() -> dict:
    text = resources.files("porosym").joinpath("data/expectations.json").read_text()
    return json.loads(text)["expected"]


def _zero(e, constraints=None, seed=0, **kw):
    return zero_report(expand_defined(e), constraints or Constraints(), seed=seed, **kw)


def _short(e, n=160) -> str:
    s = to_text(e)
    return s if len(s) <= n else s[:n] + " ..."


# ---------------------------------------------------------------- tables

def commutation_cells() -> dict:
    sc = structure_constants()
    return {(i, j): AlgebraElement(tuple(sc.entry(i, j, k) for k in range(1, 6)))
            for i in range(1, 6) for j in range(1, 6)}


def check_commutation() -> Report:
    rep = Report("commutation table")
    cells = commutation_cells()
    bad = []
    for (i, j), got in cells.items():
        want = T.COMMUTATORS.get((i, j), {})
        for k in range(1, 6):
            if got.coeff(k) != parse(want.get(k, "0")):
                bad.append(f"[X{i},X{j}] X{k}: {got.coeff(k)} vs {want.get(k, '0')}")
    rep.add("tables/commutation", "fail" if bad else "pass",
            "; ".join(bad) or f"{len(cells)}/25 entries", "commutation table")
    sc = structure_constants()
    jac = [(i, j, k) for i in range(1, 6) for j in range(1, 6) for k in range(1, 6)
           if not sc.jacobi(i, j, k).is_zero()]
    rep.add("tables/jacobi", "fail" if jac else "pass",
            f"violations {jac}" if jac else "125/125 triples", "commutation table")
    return rep


def adjoint_cells(gamma=None) -> dict:
    eps = parse("eps")
    kw = {} if gamma is None else {"gamma": gamma}
    return {(i, j): adjoint_action(i, eps, AlgebraElement.basis(j), **kw)
            for i in range(1, 6) for j in range(1, 6)}


def check_adjoint_tables() -> Report:
    rep = Report("adjoint representation")
    eps = parse("eps")
    bad = []
    for (i, j), got in adjoint_cells().items():
        want = T.ADJOINT[(i, j)]
        bad += [f"({i},{j}) X{k}" for k in range(1, 6) if got.coeff(k) != parse(want.get(k, "0"))]
    rep.add("adjoint/table", "fail" if bad else "pass", ", ".join(bad) or "25/25 entries",
            "adjoint representation table")

    A = AlgebraElement.symbolic()
    bad = []
    for i, row in T.COEFFICIENT_ACTION.items():
        got = apply_row(A, adjoint_matrix(i, eps))
        bad += [f"eps X{i}: alpha{k + 1}" for k in range(5) if got.alpha[k] != parse(row[k])]
    rep.add("adjoint/coefficient-action", "fail" if bad else "pass", ", ".join(bad) or "5/5 rows",
            "coefficient action table")

    bad = []
    for i, m in T.M_MATRICES.items():
        got = adjoint_matrix(i, eps_symbols()[i - 1])
        bad += [f"M{i}[{r}][{c}]" for r in range(5) for c in range(5)
                if got[r][c] != parse(m[r][c])]
    rep.add("adjoint/single-matrices", "fail" if bad else "pass", ", ".join(bad) or "5 matrices",
            "single-generator matrices")

    m = adjoint_transform_matrix(*eps_symbols())
    bad = [f"[{r}][{c}]" for r in range(5) for c in range(5)
           if m[r][c] != parse_transcribed(T.TRANSFORM_MATRIX[r][c])]
    rep.add("adjoint/transform-matrix", "fail" if bad else "pass", ", ".join(bad) or "25/25 entries",
            "general adjoint transformation matrix")

    got = apply_row(A, m)
    diffs = [k for k in range(5) if got.alpha[k] != parse_transcribed(T.TRANSFORMED_ELEMENT[k])]
    fixed5 = parse_transcribed(f"exp(gamma*eps1)*({T.TRANSFORMED_ELEMENT[4]})")
    if diffs == [4] and not (got.alpha[4] - fixed5).terms:
        rep.add("adjoint/transformed-element", "documented-discrepancy",
                "printed X5 coefficient lacks the exp(gamma*eps1) factor; matrix product gives "
                + _short(got.alpha[4]), "transformed general element")
    else:
        rep.add("adjoint/transformed-element", "pass" if not diffs else "fail",
                f"mismatched coefficients {[d + 1 for d in diffs]}" if diffs else "",
                "transformed general element")

    B = AlgebraElement.symbolic("beta")
    lam = structure_constants().bracket(B, A)
    bad = [f"lambda{k + 1}" for k in range(5) if lam.alpha[k] != parse(T.LAMBDA[k])]
    rep.add("adjoint/lambda", "fail" if bad else "pass", ", ".join(bad) or "5/5 components",
            "first-order invariance conditions")

    M = ad_matrix(A)
    bad = [f"[{r}][{c}]" for r in range(5) for c in range(5) if M[r][c] != parse(T.AD_MATRIX[r][c])]
    rep.add("adjoint/ad-matrix", "fail" if bad else "pass", ", ".join(bad) or "25/25 entries",
            "Killing form proof matrix")
    rep.extend(check_killing())
    return rep


def check_killing() -> Report:
    rep = Report("Killing form")
    A = AlgebraElement.symbolic()
    diff = killing_form(A, A) - parse(T.KILLING)
    rep.add("adjoint/killing", "pass" if not diff.terms else "fail",
            "trace(ad o ad) - K = " + to_text(diff), "Killing form theorem")
    return rep


def invariant_rows() -> list:
    """Computed (label, alpha, K, M, N, P, Q, R, S, T) for each published row."""
    out = []
    for row in T.INVARIANT_ROWS:
        label, alpha = row[0], row[1]
        iv = invariant_values(AlgebraElement.of(*alpha))
        out.append((label, alpha) + iv.as_tuple())
    return out


def _expected_cell(v, alpha):
    if isinstance(v, str) and v.startswith("a") and v[1:].isdigit():
        a = alpha[int(v[1:]) - 1]
        return (a > 0) - (a < 0)
    return v


def check_invariants() -> Report:
    rep = Report("invariant values")
    bad = []
    for want, got in zip(T.INVARIANT_ROWS, invariant_rows()):
        label, alpha = want[0], want[1]
        if got[2] != parse(want[2]):
            bad.append(f"{label}: K")
        for name, w, g in zip("MNPQRST", want[3:], got[3:]):
            if Fraction(_expected_cell(w, alpha)) != Fraction(g):
                bad.append(f"{label}: {name}")
    rep.add("tables/invariants", "fail" if bad else "pass",
            ", ".join(bad) or f"{len(T.INVARIANT_ROWS)}/12 rows", "invariant value table")
    return rep


# ---------------------------------------------------------------- symmetries

def check_symmetries(seed: int = 0) -> Report:
    rep = Report("point symmetries")
    for i, g in enumerate(standard_generators(), 1):
        v = verify_generator(g, seed=seed)
        rep.add(f"symmetries/X{i}", "pass" if v is Verdict.ZERO else
                ("unknown" if v is Verdict.UNKNOWN else "fail"),
                f"on-shell residual {v.value}", "symmetry generators")
    printed = VectorField(tuple(parse(s) for s in T.GENERATORS_PRINTED[1]))
    r = _zero(invariance_residual(printed), seed=seed)
    rep.add("symmetries/X1-printed", "documented-discrepancy" if r.verdict is not Verdict.ZERO else "pass",
            "printed gamma*d_x + gamma*d_y is not a symmetry; gamma*x*d_x + gamma*y*d_y is",
            "symmetry generators")
    return rep


# ---------------------------------------------------------------- solutions

_MAP_CONS = Constraints(nonzero=frozenset({"alpha2", "c1", "c2", "c3", "b2"}),
                        positive=frozenset({"F"}))


def _status(v: Verdict) -> str:
    return {Verdict.ZERO: "pass", Verdict.NONZERO: "fail", Verdict.UNKNOWN: "unknown"}[v]


def s6_kernel_analysis(seed: int = 0) -> dict:
    """Replace the prefactor (theta-1)^(theta/(theta-1)) by a symbol p and test p in {1, -1}."""
    fam = FAMILIES["S6"]
    text = fam.text.replace("*(theta-1)^(theta/(theta-1))", "*p")
    phi = parse(text, params=("p",))
    res = subs(pde_residual(phi), {H: ZERO})
    cons = Constraints(nonzero=frozenset({"c1"}))
    return {pv: _zero(subs(res, {Param("p"): parse(pv)}), cons, seed=seed).verdict
            for pv in ("1", "-1")}


def check_solutions(seed: int = 0, samples: int = 20) -> Report:
    rep = Report("invariant solutions")
    for fid, fam in FAMILIES.items():
        r = verify_family(fid, seed=seed, samples=samples)
        fixed = ", ".join(f"{k}={v}" for k, v in r.fixed.items()) or "h, theta symbolic"
        detail = f"{r.verdict.value} ({fixed})"
        if r.report.numeric_skipped:
            detail += "; numeric sampling skipped: every point hits a negative base"
        elif r.report.samples:
            detail += f"; max relative sample {r.report.max_rel:.1e}"
        rep.add(f"solutions/{fid}", _status(r.verdict), detail, fam.provenance)
    s3 = FAMILIES["S3"]
    r = verify_family("S3", h_symbolic=True, seed=seed)
    src = _zero(pde_residual(s3.phi) - H * pow_(s3.phi, THETA),
                s3.constraints().without_fixed("h"), seed=seed).verdict
    rep.add("solutions/S3/h", "documented-discrepancy" if r.verdict is not Verdict.ZERO else "pass",
            f"with the source kept the residual is {r.verdict.value}; residual minus h*phi^theta "
            f"is {src.value}", s3.provenance)
    k = s6_kernel_analysis(seed)
    rep.add("solutions/S6/kernel", "documented-discrepancy",
            f"with the prefactor as a symbol p the residual is {k['1'].value} at p=1 and "
            f"{k['-1'].value} at p=-1; the family solves the equation only for p=-1",
            FAMILIES["S6"].provenance)

    for cid, ode in ODES.items():
        if not ode.solution:
            continue
        g = parse(ode.solution, params=("u", "v", "w"))
        res = ode_residual(ode, g)
        cons = Constraints(positive=frozenset({"lam"}))
        r = _zero(res, cons, seed=seed, allow_numeric_skip=True)
        if r.verdict is Verdict.ZERO:
            rep.add(f"ode/{cid}", "pass", "displayed G solves the reduced equation", "reduced equations")
            continue
        r0 = _zero(subs(res, {H: ZERO}), cons, seed=seed, allow_numeric_skip=True)
        if r0.verdict is Verdict.ZERO:
            rep.add(f"ode/{cid}", "documented-discrepancy",
                    "solves only with h=0; residual " + _short(r.expr), "reduced equations")
        else:
            rep.add(f"ode/{cid}", _status(r.verdict), _short(r.expr), "reduced equations")

    for cid, m in MAPS.items():
        r = _zero(map_residual(m), _MAP_CONS, seed=seed, allow_numeric_skip=True)
        if r.verdict is Verdict.ZERO or m.corrected_text is None:
            detail = "chain rule reproduces the reduced equation" if r.verdict is Verdict.ZERO else \
                "exact rewrite inconclusive and the negative-base kernels defeat numeric sampling"
            rep.add(f"maps/{cid}", _status(r.verdict), detail, "similarity reductions")
            continue
        rc = _zero(map_residual(m.corrected()), _MAP_CONS, seed=seed, allow_numeric_skip=True)
        rep.add(f"maps/{cid}", "documented-discrepancy" if rc.verdict is Verdict.ZERO else _status(r.verdict),
                f"printed reduced equation fails; corrected form {m.corrected_text!r} is {rc.verdict.value}",
                "similarity reductions")
    return rep


# ---------------------------------------------------------------- optimal system

CLASSIFY_EXAMPLES = (
    ((1, 0, 0, 0, 0), 3, "X1"),
    ((0, 0, 1, 0, 0), 2, "X3"),
)


def replay_sequential(a: AlgebraElement, eps, scale, gamma) -> AlgebraElement:
    """Apply X5 first and X1 last one generator at a time, then scale."""
    out = a
    for i in (5, 4, 3, 2, 1):
        e = eps[i - 1]
        if e.terms:
            out = adjoint_action(i, e, out, const(gamma))
    return out.scale(const(scale))


def round_trip(a: AlgebraElement, theta=Fraction(1, 2)) -> tuple:
    """(classification, representative in the list, sequential replay agrees)."""
    c = classify(a, theta)
    again = replay_sequential(a, c.eps, c.scale, c.gamma)
    agree = all(not (x - y).terms for x, y in zip(again.alpha, c.representative.alpha))
    return c, in_optimal_list(c.representative), agree


def random_alpha(rng: random.Random) -> AlgebraElement:
    while True:
        vals = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) if rng.random() < 0.75 else Fraction(0)
                for _ in range(5)]
        if any(vals):
            return AlgebraElement.of(*vals)


def check_optimal_system(n: int = 200, seed: int = 0) -> Report:
    rep = Report("optimal system")
    for alpha, case, label in CLASSIFY_EXAMPLES:
        c = classify(AlgebraElement.of(*alpha))
        ok = c.case == case and c.label == label
        rep.add(f"classify/{''.join(map(str, alpha))}", "pass" if ok else "fail",
                f"case {c.case}, {c.label}", "optimal system theorem")
    rng = random.Random(seed)
    bad = []
    for _ in range(n):
        a = random_alpha(rng)
        _, listed, agree = round_trip(a)
        if not (listed and agree):
            bad.append(a.label())
    rep.add("classify/round-trip", "fail" if bad else "pass",
            f"{n - len(bad)}/{n} random elements" + (f"; first failures {bad[:3]}" if bad else ""),
            "optimal system theorem")
    return rep


# ---------------------------------------------------------------- conservation

def check_conservation(h_zero: bool = True, seed: int = 0) -> Report:
    rep = Report("adjoint equation and conservation laws")
    s = euler_lagrange(formal_lagrangian(PSI))
    d = s - adjoint_expression()
    rep.add("conservation/adjoint-equation", "pass" if not d.terms else "fail",
            "Euler-Lagrange of Psi*Delta matches the displayed adjoint equation"
            if not d.terms else "difference " + _short(d), "adjoint equation")

    fam = Multiplier.family()
    res = self_adjointness_residual(fam)
    ident = _zero(res - parse("h*theta*phi^(theta-1)") * fam.psi, seed=seed).verdict
    at0 = _zero(self_adjointness_residual(fam, ZERO), seed=seed).verdict
    rep.add("conservation/self-adjointness/h0", _status(at0), "residual at h=0 is " + at0.value,
            "nonlinear self-adjointness")
    rep.add("conservation/self-adjointness/h",
            "documented-discrepancy" if ident is Verdict.ZERO else "fail",
            "residual equals h*theta*phi^(theta-1)*Psi, so the claim needs h=0",
            "nonlinear self-adjointness")

    h = ZERO if h_zero else H
    for i in range(1, 6):
        cv = constructed_eta(i, h)
        r = divergence_report(cv, h, seed=seed)
        name = f"conservation/X{i}" + ("" if h_zero else "/h")
        if r.verdict is Verdict.ZERO:
            rep.add(name, "pass", "on-shell divergence Zero", "conserved vectors")
        elif not h_zero and r.verdict is Verdict.NONZERO:
            rep.add(name, "documented-discrepancy", "on-shell divergence " + _short(r.expr),
                    "conserved vectors")
        else:
            rep.add(name, _status(r.verdict), "on-shell divergence " + _short(r.expr), "conserved vectors")
    for i in range(1, 6):
        diffs = compare_vectors(constructed_eta(i, ZERO), printed_eta(i), ZERO)
        mism = [x for x in diffs if x.kind is Difference.MISMATCH]
        rep.add(f"conservation/printed-X{i}", "documented-discrepancy" if mism else "pass",
                "; ".join(x.describe() if x.kind is not Difference.MISMATCH
                          else f"{x.name}: {x.kind.value}; difference {_short(x.onshell, 120)}"
                          for x in diffs),
                "conserved vectors")
    return rep


SCOPES = {
    "symmetries": lambda seed: check_symmetries(seed),
    "solutions": lambda seed: check_solutions(seed),
    "adjoint": lambda seed: check_adjoint_tables().extend(check_optimal_system(seed=seed)),
    "conservation": lambda seed: check_conservation(True, seed),
}


def run_scope(scope: str, seed: int = 0, h_zero: bool = True) -> Report:
    if scope == "all":
        rep = Report("all")
        rep.extend(check_commutation()).extend(check_invariants())
        for name in SCOPES:
            rep.extend(run_scope(name, seed, h_zero))
        return rep
    if scope == "conservation":
        return check_conservation(h_zero, seed)
    return SCOPES[scope](seed)
