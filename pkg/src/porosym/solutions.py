"""Closed-form invariant solutions, similarity reductions and the solution-mapping groups.

All formulas are kept as text in the parser grammar; the registry parses them
once.  ``k`` (rotation rate of X1 + k X3) and ``kappa`` (= c3/c1 in the
parameter-analysis reduction) are different parameters.  ``lam`` is the
similarity variable X^2 + Y^2 (not the diffusivity).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

from .model import H, THETA, T, X as XV, Y as YV
from .symexpr import (
    ZERO, Constraints, Expr, Verdict, ZeroReport, add_all, as_expr, cos_, differentiate, exp_,
    param, parse, pow_, sin_, subs, zero_report,
)
from .symexpr.core import Jet, Param, Var

_PARAMS = ("u", "v", "w")


def _p(text: str) -> Expr:
    return parse(text, params=_PARAMS)


# ---------------------------------------------------------------- the PDE on candidate solutions

def pde_residual(phi: Expr, h: Expr = H) -> Expr:
    """phi_t - 2 phi_x^2 - 2 phi phi_xx - 2 phi_y^2 - 2 phi phi_yy + h phi^theta."""
    phi = as_expr(phi)
    if any(type(a) is Jet for a in phi.free_atoms()):
        raise ValueError("a candidate solution must not contain jet variables")
    x, y, t = Var("x"), Var("y"), Var("t")
    px, py = differentiate(phi, x), differentiate(phi, y)
    pxx, pyy = differentiate(px, x), differentiate(py, y)
    h = as_expr(h)
    source = h * pow_(phi, THETA) if h.terms else ZERO
    return add_all([differentiate(phi, t), -2 * px * px, -2 * phi * pxx, -2 * py * py,
                    -2 * phi * pyy, source])


# ---------------------------------------------------------------- families

@dataclass(frozen=True)
class SolutionFamily:
    id: str
    text: str
    fixed: dict = field(default_factory=dict)
    nonzero: frozenset = frozenset()
    notes: str = ""
    provenance: str = ""
    numeric_domain: bool = True

    @property
    def phi(self) -> Expr:
        return subs(_parsed(self.text), _uvw_table())

    def constraints(self, **extra) -> Constraints:
        c = Constraints(fixed={k: Fraction(v) for k, v in self.fixed.items()},
                        nonzero=self.nonzero)
        return c.with_fixed(**extra) if extra else c


@lru_cache(maxsize=None)
def _parsed(text: str) -> Expr:
    return _p(text)


_U = "((theta-2)^2*c1^2 + 4*c3^2*(theta-1)^2)"
_V = "(c4*(theta-2)*c1 - 2*c3*c5*(theta-1))"
_W = "(c5*(theta-2)*c1 + 2*c3*c4*(theta-1))"

FAMILIES = {
    "S1": SolutionFamily(
        "S1", "-(x^2+y^2)/(16*t)", fixed={"h": 0},
        notes="negative density; solves the equation only without the source term",
        provenance="rotation-dilation reduction, G = -lam/16"),
    "S2": SolutionFamily(
        "S2", "(16/(h*(theta-2)^2*(x^2+y^2)))^(1/(theta-2))",
        notes="stationary, singular at the origin",
        provenance="rotation-time reduction"),
    "S3": SolutionFamily(
        "S3", "(alpha5*d1-alpha4*d2)/(2*alpha2*(d1^2+d2^2))"
              "*(d2*x-d2*alpha4*t/alpha2-d1*y+d1*alpha5*t/alpha2)",
        fixed={"h": 0}, nonzero=frozenset({"alpha2", "d2"}),
        notes="plane wave; the residual with a source is exactly h*phi^theta",
        provenance="travelling-wave reduction"),
    "S4": SolutionFamily(
        "S4", "exp(ln(16*c3^2/(h*(theta-2)^2*((c3*x-c5)^2+(c3*y+c4)^2)))/(theta-2))",
        nonzero=frozenset({"c3"}),
        notes="S2 shifted to the rotation centre (c5/c3, -c4/c3)",
        provenance="parameter reduction with c1 = 0"),
    "S5": SolutionFamily(
        "S5", "-((u*x+2*v*(theta-1))^2+(u*y+2*w*(theta-1))^2)/(16*u^2*t)",
        fixed={"h": 0}, nonzero=frozenset({"c1"}),
        notes="S1 shifted; needs h = 0",
        provenance="parameter reduction with c2 = 0"),
    "S6": SolutionFamily(
        "S6", "((c1*(theta-2)*x+2*c4*(theta-1))^2+(c1*(theta-2)*y+2*c5*(theta-1))^2)"
              "/(16*c1*(c1*t+c2)*(theta-2)^2)*(theta-1)^(theta/(theta-1))",
        fixed={"h": 0}, nonzero=frozenset({"c1"}), numeric_domain=False,
        notes="(theta-1)^(theta/(theta-1)) has a negative base for 0 < theta < 1",
        provenance="parameter reduction with c3 = 0"),
}


def family(fid: str) -> SolutionFamily:
    try:
        return FAMILIES[fid]
    except KeyError:
        raise KeyError(f"unknown family {fid!r}; expected one of {sorted(FAMILIES)}") from None


@dataclass
class FamilyReport:
    id: str
    verdict: Verdict
    residual: Expr
    report: ZeroReport
    fixed: dict


def verify_family(fid: str, params: dict | None = None, *, h_symbolic: bool = False,
                  seed: int = 0, samples: int = 20) -> FamilyReport:
    """Zero test of the family's PDE residual under its constraint set.

    ``h_symbolic`` drops a registered ``h = 0`` so the source discrepancy shows.
    ``params`` fixes further parameters to concrete values.
    """
    fam = family(fid)
    cons = fam.constraints()
    if h_symbolic:
        cons = cons.without_fixed("h")
    if params:
        for name, val in params.items():
            lo_hi = cons.intervals.get(name)
            if lo_hi and not lo_hi[0] < val < lo_hi[1]:
                raise ValueError(f"{name}={val} outside {lo_hi}")
            if name in cons.nonzero and val == 0:
                raise ValueError(f"{name} must be nonzero")
        cons = cons.with_fixed(**params)
    res = pde_residual(fam.phi)
    rep = zero_report(res, cons, seed=seed, samples=samples,
                      allow_numeric_skip=not fam.numeric_domain)
    return FamilyReport(fid, rep.verdict, rep.expr, rep, dict(cons.fixed))


# ---------------------------------------------------------------- reduced ODEs

@dataclass(frozen=True)
class ReducedODE:
    case_id: str
    text: str
    solution: str | None = None
    h_zero: bool = False

    @property
    def residual(self) -> Expr:
        return _parsed(self.text)


_ROT_DIL = ("-h*(theta-1)*G^theta + 8*lam*(theta-1)*Gp^2 + 8*(theta-1)*G*Gp"
            " + lam*(theta-2)*Gp + 8*lam*(theta-1)*G*Gpp + G")
_ROT_DIL_H0 = ("8*lam*(theta-1)*Gp^2 + 8*(theta-1)*G*Gp + lam*(theta-2)*Gp"
               " + 8*lam*(theta-1)*G*Gpp + G")

ODES = {
    "rot-dil": ReducedODE("rot-dil", _ROT_DIL),
    "rot-dil/h0": ReducedODE("rot-dil/h0", _ROT_DIL_H0, "-lam/16", h_zero=True),
    "rot-time": ReducedODE("rot-time", "-h*G^theta + 8*(lam*Gp^2 + G*(Gp + lam*Gpp))",
                           "(16/(h*lam*(theta-2)^2))^(1/(theta-2))"),
    "dil": ReducedODE("dil", "-h*(theta-1)*G^theta + 8*lam*(theta-1)*Gp^2"
                             " + (8*(theta-1)*G + lam*(theta-2))*Gp"
                             " + G*(1 + 8*lam*(theta-1)*Gpp)"),
    "travel": ReducedODE("travel", "-alpha2*h*G^theta + 2*alpha2*(1+(d1/d2)^2)*Gp^2"
                                   " + (alpha4 - d1/d2*alpha5)*Gp"
                                   " + 2*alpha2*(1+(d1/d2)^2)*G*Gpp",
                         "(alpha5*d1-alpha4*d2)/(2*alpha2*(d1^2+d2^2))*d2*lam", h_zero=True),
    "c1=0": ReducedODE("c1=0", "8*lam*Gp^2 + 8*G*Gp + 8*lam*G*Gpp - h*G^theta",
                       "exp(ln(16/(h*(theta-2)^2*lam))/(theta-2))"),
    "c2=0": ReducedODE("c2=0", _ROT_DIL),
    "c2=0/h0": ReducedODE("c2=0/h0", _ROT_DIL_H0, "-lam/16", h_zero=True),
    "c3=0": ReducedODE("c3=0", "-h*G^theta + 8*lam*Gp^2 + 8*G*Gp - c1*lam*(theta-2)*Gp"
                               " - c1*G + 8*lam*G*Gpp",
                       "c1*(theta-1)*lam/16", h_zero=True),
}


def reduced_ode(case_id: str) -> ReducedODE:
    try:
        return ODES[case_id]
    except KeyError:
        raise KeyError(f"unknown reduction {case_id!r}; expected one of {sorted(ODES)}") from None


def ode_residual(ode: ReducedODE, g: Expr) -> Expr:
    """Substitute G(lam) and its derivatives into the ODE residual."""
    g = as_expr(g)
    lam = Param("lam")
    g1 = differentiate(g, lam)
    g2 = differentiate(g1, lam)
    return subs(ode.residual, {Param("G"): g, Param("Gp"): g1, Param("Gpp"): g2})


# ---------------------------------------------------------------- similarity maps

@dataclass(frozen=True)
class SimilarityMap:
    """phi = prefactor * F(X, Y); ``reduced`` is the displayed PDE for F.

    ``scale`` is the factor with pde_residual(phi) = scale * reduced after the
    map is substituted back.
    """
    case_id: str
    x_text: str
    y_text: str
    prefactor_text: str
    reduced_text: str
    scale_text: str
    corrected_text: str | None = None

    @property
    def X(self) -> Expr:
        return _parsed(self.x_text)

    @property
    def Y(self) -> Expr:
        return _parsed(self.y_text)

    @property
    def prefactor(self) -> Expr:
        return _parsed(self.prefactor_text)

    @property
    def reduced(self) -> Expr:
        return _parsed(self.reduced_text)

    @property
    def scale(self) -> Expr:
        return _parsed(self.scale_text)

    def corrected(self) -> "SimilarityMap":
        """The map with the displayed reduced PDE replaced by the derived one."""
        if self.corrected_text is None:
            return self
        return replace(self, reduced_text=self.corrected_text, corrected_text=None)


_G = "((theta-2)/(2*(theta-1)))"
_KL = "k*ln(t)"
_C3T = "c3*t/c2"
_KAPPA_L = "kappa*ln(t)"

MAPS = {
    "rot-dil": SimilarityMap(
        "rot-dil",
        f"t^(-{_G})*(x*sin({_KL}) + y*cos({_KL}))",
        f"t^(-{_G})*(x*cos({_KL}) - y*sin({_KL}))",
        "t^(-1/(theta-1))",
        "2*h*(theta-1)*F^theta - 4*(theta-1)*(F_X^2+F_Y^2) + 2*k*(theta-1)*(Y*F_X - X*F_Y)"
        " - (theta-2)*(X*F_X + Y*F_Y) - 4*((theta-1)*(F_XX+F_YY) + 1/2)*F",
        "t^(-1/(theta-1)-1)/(2*(theta-1))"),
    "rot-time": SimilarityMap(
        "rot-time",
        "y*cos(t/b2) + x*sin(t/b2)",
        "x*cos(t/b2) - y*sin(t/b2)",
        "1",
        "2*(F_X^2+F_Y^2) + 2*F*(F_XX+F_YY) - 1/b2*(Y*F_X - X*F_Y) - h*F^theta",
        "-1"),
    "dil": SimilarityMap(
        "dil",
        f"x*t^(-{_G})",
        f"y*t^(-{_G})",
        "t^(-1/(theta-1))",
        "-2*h*(theta-1)*F^theta + 4*(theta-1)*(F_XX+F_YY)*F + 2*F"
        " + 4*(theta-1)*(F_X^2+F_Y^2) + (theta-2)*(X*F_X + Y*F_Y)",
        "-t^(-1/(theta-1)-1)/(2*(theta-1))"),
    "travel": SimilarityMap(
        "travel",
        "x - alpha4*t/alpha2",
        "y - alpha5*t/alpha2",
        "1",
        "2*alpha2*F*(F_XX+F_YY) + 2*alpha2*(F_X^2+F_Y^2 - h*F^theta/2)"
        " + alpha4*F_X + alpha5*F_Y",
        "-1/alpha2"),
    "c1=0": SimilarityMap(
        "c1=0",
        f"((c3*x-c5)*sin({_C3T}) + (c3*y+c4)*cos({_C3T}))/c3",
        f"((c3*x-c5)*cos({_C3T}) - (c3*y+c4)*sin({_C3T}))/c3",
        "1",
        "h*F^theta - 2*(F_X^2+F_Y^2) + c3/c2*(Y*F_X - X*F_Y) - 2*(F_XX+F_YY)*F",
        "1"),
    "c2=0": SimilarityMap(
        "c2=0",
        f"t^(-{_G})*((u*x+2*v*(theta-1))*cos({_KAPPA_L}) - (u*y+2*w*(theta-1))*sin({_KAPPA_L}))/u",
        f"t^(-{_G})*((u*y+2*w*(theta-1))*cos({_KAPPA_L}) + (u*x+2*v*(theta-1))*sin({_KAPPA_L}))/u",
        "t^(-1/(theta-1))",
        "h*F^theta - 2*(F_X^2+F_Y^2) + (X*F_X + Y*F_Y)/(2*(theta-1))"
        " - 2*(F_XX+F_YY - 1/(theta-1))*F - (kappa*Y + X/2)*F_X + (kappa*X - Y/2)*F_Y",
        "t^(-1/(theta-1)-1)",
        corrected_text="h*F^theta - 2*(F_X^2+F_Y^2) + (X*F_X + Y*F_Y)/(2*(theta-1))"
        " - 2*(F_XX+F_YY)*F - F/(theta-1) - (kappa*Y + X/2)*F_X + (kappa*X - Y/2)*F_Y"),
    "c3=0": SimilarityMap(
        "c3=0",
        f"(c1*(theta-2)*x + 2*c4*(theta-1))*(c1*t+c2)^(-{_G})*(theta-1)^(-{_G})/(c1*(theta-2))",
        f"(c1*(theta-2)*y + 2*c5*(theta-1))*(c1*t+c2)^(-{_G})*(theta-1)^(-{_G})/(c1*(theta-2))",
        "(theta-1)*(c1*t+c2)^(-1/(theta-1))",
        "h*F^theta - 2*(F_X^2+F_Y^2) - c1*(theta-2)/2*(X*F_X + Y*F_Y)"
        " - 2*(F_XX+F_YY)*F - c1*F",
        "1"),
}


def similarity_map(case_id: str) -> SimilarityMap:
    try:
        return MAPS[case_id]
    except KeyError:
        raise KeyError(f"unknown reduction {case_id!r}; expected one of {sorted(MAPS)}") from None


def _uvw_table() -> dict:
    return {Param("u"): _p(_U), Param("v"): _p(_V), Param("w"): _p(_W),
            Param("kappa"): _p("c3/c1")}


_F_NAMES = {"F": ("F_X", "F_Y"), "F_X": ("F_XX", "F_XY"), "F_Y": ("F_XY", "F_YY")}


def _chain_d(e: Expr, s: Var, xs: Expr, ys: Expr) -> Expr:
    """d/ds of an expression in (x, y, t, F, F_X, F_Y) with F = F(X(x,y,t), Y(x,y,t))."""
    parts = [differentiate(e, s)]
    for name, (nx, ny) in _F_NAMES.items():
        a = Param(name)
        if a in e.free_atoms():
            d = differentiate(e, a)
            parts.append(d * (param(nx) * xs + param(ny) * ys))
    return add_all(parts)


def map_residual(m: SimilarityMap, h: Expr = H) -> Expr:
    """pde_residual(prefactor * F(X, Y)) - scale * reduced, with X, Y replaced by the map."""
    table = _uvw_table()
    X, Y = subs(m.X, table), subs(m.Y, table)
    x, y, t = Var("x"), Var("y"), Var("t")
    d = {s: (differentiate(X, s), differentiate(Y, s)) for s in (x, y, t)}
    phi = subs(m.prefactor, table) * param("F")
    D = lambda e, s: _chain_d(e, s, *d[s])
    px, py = D(phi, x), D(phi, y)
    lhs = add_all([D(phi, t), -2 * px * px, -2 * phi * D(px, x), -2 * py * py,
                   -2 * phi * D(py, y), h * pow_(phi, THETA)])
    rhs = subs(m.scale, table) * subs(m.reduced, {**table, Param("X"): X, Param("Y"): Y})
    return lhs - rhs


# ---------------------------------------------------------------- group actions on solutions

def apply_group(i: int, eps, phi: Expr) -> Expr:
    """New solution obtained from ``phi`` by the one-parameter group of X_i.

    X1 uses exp(-eps/(theta-1)) on phi, and X3 is the exact rotation
    f(x cos eps - y sin eps, x sin eps + y cos eps).
    """
    e = as_expr(eps)
    phi = as_expr(phi)
    x, y, t = Var("x"), Var("y"), Var("t")
    if i == 1:
        g = _p("(theta-2)/(2*(theta-1))")
        sx = exp_(-g * e)
        return exp_(-e * _p("1/(theta-1)")) * subs(phi, {x: XV * sx, y: YV * sx, t: T * exp_(-e)})
    if i == 2:
        return subs(phi, {t: T - e})
    if i == 3:
        c, s = cos_(e), sin_(e)
        return subs(phi, {x: XV * c - YV * s, y: XV * s + YV * c})
    if i == 4:
        return subs(phi, {x: XV - e})
    if i == 5:
        return subs(phi, {y: YV - e})
    raise ValueError("group index must be in 1..5")
