"""Adjoint equation, nonlinear self-adjointness and Ibragimov conserved vectors.

The multiplier Psi is handled two ways.  As the opaque jet family ``psi``,
``psi_x``, ... it gives the adjoint equation as an identity.  As a concrete
Expr in (x, y, t, phi) it feeds the formal Lagrangian L = Psi * Delta for the
conserved-vector construction.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache

from .liealg import VectorField, standard_generators
from .model import H, OnShell, delta
from .symexpr import (
    Constraints, Expr, Verdict, add_all, as_expr, differentiate, expand_defined, jet,
    parse, subs, to_text, total_derivative, total_derivative_multi, zero_report,
)
from .symexpr.core import Jet, JetOrderError

PSI = jet("psi")


@dataclass(frozen=True)
class Multiplier:
    psi: Expr

    @classmethod
    def family(cls) -> "Multiplier":
        """Psi = (c1 y + c2) x + c3 y + c4."""
        return cls(parse("(c1*y + c2)*x + c3*y + c4"))

    @classmethod
    def opaque(cls) -> "Multiplier":
        return cls(PSI)

    @property
    def admissible(self) -> bool:
        return bool(self.psi.terms)


def formal_lagrangian(psi, h: Expr = H) -> Expr:
    psi = psi.psi if isinstance(psi, Multiplier) else as_expr(psi)
    return psi * delta(h)


def _phi_jets(e: Expr):
    return sorted(j for j in e.jets() if j.base == "phi")


def euler_lagrange(L: Expr) -> Expr:
    """sum over phi jets J of (-D)^J dL/dJ."""
    parts = []
    for j in _phi_jets(L):
        if j.order > 2:
            raise JetOrderError(f"Lagrangian of order {j.order} > 2")
        d = differentiate(L, j)
        if not d.terms:
            continue
        d = total_derivative_multi(d, j.nx, j.ny, j.nt)
        parts.append(-d if j.order % 2 else d)
    return add_all(parts)


def adjoint_expression(h: Expr = H) -> Expr:
    """Displayed form of the adjoint equation with an opaque Psi(x, y, t)."""
    s = parse("h*theta*phi^(theta-1)*psi - 2*phi*psi_xx - 2*phi*psi_yy - psi_t")
    return s if h is H else subs(s, {H: h})


def _specialize_psi(e: Expr, g: Expr) -> Expr:
    """Replace psi and its jets by G and its total derivatives."""
    table = {}
    for j in e.jets():
        if j.base == "psi":
            table[j] = total_derivative_multi(g, j.nx, j.ny, j.nt)
    return subs(e, table)


def self_adjointness_residual(psi, h: Expr = H) -> Expr:
    """S|_{Psi=G} - delta1 * Delta with delta1 = -dG/dphi."""
    g = psi.psi if isinstance(psi, Multiplier) else as_expr(psi)
    s = euler_lagrange(formal_lagrangian(PSI, h))
    s_g = _specialize_psi(s, g)
    delta1 = -differentiate(g, jet("phi"))
    return s_g - delta1 * delta(h)


# ---------------------------------------------------------------- conserved vectors

@dataclass(frozen=True)
class ConservedVector:
    eta_x: Expr
    eta_y: Expr
    eta_t: Expr
    source: str = ""

    def components(self) -> tuple:
        return (self.eta_x, self.eta_y, self.eta_t)

    def max_order(self) -> int:
        return max((j.order for c in self.components() for j in c.jets()), default=0)


def conserved_vector(v: VectorField, psi, h: Expr = H, source: str = "") -> ConservedVector:
    L = formal_lagrangian(psi, h)
    w = v.characteristic()
    d = lambda name, *n: differentiate(L, jet("phi", *n))
    lx, ly, lt = d("x", 1), d("y", 0, 1), d("t", 0, 0, 1)
    lxx, lyy = d("xx", 2), d("yy", 0, 2)
    ex = (v[0] * L + w * lx - w * total_derivative(lxx, "x")
          + lxx * total_derivative(w, "x"))
    ey = (v[1] * L + w * ly - w * total_derivative(lyy, "y")
          + lyy * total_derivative(w, "y"))
    et = v[2] * L + w * lt
    return ConservedVector(ex, ey, et, source)


def divergence(cv: ConservedVector) -> Expr:
    return add_all([total_derivative(cv.eta_x, "x"), total_derivative(cv.eta_y, "y"),
                    total_derivative(cv.eta_t, "t")])


def onshell_divergence(cv: ConservedVector, h: Expr = H) -> Expr:
    return OnShell(h).reduce(divergence(cv))


def divergence_report(cv: ConservedVector, h: Expr = H, constraints: Constraints | None = None,
                      seed: int = 0):
    r = expand_defined(onshell_divergence(cv, h))
    return zero_report(r, constraints or Constraints(), seed=seed)


# ---------------------------------------------------------------- printed vectors

_P = "(c1*x*y + c2*x + c3*y + c4)"

PRINTED = {
    1: (f"2*gamma*x*{_P}*(phi*phi_xx + phi_x^2) + 2*{_P}*(t*phi*phi_xt + gamma*y*phi*phi_xy"
        f" + t*phi_t*phi_x + gamma*y*phi_y*phi_x + 2*tau*phi*phi_x) + 2*gamma*(c3*y + c4)*phi*phi_x"
        f" - 2*(c1*y + c2)*(2*t*phi*phi_t + gamma*y*phi*phi_y + 2*phi^2)",
        f"2*{_P}*(gamma*(x*phi*phi_xx + y*phi_y^2 + x*phi_y*phi_x + y*phi*phi_xy + phi*phi_x)"
        f" + t*phi_t*phi_y + tau*phi*phi_y + t*phi*phi_tx + tau*phi*phi_x)"
        f" - 2*phi*(c1*x + c3)*(gamma*y*phi_y + t*phi_t + gamma*x*phi_x + tau*phi)",
        f"-{_P}*(tau*phi + gamma*x*phi_x + gamma*y*phi_y + t*phi_t)"),
    2: (f"{_P}*(2*phi_x*phi_t + 2*phi*phi_tx) - 2*(c1*y + c2)*phi",
        f"{_P}*(2*phi_y*phi_t + 2*phi*phi_ty) - 2*(c1*x + c3)*phi",
        f"-{_P}*phi_t"),
    3: (f"{_P}*(-2*x*phi*phi_xy + 2*y*phi*phi_xx + 2*y*phi_x^2 - 2*x*phi_x*phi_y)"
        f" - 2*phi*(c3*y + c4)*phi_y - 2*y*phi*(c1*y + c2)*phi_x",
        f"{_P}*(-2*x*phi*phi_yy + 2*y*phi*phi_xy - 2*x*phi_y^2 + 2*y*phi_y*phi_x)"
        f" + 2*phi*(c2*x + c4)*phi_x + 2*x*phi*(c1*x + c3)*phi_y",
        f"{_P}*(-y*phi_x + x*phi_y)"),
    4: (f"{_P}*(2*phi_x^2 + 2*phi*phi_xx) - 2*phi*phi_x*(c1*y + c2)",
        f"2*{_P}*(phi_x*phi_y + phi*phi_xy) - 2*phi*phi_x*(c1*x + c3)",
        f"-{_P}*phi_x"),
    5: (f"2*{_P}*(phi_x*phi_y + phi*phi_xy) - 2*phi*phi_y*(c1*y + c3)",
        f"{_P}*(2*phi_y^2 + 2*phi*phi_yy) - 2*phi*phi_y*(c1*x + c3)",
        f"-{_P}*phi_y"),
}


@lru_cache(maxsize=None)
def printed_eta(i: int) -> ConservedVector:
    ex, ey, et = (parse(s) for s in PRINTED[i])
    return ConservedVector(ex, ey, et, f"printed X{i}")


def constructed_eta(i: int, h: Expr = H) -> ConservedVector:
    return conserved_vector(standard_generators()[i - 1], Multiplier.family(), h,
                            source=f"constructed X{i}")


# ---------------------------------------------------------------- comparison

class Difference(str, enum.Enum):
    IDENTICAL = "identical"
    MULTIPLE_OF_DELTA = "multiple of the equation"
    ONSHELL_ZERO = "vanishes on solutions"
    MISMATCH = "transcription mismatch"


@dataclass
class ComponentDiff:
    name: str
    raw: Expr
    onshell: Expr
    kind: Difference
    factor: Expr | None = None

    def describe(self) -> str:
        if self.kind is Difference.MULTIPLE_OF_DELTA:
            return f"{self.name}: {self.kind.value} (factor {to_text(self.factor)})"
        if self.kind is Difference.MISMATCH:
            return f"{self.name}: {self.kind.value}; difference {to_text(self.onshell)}"
        return f"{self.name}: {self.kind.value}"


def _is_zero(e: Expr, seed: int = 0) -> bool:
    e = expand_defined(e)
    return not e.terms or zero_report(e, Constraints(), seed=seed).verdict is Verdict.ZERO


def _delta_factor(d: Expr, h: Expr) -> Expr | None:
    """q with d == q * Delta when d is linear in phi_t, else None."""
    q = differentiate(d, Jet("phi", 0, 0, 1))
    if not q.terms or any(j.base == "phi" and j.nt for j in q.jets()):
        return None
    return q if _is_zero(d - q * delta(h)) else None


def compare_vectors(a: ConservedVector, b: ConservedVector, h: Expr = H) -> list:
    out = []
    shell = OnShell(h)
    for name, ca, cb in zip(("eta_x", "eta_y", "eta_t"), a.components(), b.components()):
        raw = ca - cb
        red = shell.reduce(raw)
        if _is_zero(raw):
            out.append(ComponentDiff(name, raw, red, Difference.IDENTICAL))
            continue
        q = _delta_factor(raw, h)
        if q is not None:
            out.append(ComponentDiff(name, raw, red, Difference.MULTIPLE_OF_DELTA, q))
        elif _is_zero(red):
            out.append(ComponentDiff(name, raw, red, Difference.ONSHELL_ZERO))
        else:
            out.append(ComponentDiff(name, raw, red, Difference.MISMATCH))
    return out


# ---------------------------------------------------------------- potential systems

GAUGES = (
    ("Coulomb", "J1_x + J2_y + J3_z = 0"),
    ("spatial", "J^i = 0 for one i in 1..3"),
    ("Poincare", "x*J1 + y*J2 + z*J3 = 0"),
    ("Lorentz", "J1_t - J2_x - J3_y = 0"),
    ("Cronstrom", "t*J1 - x*J2 - y*J3 = 0"),
)


@dataclass(frozen=True)
class PotentialSystem:
    index: int
    lhs: tuple
    rhs: tuple
    gauges: tuple = field(default=GAUGES)

    def render(self) -> str:
        lines = [f"Y{self.index}:"]
        lines += [f"  {l} = {to_text(r)}" for l, r in zip(self.lhs, self.rhs)]
        lines.append("  gauge options: " + "; ".join(f"{n} ({c})" for n, c in self.gauges))
        return "\n".join(lines)


def potential_system(i: int) -> PotentialSystem:
    cv = printed_eta(i)
    return PotentialSystem(i, ("J3_x - J2_y", "J1_y - J3_t", "J2_t - J1_x"),
                           (cv.eta_t, cv.eta_x, cv.eta_y))
