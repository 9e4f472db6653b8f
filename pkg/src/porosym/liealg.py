"""The five-dimensional symmetry algebra and its optimal system.

Generators (gamma = (theta-2)/(2(theta-1)), tau = 1/(theta-1))::

    X1 = gamma x d_x + gamma y d_y + t d_t - tau phi d_phi
    X2 = d_t,   X3 = y d_x - x d_y,   X4 = d_x,   X5 = d_y

Matrix conventions.  Adjoint matrices act on row vectors of coefficients:
``alpha . M_i`` is the coefficient vector of ``Ad(exp(eps X_i)) sum alpha_j X_j``,
so ``alpha . (M5 M4 M3 M2 M1)`` applies X5 first and X1 last.  The ad-matrix
has column j equal to the coordinates of ``[X_j, A]``; this is ``-ad(A)`` in
the usual convention, which leaves ``trace(ad A ad B)`` unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .model import GAMMA, H, OnShell, PHI, T, TAU, X, Y, delta
from .symexpr import (
    ONE, ZERO, Constraints, Expr, ExprError, Verdict, add_all, as_expr, collect, const, cos_,
    differentiate, exp_, expand_defined, is_zero, jet, ln_, param, parse, sin_, subs,
    total_derivative,
)
from .symexpr.core import Jet, Param, Var
from . import transcribed

DIM = 5
COORDS = (X, Y, T, PHI)
_ATOMS = (Var("x"), Var("y"), Var("t"), Jet("phi"))


class ExpansionError(ExprError):
    """A vector field is not in the span of the basis."""


@dataclass(frozen=True)
class VectorField:
    """xi1 d_x + xi2 d_y + xi3 d_t + xi4 d_phi with coefficients in (x, y, t, phi)."""
    xi: tuple

    def __post_init__(self):
        xi = tuple(as_expr(c) for c in self.xi)
        if len(xi) != 4:
            raise ValueError("a vector field has four coefficients")
        for c in xi:
            if any(isinstance(j, Jet) and j.order > 0 for j in c.jets()):
                raise ValueError("vector field coefficients may not contain derivative jets")
        object.__setattr__(self, "xi", xi)

    def __getitem__(self, k):
        return self.xi[k]

    def __add__(self, other):
        return VectorField(tuple(a + b for a, b in zip(self.xi, other.xi)))

    def __sub__(self, other):
        return VectorField(tuple(a - b for a, b in zip(self.xi, other.xi)))

    def scale(self, c) -> "VectorField":
        c = as_expr(c)
        return VectorField(tuple(c * a for a in self.xi))

    def act(self, f: Expr) -> Expr:
        """Apply the field as a first-order operator to a function of (x, y, t, phi)."""
        return add_all([c * differentiate(f, a) for c, a in zip(self.xi, _ATOMS) if c.terms])

    def is_zero(self) -> bool:
        return all(not c.terms for c in self.xi)

    def characteristic(self) -> Expr:
        """Q = xi4 - xi1 phi_x - xi2 phi_y - xi3 phi_t."""
        return (self.xi[3] - self.xi[0] * jet("phi", 1) - self.xi[1] * jet("phi", 0, 1)
                - self.xi[2] * jet("phi", 0, 0, 1))


def _check_polynomial(v: VectorField) -> None:
    for c in v.xi:
        for powers in collect(c, _ATOMS):
            if powers[3] > 1 or min(powers) < 0:
                raise ValueError(f"coefficient {c} is not polynomial and linear in phi")


@lru_cache(maxsize=None)
def standard_generators() -> tuple:
    """X1..X5 with gamma and tau left as symbols."""
    g, tau = GAMMA, TAU
    gens = (
        VectorField((g * X, g * Y, T, -tau * PHI)),
        VectorField((ZERO, ZERO, ONE, ZERO)),
        VectorField((Y, -X, ZERO, ZERO)),
        VectorField((ONE, ZERO, ZERO, ZERO)),
        VectorField((ZERO, ONE, ZERO, ZERO)),
    )
    for v in gens:
        _check_polynomial(v)
    return gens


def commutator(v: VectorField, w: VectorField) -> VectorField:
    return VectorField(tuple(v.act(w[k]) - w.act(v[k]) for k in range(4)))


def _coordinate_rows(v: VectorField) -> dict:
    rows = {}
    for k, c in enumerate(v.xi):
        for powers, coeff in collect(c, _ATOMS).items():
            rows[(k, powers)] = coeff
    return rows


@lru_cache(maxsize=None)
def _pivots(basis: tuple) -> tuple:
    """One (component, monomial) row per basis field on which the basis is triangular
    with unit diagonal; found greedily, the basis being small."""
    rows = [_coordinate_rows(b) for b in basis]
    chosen = []
    for i, r in enumerate(rows):
        for key, c in sorted(r.items(), key=lambda kv: repr(kv[0])):
            if c == ONE and all(key not in rows[j] for j in range(len(rows)) if j != i):
                chosen.append(key)
                break
        else:
            raise ExpansionError(f"no pivot coordinate for basis field {i + 1}")
    return tuple(chosen)


def expand(w: VectorField, basis: Sequence[VectorField] | None = None) -> tuple:
    """Coordinates of ``w`` in ``basis`` (default: the standard generators)."""
    basis = tuple(basis or standard_generators())
    rows = _coordinate_rows(w)
    coords = tuple(rows.get(key, ZERO) for key in _pivots(basis))
    rest = w
    for c, b in zip(coords, basis):
        if c.terms:
            rest = rest - b.scale(c)
    if not rest.is_zero():
        raise ExpansionError(f"commutator leaves the span: remainder {rest.xi}")
    return coords


# ---------------------------------------------------------------- elements

@dataclass(frozen=True)
class AlgebraElement:
    """sum alpha_i X_i; ``alpha`` is stored 0-based, ``coeff(i)`` is 1-based."""
    alpha: tuple

    def __post_init__(self):
        a = tuple(as_expr(c) for c in self.alpha)
        if len(a) != DIM:
            raise ValueError(f"an algebra element has {DIM} coefficients")
        object.__setattr__(self, "alpha", a)

    @classmethod
    def of(cls, *vals) -> "AlgebraElement":
        return cls(tuple(Fraction(v) if isinstance(v, (int, str)) else v for v in vals))

    @classmethod
    def basis(cls, i: int) -> "AlgebraElement":
        return cls(tuple(ONE if k == i - 1 else ZERO for k in range(DIM)))

    @classmethod
    def symbolic(cls, prefix: str = "alpha") -> "AlgebraElement":
        return cls(tuple(param(f"{prefix}{i}") for i in range(1, DIM + 1)))

    def coeff(self, i: int) -> Expr:
        return self.alpha[i - 1]

    def __add__(self, other):
        return AlgebraElement(tuple(a + b for a, b in zip(self.alpha, other.alpha)))

    def __sub__(self, other):
        return AlgebraElement(tuple(a - b for a, b in zip(self.alpha, other.alpha)))

    def __neg__(self):
        return AlgebraElement(tuple(-a for a in self.alpha))

    def scale(self, c) -> "AlgebraElement":
        c = as_expr(c)
        return AlgebraElement(tuple(c * a for a in self.alpha))

    def is_zero(self) -> bool:
        return all(not a.terms for a in self.alpha)

    def concrete(self) -> tuple:
        try:
            return tuple(a.const_value() for a in self.alpha)
        except ExprError:
            raise ValueError("coefficients must be concrete rationals") from None

    def subs(self, mapping) -> "AlgebraElement":
        return AlgebraElement(tuple(subs(a, mapping) for a in self.alpha))

    def field(self) -> VectorField:
        out = VectorField((ZERO,) * 4)
        for c, g in zip(self.alpha, standard_generators()):
            if c.terms:
                out = out + g.scale(c)
        return out

    def label(self) -> str:
        parts = []
        for i, a in enumerate(self.alpha, 1):
            if not a.terms:
                continue
            s = str(a)
            if s == "1":
                parts.append(f"X{i}")
            elif s == "-1":
                parts.append(f"-X{i}")
            elif a.is_single_term():
                parts.append(f"{s}*X{i}")
            else:
                parts.append(f"({s})*X{i}")
        return "+".join(parts).replace("+-", "-") or "0"


# ---------------------------------------------------------------- structure constants

@dataclass(frozen=True)
class StructureConstants:
    """c[i][j][k]: coefficient of X_k in [X_i, X_j] (stored 0-based)."""
    c: tuple

    def entry(self, i: int, j: int, k: int) -> Expr:
        return self.c[i - 1][j - 1][k - 1]

    def bracket(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        out = [[] for _ in range(DIM)]
        for i, ai in enumerate(a.alpha):
            if not ai.terms:
                continue
            for j, bj in enumerate(b.alpha):
                if not bj.terms:
                    continue
                for k in range(DIM):
                    ck = self.c[i][j][k]
                    if ck.terms:
                        out[k].append(ai * bj * ck)
        return AlgebraElement(tuple(add_all(t) for t in out))

    def jacobi(self, i: int, j: int, k: int) -> AlgebraElement:
        e = AlgebraElement.basis
        br = self.bracket
        return (br(e(i), br(e(j), e(k))) + br(e(j), br(e(k), e(i)))
                + br(e(k), br(e(i), e(j))))

    def at(self, gamma) -> tuple:
        """Nested tuple of concrete values at a numeric gamma."""
        g = as_expr(gamma)
        return tuple(tuple(tuple(subs(x, {GAMMA: g}).const_value() for x in row) for row in plane)
                     for plane in self.c)


@lru_cache(maxsize=None)
def structure_constants() -> StructureConstants:
    gens = standard_generators()
    c = tuple(tuple(expand(commutator(gi, gj)) for gj in gens) for gi in gens)
    return StructureConstants(c)


# ---------------------------------------------------------------- prolongation

def prolong2(v: VectorField) -> dict:
    """Prolonged coefficients keyed "x", "y", "t", "xx", "yy"."""
    xi1, xi2, xi3, xi4 = v.xi
    px, py, pt = jet("phi", 1), jet("phi", 0, 1), jet("phi", 0, 0, 1)
    out = {}
    for s in "xyt":
        out[s] = (total_derivative(xi4, s) - px * total_derivative(xi1, s)
                  - py * total_derivative(xi2, s) - pt * total_derivative(xi3, s))
    for s in "xy":
        ps = lambda other: jet("phi", *(int(s == "x") + int(other == "x"),
                                        int(s == "y") + int(other == "y"),
                                        int(other == "t")))
        out[s + s] = (total_derivative(out[s], s) - ps("x") * total_derivative(xi1, s)
                      - ps("y") * total_derivative(xi2, s) - ps("t") * total_derivative(xi3, s))
    return out


def invariance_residual(v: VectorField, h: Expr = H, *, expand_params: bool = True) -> Expr:
    """On-shell value of Pr^(2) v applied to the equation."""
    d = delta(h)
    pr = prolong2(v)
    pairs = [
        (v[0], X), (v[1], Y), (v[2], T), (v[3], PHI),
        (pr["x"], jet("phi", 1)), (pr["y"], jet("phi", 0, 1)), (pr["t"], jet("phi", 0, 0, 1)),
        (pr["xx"], jet("phi", 2)), (pr["yy"], jet("phi", 0, 2)),
    ]
    r = add_all([c * differentiate(d, a) for c, a in pairs if c.terms])
    r = OnShell(h).reduce(r)
    return expand_defined(r) if expand_params else r


def verify_generator(v: VectorField, h: Expr = H, seed: int = 0) -> Verdict:
    return is_zero(invariance_residual(v, h), Constraints(), seed=seed)


# ---------------------------------------------------------------- adjoint machinery

def ad_matrix(a: AlgebraElement, sc: StructureConstants | None = None) -> tuple:
    """M[k][j] = coefficient of X_k in [X_j, A]."""
    sc = sc or structure_constants()
    cols = [sc.bracket(AlgebraElement.basis(j + 1), a).alpha for j in range(DIM)]
    return tuple(tuple(cols[j][k] for j in range(DIM)) for k in range(DIM))


def mat_mul(a, b) -> tuple:
    n, m, p = len(a), len(b), len(b[0])
    return tuple(tuple(add_all([a[i][k] * b[k][j] for k in range(m)
                                if a[i][k].terms and b[k][j].terms])
                       for j in range(p)) for i in range(n))


def trace(m) -> Expr:
    return add_all([m[i][i] for i in range(len(m))])


def killing_form(a: AlgebraElement, b: AlgebraElement) -> Expr:
    sc = structure_constants()
    return trace(mat_mul(ad_matrix(a, sc), ad_matrix(b, sc)))


def killing_closed_form(a: AlgebraElement, gamma=GAMMA) -> Expr:
    g = as_expr(gamma)
    return (2 * g * g + 1) * a.coeff(1) ** 2 - 2 * a.coeff(3) ** 2


def adjoint_action(i: int, eps, a: AlgebraElement, gamma=GAMMA) -> AlgebraElement:
    """Coefficients of Ad(exp(eps X_i)) A in closed form."""
    if not 1 <= i <= DIM:
        raise ValueError("generator index must be in 1..5")
    e, g = as_expr(eps), as_expr(gamma)
    a1, a2, a3, a4, a5 = a.alpha
    if i == 1:
        s = exp_(g * e)
        out = (a1, exp_(e) * a2, a3, s * a4, s * a5)
    elif i == 2:
        out = (a1, a2 - e * a1, a3, a4, a5)
    elif i == 3:
        c, s = cos_(e), sin_(e)
        out = (a1, a2, a3, a4 * c + a5 * s, a5 * c - a4 * s)
    elif i == 4:
        out = (a1, a2, a3, a4 - g * e * a1, a5 + e * a3)
    else:
        out = (a1, a2, a3, a4 - e * a3, a5 - g * e * a1)
    return AlgebraElement(out)


def adjoint_series(i: int, eps, a: AlgebraElement, order: int = 2) -> AlgebraElement:
    """Truncation sum_n (-eps)^n/n! ad(X_i)^n A up to the given order."""
    sc = structure_constants()
    e = as_expr(eps)
    xi = AlgebraElement.basis(i)
    term, total, fact = a, a, 1
    for n in range(1, order + 1):
        term = sc.bracket(xi, term)
        fact *= n
        total = total + term.scale((-e) ** n * const(Fraction(1, fact)))
    return total


def adjoint_matrix(i: int, eps, gamma=GAMMA) -> tuple:
    """M_i with alpha . M_i = adjoint_action(i, eps, alpha)."""
    rows = [adjoint_action(i, eps, AlgebraElement.basis(r + 1), gamma).alpha for r in range(DIM)]
    return tuple(tuple(row) for row in rows)


def adjoint_transform_matrix(eps1=0, eps2=0, eps3=0, eps4=0, eps5=0, gamma=GAMMA) -> tuple:
    """The product M5 M4 M3 M2 M1."""
    eps = (eps1, eps2, eps3, eps4, eps5)
    m = adjoint_matrix(5, eps[4], gamma)
    for i in (4, 3, 2, 1):
        m = mat_mul(m, adjoint_matrix(i, eps[i - 1], gamma))
    return m


def apply_row(a: AlgebraElement, m) -> AlgebraElement:
    return AlgebraElement(tuple(add_all([a.alpha[r] * m[r][c] for r in range(DIM)
                                         if a.alpha[r].terms and m[r][c].terms])
                                for c in range(DIM)))


def eps_symbols() -> tuple:
    return tuple(param(f"eps{i}") for i in range(1, DIM + 1))


def sigma(eps3, eps4, eps5) -> tuple:
    e3, e4, e5 = as_expr(eps3), as_expr(eps4), as_expr(eps5)
    return (e4 * cos_(e3) + e5 * sin_(e3), e4 * sin_(e3) - e5 * cos_(e3))


def parse_transcribed(text: str, extra: dict | None = None) -> Expr:
    """Parse a transcribed entry, expanding sigma1/sigma2 into the eps symbols."""
    e = parse(text)
    s1, s2 = (parse(transcribed.SIGMA1), parse(transcribed.SIGMA2))
    table = {Param("sigma1"): s1, Param("sigma2"): s2}
    if extra:
        table.update(extra)
    return subs(e, table)


# ---------------------------------------------------------------- invariants

@dataclass(frozen=True)
class InvariantValues:
    K: Expr
    M: Fraction
    N: Fraction
    P: int
    Q: int
    R: int
    S: int
    T: int

    def as_tuple(self) -> tuple:
        return (self.K, self.M, self.N, self.P, self.Q, self.R, self.S, self.T)


def _sgn(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def invariant_values(a: AlgebraElement, gamma=GAMMA) -> InvariantValues:
    a1, a2, a3, a4, a5 = a.concrete()
    return InvariantValues(
        K=killing_closed_form(a, gamma),
        M=a1, N=a3,
        P=int(a1 != 0 or a2 != 0 or a3 != 0),
        Q=int(a1 != 0 or a3 != 0 or a4 != 0 or a5 != 0),
        R=_sgn(a4) if a1 == a3 == a5 == 0 else 0,
        S=_sgn(a2) if a1 == 0 else 0,
        T=_sgn(a5) if a1 == a4 == a3 == 0 else 0,
    )


# ---------------------------------------------------------------- classification

def gamma_of(theta) -> Fraction:
    theta = Fraction(theta)
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    g = (theta - 2) / (2 * (theta - 1))
    assert g != 0
    return g


@dataclass(frozen=True)
class Classification:
    """``representative == scale * (alpha . A(eps))`` holds exactly."""
    representative: AlgebraElement
    case: int
    eps: tuple
    scale: Fraction
    gamma: Fraction

    @property
    def label(self) -> str:
        return self.representative.label()


def classify(a: AlgebraElement, theta=Fraction(1, 2)) -> Classification:
    g = gamma_of(theta)
    a1, a2, a3, a4, a5 = a.concrete()
    if not any((a1, a2, a3, a4, a5)):
        raise ValueError("the zero element has no class")
    zero = ZERO
    if a1 != 0:
        scale = 1 / a1
        k = a3 * scale
        b2, b4, b5 = a2 * scale, a4 * scale, a5 * scale
        if k != 0:
            case = 1
            den = k * k + g * g
            e4, e5 = (g * b4 - k * b5) / den, (g * b5 + k * b4) / den
        else:
            case = 3
            e4, e5 = b4 / g, b5 / g
        eps = (zero, const(b2), zero, const(e4), const(e5))
    elif a3 != 0:
        case = 2
        scale = 1 / a3
        b2, b4, b5 = a2 * scale, a4 * scale, a5 * scale
        e1 = -ln_(const(abs(b2))) if b2 != 0 else zero
        eps = (e1, zero, zero, const(-b5), const(b4))
    else:
        case, scale = 4, Fraction(1)
        eps = (zero,) * DIM
    rep = replay(a, eps, scale, g)
    return Classification(rep, case, eps, scale, g)


def replay(a: AlgebraElement, eps, scale, gamma) -> AlgebraElement:
    m = adjoint_transform_matrix(*eps, gamma=const(gamma))
    return apply_row(a, m).scale(const(scale))


def in_optimal_list(rep: AlgebraElement) -> bool:
    """True when ``rep`` has one of the four normal forms of the optimal system."""
    try:
        a1, a2, a3, a4, a5 = rep.concrete()
    except ValueError:
        return False
    if a1 == 1 and a2 == 0 and a4 == 0 and a5 == 0:
        return True  # X1 + k X3 (k != 0) or X1
    if a1 == 0 and a3 == 1 and a4 == 0 and a5 == 0:
        return a2 in (-1, 0, 1)
    if a1 == 0 and a3 == 0:
        return any((a2, a4, a5))
    return False
