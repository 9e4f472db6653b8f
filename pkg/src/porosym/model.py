"""The governing equation and its on-shell reduction.

    phi_t = 2 (phi_x^2 + phi_y^2) + 2 phi (phi_xx + phi_yy) - h phi^theta,   0 < theta < 1
"""
from __future__ import annotations

from .symexpr import Expr, Jet, jet, param, phi_power, subs, total_derivative_multi, var

H = param("h")
THETA = param("theta")
GAMMA = param("gamma")
TAU = param("tau")
PHI = jet()
X, Y, T = var("x"), var("y"), var("t")


def rhs(h: Expr = H) -> Expr:
    """Right-hand side R of phi_t = R."""
    px, py = jet("phi", 1), jet("phi", 0, 1)
    return (2 * (px ** 2 + py ** 2) + 2 * PHI * (jet("phi", 2) + jet("phi", 0, 2))
            - h * phi_power(0, 1))


def delta(h: Expr = H) -> Expr:
    """Delta = phi_t - R, the equation in residual form."""
    return jet("phi", 0, 0, 1) - rhs(h)


class OnShell:
    """Eliminates every t-derivative jet of phi using the equation and its consequences.

    ``phi_{a,b,c}`` with ``c >= 1`` is replaced by ``D_x^a D_y^b D_t^(c-1) R``,
    which is itself reduced recursively (innermost first) until no t-jets remain.
    """

    def __init__(self, h: Expr = H):
        self.h = h
        self.R = rhs(h)
        self._memo = {}

    def consequence(self, j: Jet) -> Expr:
        hit = self._memo.get(j)
        if hit is None:
            raw = total_derivative_multi(self.R, j.nx, j.ny, j.nt - 1)
            hit = self.reduce(raw)
            self._memo[j] = hit
        return hit

    def reduce(self, e: Expr) -> Expr:
        for _ in range(8):
            tj = [j for j in e.jets() if j.base == "phi" and j.nt > 0]
            if not tj:
                return e
            e = subs(e, {j: self.consequence(j) for j in tj})
        raise RuntimeError("on-shell reduction did not reach a fixed point")


def onshell(e: Expr, h: Expr = H) -> Expr:
    return OnShell(h).reduce(e)
