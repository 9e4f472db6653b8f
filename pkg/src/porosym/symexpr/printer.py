"""Text rendering in the same grammar that ``parse`` accepts."""
from __future__ import annotations

from fractions import Fraction

from .core import EXP, Expr, Func, Jet, Param, PowBase, Var


def jet_name(a: Jet) -> str:
    sub = "x" * a.nx + "y" * a.ny + "t" * a.nt
    return a.base + ("_" + sub if sub else "")


def atom_text(a) -> str:
    if isinstance(a, (Var, Param)):
        return a.name
    if isinstance(a, Jet):
        return jet_name(a)
    if isinstance(a, Func):
        return f"{a.name}({to_text(a.arg)})"
    if isinstance(a, PowBase):
        return f"({to_text(a.base)})"
    return "exp"


def _exponent_text(e) -> str:
    if isinstance(e, int):
        return str(e) if e >= 0 else f"({e})"
    if isinstance(e, tuple):
        m, n = e
        if n == 0:
            return _exponent_text(m)
        if m == 0 and n == 1:
            return "theta"
        parts = []
        if m:
            parts.append(str(m))
        nt = "theta" if n == 1 else "-theta" if n == -1 else f"{n}*theta"
        parts.append(nt)
        s = parts[0] + "".join(p if p.startswith("-") else "+" + p for p in parts[1:])
        return f"({s})"
    return f"({to_text(e)})"


def _factor_text(a, e) -> str:
    if a is EXP:
        return f"exp({to_text(e)})"
    if isinstance(a, PowBase):
        return f"({to_text(a.base)})^({to_text(e)})"
    base = atom_text(a)
    if e == 1 or e == (1, 0):
        return base
    return f"{base}^{_exponent_text(e)}"


def _coeff_text(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def to_text(e: Expr) -> str:
    if not e.terms:
        return "0"
    out = []
    for i, (mono, c) in enumerate(e.terms):
        neg = c < 0
        mag = -c if neg else c
        fs = [_factor_text(a, k) for a, k in mono]
        if mag != 1 or not fs:
            fs.insert(0, _coeff_text(mag))
        body = "*".join(fs)
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)
