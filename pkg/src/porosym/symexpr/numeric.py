"""Double-precision evaluation of Exprs, scalar or vectorized over numpy arrays."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .core import EXP, THETA, Atom, Expr, ExprError, Func, PowBase
from .parser import name_to_expr


class EvalError(ExprError):
    """Evaluation failure."""


class DomainError(EvalError):
    """Negative base with non-integer exponent, ln of non-positive, 0^negative, NaN."""


class UnassignedAtomError(EvalError):
    """A free atom has no value."""


class ConstraintViolation(ValueError):
    """An assignment breaks a declared constraint."""


def _to_atom(k) -> Atom:
    if isinstance(k, Atom):
        return k
    if isinstance(k, Expr):
        (mono, _), = k.terms
        return mono[0][0]
    e = name_to_expr(k, params=frozenset([k]))
    (mono, _), = e.terms
    return mono[0][0]


@dataclass
class PointAssignment:
    """Values for the free atoms of an expression; keys may be atoms or names."""
    values: Mapping
    _atoms: dict = field(init=False, repr=False)

    def __post_init__(self):
        self._atoms = {_to_atom(k): v for k, v in dict(self.values).items()}

    def lookup(self, a: Atom):
        try:
            return self._atoms[a]
        except KeyError:
            raise UnassignedAtomError(f"no value for {a!r}") from None

    def check(self, constraints) -> None:
        """Reject values outside the declared open intervals of ``constraints``."""
        for name, (lo, hi) in constraints.intervals.items():
            a = _to_atom(name)
            if a in self._atoms:
                v = np.asarray(self._atoms[a], dtype=float)
                if np.any(v <= lo) or np.any(v >= hi):
                    raise ConstraintViolation(f"{name} must lie in ({lo}, {hi})")
        for name in constraints.nonzero:
            a = _to_atom(name)
            if a in self._atoms and np.any(np.asarray(self._atoms[a]) == 0):
                raise ConstraintViolation(f"{name} must be nonzero")
        for name, val in constraints.fixed.items():
            a = _to_atom(name)
            if a in self._atoms and np.any(np.asarray(self._atoms[a], dtype=float) != float(val)):
                raise ConstraintViolation(f"{name} is fixed to {val}")


def _is_integer(v) -> bool:
    v = np.asarray(v)
    return bool(np.all(v == np.round(v)))


def _power(b, e):
    b = np.asarray(b, dtype=float)
    e = np.asarray(e, dtype=float)
    if np.any(b < 0) and not _is_integer(e):
        raise DomainError("negative base with non-integer exponent")
    if np.any((b == 0) & (e < 0)):
        raise DomainError("zero raised to a negative power")
    return np.power(b, e)


class _Evaluator:
    def __init__(self, at: PointAssignment):
        self.at = at
        self.memo = {}

    def expr(self, e: Expr):
        hit = self.memo.get(e)
        if hit is not None:
            return hit
        total = 0.0
        for mono, c in e.terms:
            total = total + self.term(mono, c)
        self.memo[e] = total
        return total

    def term(self, mono, c):
        v = float(c)
        for a, k in mono:
            v = v * self.factor(a, k)
        return v

    def factor(self, a, k):
        t = type(a)
        if t is Func:
            u = np.asarray(self.expr(a.arg), dtype=float)
            if a.name == "ln":
                if np.any(u <= 0):
                    raise DomainError("ln of a non-positive value")
                f = np.log(u)
            elif a.name == "sin":
                f = np.sin(u)
            else:
                f = np.cos(u)
            return _power(f, k) if k != 1 else f
        if t is PowBase:
            return _power(self.expr(a.base), self.expr(k))
        if a is EXP:
            return np.exp(np.asarray(self.expr(k), dtype=float))
        v = self.at.lookup(a)
        if type(k) is tuple:
            m, n = k
            ex = m + n * np.asarray(self.at.lookup(THETA), dtype=float) if n else m
            return _power(v, ex)
        if k == 1:
            return np.asarray(v, dtype=float)
        return _power(v, k)


def _finish(v):
    v = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(v)):
        raise DomainError("non-finite value (overflow or NaN)")
    return float(v) if v.ndim == 0 else v


def eval_numeric(e: Expr, at, constraints=None):
    """Evaluate ``e`` at ``at`` (a PointAssignment or a plain mapping)."""
    if not isinstance(at, PointAssignment):
        at = PointAssignment(at)
    if constraints is not None:
        at.check(constraints)
    with np.errstate(all="ignore"):
        return _finish(_Evaluator(at).expr(e))


def term_magnitudes(e: Expr, at):
    """Absolute value of every term of ``e`` at ``at`` (stacked along axis 0)."""
    if not isinstance(at, PointAssignment):
        at = PointAssignment(at)
    ev = _Evaluator(at)
    with np.errstate(all="ignore"):
        vals = [np.abs(np.asarray(ev.term(m, c), dtype=float)) for m, c in e.terms]
    return vals
