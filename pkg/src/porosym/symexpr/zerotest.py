"""Hybrid zero testing: a rewrite pass to syntactic zero plus randomized sampling.

Verdicts
--------
``ZERO``     the canonical form is zero, or the rewrite pass reaches zero and
             every sample point is within tolerance;
``NONZERO``  some sample point exceeds the tolerance;
``UNKNOWN``  samples pass but no rewrite certificate was found.

The rewrite pass expands the defined parameters gamma and tau, turns
``exp(m*ln(u))`` into ``u^m``, aligns power kernels of one base whose exponents
differ by integers, clears compound denominators, and replaces ``sin^2`` by
``1 - cos^2``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .core import (EXP, add_all, ONE, ZERO, Expr, Func, Jet, Param, PowBase, Var, _finish,
                   _int_power, _single, _sorted_mono, _split_exponent, as_expr, const,
                   cos_, map_factors, param, pow_, subs)
from .numeric import DomainError, PointAssignment, _Evaluator, term_magnitudes

GAMMA_DEF = (param("theta") - 2) / (2 * (param("theta") - 1))
TAU_DEF = 1 / (param("theta") - 1)

RTOL = 1e-9
N_SAMPLES = 20


class Verdict(str, enum.Enum):
    ZERO = "zero"
    NONZERO = "nonzero"
    UNKNOWN = "unknown"


class UnsatisfiableConstraints(ValueError):
    """No admissible sample point could be found."""


DEFAULT_RANGES = {
    "theta": (0.05, 0.95),
    "h": (0.5, 4.0),
    "t": (0.5, 3.0),
    "x": (-3.0, 3.0),
    "y": (-3.0, 3.0),
}
POSITIVE_NAMES = frozenset({"G", "F", "lam"})


@dataclass(frozen=True)
class Constraints:
    """Parameter constraint set used by the zero test and by evaluation checks.

    ``fixed`` values are substituted exactly before testing.  ``intervals`` are
    open intervals enforced on user assignments.  ``nonzero`` names are sampled
    away from zero and ``positive`` names from a positive range.
    """
    fixed: Mapping[str, Fraction] = field(default_factory=dict)
    intervals: Mapping[str, tuple] = field(default_factory=lambda: {"theta": (0.0, 1.0)})
    ranges: Mapping[str, tuple] = field(default_factory=dict)
    nonzero: frozenset = frozenset()
    positive: frozenset = frozenset()
    min_radius2: float = 0.25

    def with_fixed(self, **values) -> "Constraints":
        fixed = dict(self.fixed)
        fixed.update({k: Fraction(v) for k, v in values.items()})
        return Constraints(fixed, self.intervals, self.ranges, self.nonzero, self.positive,
                           self.min_radius2)

    def without_fixed(self, *names) -> "Constraints":
        fixed = {k: v for k, v in self.fixed.items() if k not in names}
        return Constraints(fixed, self.intervals, self.ranges, self.nonzero, self.positive,
                           self.min_radius2)

    def apply_fixed(self, e: Expr) -> Expr:
        if not self.fixed:
            return e
        return subs(e, {Param(k): const(v) for k, v in self.fixed.items()})


@dataclass
class ZeroReport:
    verdict: Verdict
    expr: Expr
    rewritten: Expr
    samples: int
    max_rel: float
    numeric_skipped: bool = False

    @property
    def certified(self) -> bool:
        return not self.rewritten.terms


# ---------------------------------------------------------------- rewrite pass

def expand_defined(e: Expr) -> Expr:
    """Replace gamma and tau by their definitions in theta."""
    atoms = e.free_atoms()
    table = {}
    if Param("gamma") in atoms:
        table[Param("gamma")] = GAMMA_DEF
    if Param("tau") in atoms:
        table[Param("tau")] = TAU_DEF
    return subs(e, table) if table else e


def _exp_ln_to_pow(e: Expr) -> Expr:
    def rule(a, k):
        if a is not EXP:
            return None
        out = ONE
        rest = ZERO
        for mono, c in k.terms:
            lns = [(f, n) for f, n in mono if type(f) is Func and f.name == "ln" and n == 1]
            if len(lns) == 1:
                f = lns[0][0]
                coeff = Expr(((tuple(p for p in mono if p[0] != f), c),))
                out = out * pow_(_exp_ln_to_pow(f.arg), _exp_ln_to_pow(coeff))
            else:
                rest = rest + Expr(((mono, c),))
        if rest.terms:
            out = out * _single(EXP, _exp_ln_to_pow(rest))
        return out
    return map_factors(e, rule)


def _kernel_mul(e: Expr, base: Expr, k: int) -> Expr:
    """Multiply by base^k, merging into existing power kernels of ``base``."""
    key = PowBase(base)
    parts = []
    bk = None
    for mono, c in e.terms:
        d = dict(mono)
        if key in d:
            d[key] = d[key] + k
            parts.append(_finish(_sorted_mono(d), c))
        else:
            if bk is None:
                bk = _int_power(base, k)
            parts.append(Expr(((mono, c),)) * bk)
    return add_all(parts)


def clear_denominators(e: Expr) -> Expr:
    """Multiply through by compound bases (and trig kernels) with negative powers."""
    for _ in range(50):
        need = {}
        fneed = {}
        for mono, _ in e.terms:
            for a, k in mono:
                if type(a) is PowBase and not a.base.is_single_term():
                    _, n = _split_exponent(k)
                    if n < 0:
                        need[a.base] = max(need.get(a.base, 0), -n)
                elif type(a) is Func and k < 0:
                    fneed[a] = max(fneed.get(a, 0), -k)
        if not need and not fneed:
            return e
        for a, k in fneed.items():
            e = e * _single(a, k)
        for b, k in need.items():
            e = _kernel_mul(e, b, k)
    return e


def _reduce_sin_squares(e: Expr) -> Expr:
    parts = []
    changed = False
    for mono, c in e.terms:
        extra = ONE
        new = []
        for a, k in mono:
            if type(a) is Func and a.name == "sin" and type(k) is int and k >= 2:
                changed = True
                extra = extra * _int_power(1 - cos_(a.arg) ** 2, k // 2)
                if k % 2:
                    new.append((a, 1))
            else:
                new.append((a, k))
        parts.append(Expr(((tuple(new), c),)) * extra)
    return add_all(parts) if changed else e


def _sample_params(atoms, rng, n=3):
    out = []
    for _ in range(n):
        vals = {}
        for a in atoms:
            name = getattr(a, "name", None)
            lo, hi = DEFAULT_RANGES.get(name, (0.3, 2.7))
            vals[a] = rng.uniform(lo, hi)
        out.append(vals)
    return out


def _integer_offset(d: Expr, rng):
    """Return n if ``d`` is (certifiably) the integer n, else None."""
    d = expand_defined(d)
    if d.is_const():
        q = d.const_value()
        return int(q) if q.denominator == 1 else None
    atoms = list(d.free_atoms())
    if any(type(a) in (Var, Jet) for a in atoms):
        return None
    vals = []
    ev = None
    for pt in _sample_params(atoms, rng):
        try:
            ev = _Evaluator(PointAssignment(pt))
            vals.append(float(ev.expr(d)))
        except (DomainError, ZeroDivisionError, FloatingPointError):
            return None
    n = round(vals[0])
    if any(abs(v - n) > 1e-9 * (1 + abs(n)) for v in vals):
        return None
    if clear_denominators(d - n).terms:
        return None
    return n


def _align_powers(e: Expr, rng) -> Expr:
    exps = {}
    args = []
    for mono, _ in e.terms:
        for a, k in mono:
            if type(a) is PowBase:
                lst = exps.setdefault(a, [])
                if k not in lst:
                    lst.append(k)
            elif a is EXP and k not in args:
                args.append(k)
    table = {}
    for key, lst in exps.items():
        if len(lst) < 2:
            continue
        refs = []
        for k in lst:
            for i, (ref, members) in enumerate(refs):
                n = _integer_offset(k - ref, rng)
                if n is not None:
                    members.append((k, n))
                    break
            else:
                refs.append((k, [(k, 0)]))
        for ref, members in refs:
            low = min(n for _, n in members)
            new_ref = ref + low
            for k, n in members:
                if k != new_ref or n - low:
                    table[(key, k)] = _finish(((key, new_ref),), Fraction(1)) * _int_power(key.base, n - low)
    exp_table = {}
    for i, a in enumerate(args):
        for b in args[:i]:
            if b in exp_table:
                continue
            if not clear_denominators(expand_defined(a - b)).terms:
                exp_table[a] = _single(EXP, b)
                break
    if not table and not exp_table:
        return e
    parts = []
    for mono, c in e.terms:
        t = const(c)
        for a, k in mono:
            if (a, k) in table:
                t = t * table[(a, k)]
            elif a is EXP and k in exp_table:
                t = t * exp_table[k]
            else:
                t = t * _finish(((a, k),), Fraction(1))
        parts.append(t)
    return add_all(parts)


def rewrite(e: Expr, rng=None) -> Expr:
    """Best-effort rewrite towards syntactic zero.  Sound for positive kernel bases."""
    rng = rng if rng is not None else np.random.default_rng(0)
    e = expand_defined(e)
    e = _exp_ln_to_pow(e)
    for _ in range(4):
        prev = e
        e = clear_denominators(e)
        e = _align_powers(e, rng)
        e = clear_denominators(e)
        e = _reduce_sin_squares(e)
        if not e.terms or e == prev:
            break
    return e


# ---------------------------------------------------------------- sampling

def _draw(atom, constraints: Constraints, rng):
    name = getattr(atom, "name", None)
    if type(atom) is Jet:
        if atom.base == "phi" and atom.order == 0:
            return rng.uniform(0.2, 3.0)
        return rng.uniform(-3.0, 3.0)
    if name in constraints.ranges:
        lo, hi = constraints.ranges[name]
        return rng.uniform(lo, hi)
    if name in DEFAULT_RANGES:
        lo, hi = DEFAULT_RANGES[name]
        return rng.uniform(lo, hi)
    if name in constraints.positive or name in POSITIVE_NAMES:
        return rng.uniform(0.2, 3.0)
    v = rng.uniform(-3.0, 3.0)
    if name in constraints.nonzero:
        while abs(v) < 0.1:
            v = rng.uniform(-3.0, 3.0)
    return v


def sample_point(atoms, constraints: Constraints, rng) -> dict:
    pt = {a: _draw(a, constraints, rng) for a in atoms}
    xa, ya = Var("x"), Var("y")
    if xa in pt and ya in pt:
        while pt[xa] ** 2 + pt[ya] ** 2 < constraints.min_radius2:
            pt[xa] = _draw(xa, constraints, rng)
            pt[ya] = _draw(ya, constraints, rng)
    return pt


def sample_residual(e: Expr, constraints: Constraints, rng, n: int = N_SAMPLES,
                    max_tries: int = 400):
    """Evaluate at ``n`` admissible points.  Returns (valid_count, max relative value)."""
    atoms = sorted(e.free_atoms())
    got = 0
    worst = 0.0
    tries = 0
    while got < n and tries < max_tries:
        tries += 1
        pt = sample_point(atoms, constraints, rng)
        try:
            at = PointAssignment(pt)
            mags = term_magnitudes(e, at)
            val = float(_Evaluator(at).expr(e)) if e.terms else 0.0
        except (DomainError, ZeroDivisionError, FloatingPointError):
            continue
        scale = 1.0 + (max(float(np.max(m)) for m in mags) if mags else 0.0)
        if not np.isfinite(val) or not np.isfinite(scale):
            continue
        worst = max(worst, abs(val) / scale)
        got += 1
    return got, worst


def zero_report(e, constraints: Constraints | None = None, *, seed: int = 0,
                samples: int = N_SAMPLES, allow_numeric_skip: bool = False) -> ZeroReport:
    constraints = constraints or Constraints()
    e = constraints.apply_fixed(as_expr(e))
    rng = np.random.default_rng(seed)
    if not e.terms:
        return ZeroReport(Verdict.ZERO, e, e, 0, 0.0)
    r = rewrite(e, rng)
    got, worst = sample_residual(e, constraints, rng, samples)
    if got == 0:
        if not allow_numeric_skip:
            raise UnsatisfiableConstraints("no admissible sample point for the zero test")
        verdict = Verdict.ZERO if not r.terms else Verdict.UNKNOWN
        return ZeroReport(verdict, e, r, 0, float("nan"), numeric_skipped=True)
    if worst >= RTOL:
        return ZeroReport(Verdict.NONZERO, e, r, got, worst)
    verdict = Verdict.ZERO if not r.terms else Verdict.UNKNOWN
    return ZeroReport(verdict, e, r, got, worst, numeric_skipped=got < samples)


def is_zero(e, constraints: Constraints | None = None, *, seed: int = 0, **kw) -> Verdict:
    return zero_report(e, constraints, seed=seed, **kw).verdict
