"""Exact expression kernel.

An ``Expr`` is a canonical sum ``{monomial: Fraction}``.  A monomial is a sorted
tuple of ``(atom, exponent)`` pairs.  Exponent types depend on the atom:

* ``Var``, ``Param``, higher ``Jet`` atoms and ``Func`` kernels: ``int``
* the bare ``phi`` jet: a lattice pair ``(m, n)`` meaning ``phi^(m + n*theta)``
* ``PowBase(B)``: an ``Expr`` exponent, i.e. the opaque kernel ``B^e``
* ``EXP``: the ``Expr`` argument of the exponential (so exp(a)*exp(b) merges)

Canonical-form rules applied on every construction:

* integer parts of symbolic exponents are split off (``B^(s+n) = B^s * B^n``)
  and distributed over single-term bases, or expanded for compound bases when
  ``n > 0``;
* ``exp(q*ln(u))`` with rational ``q`` becomes ``u^q``; ``ln(exp(u)) = u``;
* ``sin(-u) = -sin(u)``, ``cos(-u) = cos(u)``, ``sin(0) = 0``, ``cos(0) = 1``;
* ``c*m*sin(u)^2 + c*m*cos(u)^2`` merges to ``c*m``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Union

MAX_JET_ORDER = 4

Number = Union[int, Fraction]


class ExprError(ValueError):
    """Malformed construction (division by zero, bad exponent, ...)."""


class JetOrderError(ExprError):
    """A jet variable of order above ``MAX_JET_ORDER`` would be created."""


# ---------------------------------------------------------------- atoms

class Atom:
    __slots__ = ("_key", "_hash")

    def _init_key(self, key):
        self._key = key
        self._hash = hash(key)

    @property
    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, Atom) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._key < other._key

    def __repr__(self):
        from .printer import atom_text
        return f"{type(self).__name__}({atom_text(self)})"


_VAR_RANK = {"x": 0, "y": 1, "t": 2}


class Var(Atom):
    """Independent variable (x, y, t)."""
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._init_key((0, _VAR_RANK.get(name, 3), name))


class Param(Atom):
    """Named parameter, treated as a constant by total derivatives."""
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._init_key((1, name))


class Jet(Atom):
    """Jet coordinate ``base_{x^nx y^ny t^nt}``; mixed partials are canonical."""
    __slots__ = ("base", "nx", "ny", "nt")

    def __init__(self, base: str, nx: int = 0, ny: int = 0, nt: int = 0):
        if min(nx, ny, nt) < 0:
            raise ExprError("negative jet index")
        if nx + ny + nt > MAX_JET_ORDER:
            raise JetOrderError(
                f"jet order {nx + ny + nt} exceeds cap {MAX_JET_ORDER}")
        self.base, self.nx, self.ny, self.nt = base, nx, ny, nt
        self._init_key((2, base, nx, ny, nt))

    @property
    def order(self) -> int:
        return self.nx + self.ny + self.nt

    def inc(self, var: str) -> "Jet":
        nx, ny, nt = self.nx, self.ny, self.nt
        if var == "x":
            nx += 1
        elif var == "y":
            ny += 1
        elif var == "t":
            nt += 1
        else:
            raise ExprError(f"no total derivative in {var!r}")
        return Jet(self.base, nx, ny, nt)


class Func(Atom):
    """Transcendental kernel ``ln``, ``sin`` or ``cos`` of an Expr argument."""
    __slots__ = ("name", "arg")

    def __init__(self, name: str, arg: "Expr"):
        self.name, self.arg = name, arg
        self._init_key((3, name, arg.key))


class PowBase(Atom):
    """Key of the opaque power kernel; the exponent lives in the monomial."""
    __slots__ = ("base",)

    def __init__(self, base: "Expr"):
        self.base = base
        self._init_key((4, base.key))


class _ExpKey(Atom):
    __slots__ = ()

    def __init__(self):
        self._init_key((5,))


EXP = _ExpKey()
PHI = Jet("phi")
THETA = Param("theta")


def _is_lattice(atom) -> bool:
    return atom is PHI or (type(atom) is Jet and atom.base == "phi" and atom.order == 0)


def _expr_exponent(atom) -> bool:
    return type(atom) is PowBase or atom is EXP


def _exp_key(e):
    if type(e) is int:
        return (0, e)
    if type(e) is tuple:
        return (1,) + e
    return (2, e.key)


_MONO_KEYS: dict = {}


def _mono_key(mono):
    k = _MONO_KEYS.get(mono)
    if k is None:
        if len(_MONO_KEYS) > 500_000:
            _MONO_KEYS.clear()
        k = tuple((a._key, _exp_key(e)) for a, e in mono)
        _MONO_KEYS[mono] = k
    return k


# ---------------------------------------------------------------- Expr

class Expr:
    """Immutable canonical polynomial-like expression."""
    __slots__ = ("terms", "_key", "_hash", "_free")

    def __init__(self, terms):
        # ``terms``: tuple of (mono, Fraction) already canonical and sorted.
        self.terms = terms
        self._key = None
        self._hash = None
        self._free = None

    # -- identity
    @property
    def key(self):
        if self._key is None:
            self._key = tuple((_mono_key(m), (c.numerator, c.denominator))
                              for m, c in self.terms)
        return self._key

    def __eq__(self, other):
        if self is other:
            return True
        if isinstance(other, (int, Fraction)):
            other = const(other)
        if not isinstance(other, Expr):
            return False
        if len(self.terms) != len(other.terms):
            return False
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __repr__(self):
        from .printer import to_text
        return f"Expr({to_text(self)!r})"

    def __str__(self):
        from .printer import to_text
        return to_text(self)

    # -- inspection
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not self.terms[0][0])

    def const_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_const():
            raise ExprError(f"not a constant: {self}")
        return self.terms[0][1]

    def constant_term(self) -> Fraction:
        if self.terms and not self.terms[0][0]:
            return self.terms[0][1]
        return Fraction(0)

    def is_single_term(self) -> bool:
        return len(self.terms) == 1

    def free_atoms(self) -> frozenset:
        """Var, Param and Jet atoms occurring anywhere, including inside kernels."""
        if self._free is None:
            out = set()
            for mono, _ in self.terms:
                for a, e in mono:
                    if type(a) is Func:
                        out |= a.arg.free_atoms()
                    elif type(a) is PowBase:
                        out |= a.base.free_atoms()
                        out |= e.free_atoms()
                    elif a is EXP:
                        out |= e.free_atoms()
                    else:
                        out.add(a)
                        if type(e) is tuple and e[1]:
                            out.add(THETA)
            self._free = frozenset(out)
        return self._free

    def jets(self) -> frozenset:
        return frozenset(a for a in self.free_atoms() if type(a) is Jet)

    def has(self, atom) -> bool:
        return atom in self.free_atoms()

    # -- arithmetic
    def __add__(self, other):
        other = as_expr(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = dict(self.terms)
        for m, c in other.terms:
            acc[m] = acc.get(m, 0) + c
        return _build(acc)

    __radd__ = __add__

    def __neg__(self):
        return Expr(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other):
        return self + (-as_expr(other))

    def __rsub__(self, other):
        return as_expr(other) - self

    def __mul__(self, other):
        other = as_expr(other)
        if not self.terms or not other.terms:
            return ZERO
        if other.is_const():
            q = other.terms[0][1]
            if q == 1:
                return self
            return Expr(tuple((m, c * q) for m, c in self.terms))
        if self.is_const():
            return other * self
        acc = {}
        extra = []
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                mono, clean = _mono_mul(m1, m2)
                if clean:
                    acc[mono] = acc.get(mono, 0) + c1 * c2
                else:
                    extra.append(_finish(mono, c1 * c2))
        if extra:
            extra.append(Expr(tuple(acc.items())))
            return add_all(extra)
        return _build(acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_expr(other)
        if not other.terms:
            raise ExprError("division by zero")
        if other.is_const():
            return self * const(1 / other.terms[0][1])
        return self * pow_(other, -1)

    def __rtruediv__(self, other):
        return as_expr(other) / self

    def __pow__(self, e):
        return pow_(self, e)


def _build(acc: dict) -> Expr:
    acc = {m: c for m, c in acc.items() if c != 0}
    _merge_pythagoras(acc)
    if len(acc) <= 1:
        return Expr(tuple(acc.items()))
    return Expr(tuple(sorted(acc.items(), key=lambda mc: _mono_key(mc[0]))))


def add_all(exprs) -> Expr:
    """Sum of many Exprs with a single normalization."""
    acc = {}
    for e in exprs:
        for m, c in e.terms:
            acc[m] = acc.get(m, 0) + c
    return _build(acc)


def _merge_pythagoras(acc: dict) -> None:
    """c*m*sin(u)^k + c*m*sin(u)^(k-2)*cos(u)^2 -> c*m*sin(u)^(k-2), to a fixed point."""
    if not any(type(a) is Func and a.name == "sin" and k >= 2 for m in acc for a, k in m):
        return
    changed = True
    while changed:
        changed = False
        for m, c in list(acc.items()):
            if m not in acc:
                continue
            for a, k in m:
                if type(a) is Func and a.name == "sin" and type(k) is int and k >= 2:
                    cos_atom = Func("cos", a.arg)
                    d = dict(m)
                    _set(d, a, k - 2)
                    base = _sorted_mono(d)
                    _set(d, cos_atom, d.get(cos_atom, 0) + 2)
                    partner = _sorted_mono(d)
                    if acc.get(partner) == c:
                        del acc[m]
                        del acc[partner]
                        v = acc.get(base, 0) + c
                        if v:
                            acc[base] = v
                        else:
                            acc.pop(base, None)
                        changed = True
                        break
            if changed:
                break


def _set(d, a, e):
    if _exp_is_zero(e):
        d.pop(a, None)
    else:
        d[a] = e


def _exp_is_zero(e) -> bool:
    if type(e) is int:
        return e == 0
    if type(e) is tuple:
        return e == (0, 0)
    return not e.terms


def _sorted_mono(d: dict):
    return tuple(sorted(d.items(), key=lambda ae: ae[0].key))


def _exp_add(a, e1, e2):
    if type(e1) is int:
        return e1 + e2
    if type(e1) is tuple:
        return (e1[0] + e2[0], e1[1] + e2[1])
    return e1 + e2


def _exp_scale(e, n: int):
    if type(e) is int:
        return e * n
    if type(e) is tuple:
        return (e[0] * n, e[1] * n)
    return e * n


def _mono_mul(m1, m2):
    """Merge two monomials.  ``clean`` is False when the result needs _finish."""
    if not m1:
        return m2, True
    if not m2:
        return m1, True
    d = dict(m1)
    clean = True
    for a, e in m2:
        if a in d:
            s = _exp_add(a, d[a], e)
            if type(a) is PowBase:
                clean = False
            if _exp_is_zero(s):
                del d[a]
            else:
                d[a] = s
        else:
            d[a] = e
    return _sorted_mono(d), clean


def _split_exponent(e: Expr):
    """e = s + n with n = floor(constant term)."""
    c = e.constant_term()
    n = math.floor(c)
    if n == 0:
        return e, 0
    return e - n, n


def _finish(mono, coeff: Fraction) -> Expr:
    """Canonicalize a merged monomial: split integer parts of kernel exponents."""
    d = dict(mono)
    extra = []
    for a, e in list(d.items()):
        if type(a) is PowBase:
            if not e.terms:
                del d[a]
                continue
            s, n = _split_exponent(e)
            if n == 0:
                continue
            if a.base.is_single_term() or n > 0:
                _set(d, a, s)
                extra.append(_int_power(a.base, n))
        elif a is EXP and not e.terms:
            del d[a]
    out = Expr(((_sorted_mono(d), Fraction(coeff)),)) if coeff else ZERO
    for f in extra:
        out = out * f
    return out


def _single(a, e=1, c=Fraction(1)) -> Expr:
    return Expr(((((a, e),), Fraction(c)),))


def _int_power(b: Expr, n: int) -> Expr:
    if n == 0:
        return ONE
    if n == 1:
        return b
    if not b.terms:
        if n > 0:
            return ZERO
        raise ExprError("zero raised to a negative power")
    if b.is_single_term():
        mono, c = b.terms[0]
        new = tuple((a, _exp_scale(e, n)) for a, e in mono)
        if any(type(a) is PowBase for a, _ in new):
            return _finish(new, c ** n)
        return Expr(((new, c ** n),))
    if n > 0:
        out, base, k = ONE, b, n
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out
    content, common, prim = _primitive(b)
    out = _single(PowBase(prim), const(n))
    return out * _int_power(const(content) * Expr(((common, Fraction(1)),)), n)


def _primitive(b: Expr):
    """Split a compound ``b`` into content * common monomial * primitive part."""
    nums = [abs(c.numerator) for _, c in b.terms]
    dens = [c.denominator for _, c in b.terms]
    g = math.gcd(*nums)
    lcm = 1
    for d in dens:
        lcm = lcm * d // math.gcd(lcm, d)
    content = Fraction(g, lcm)
    if b.terms[0][1] < 0:
        content = -content
    # common monomial
    first = dict(b.terms[0][0])
    common = {}
    for a, e in first.items():
        exps = []
        for m, _ in b.terms:
            dm = dict(m)
            if a not in dm:
                break
            exps.append(dm[a])
        else:
            if type(e) is int:
                common[a] = min(exps)
            elif type(e) is tuple:
                common[a] = (min(x[0] for x in exps), min(x[1] for x in exps))
            elif all(x == e for x in exps):
                common[a] = e
    common = {a: e for a, e in common.items() if not _exp_is_zero(e)}
    cm = _sorted_mono(common)
    inv = _sorted_mono({a: _exp_scale(e, -1) for a, e in common.items()})
    acc = {}
    for m, c in b.terms:
        mm, _ = _mono_mul(m, inv)
        acc[mm] = c / content
    return content, cm, _build(acc)


# ---------------------------------------------------------------- constructors

def const(q) -> Expr:
    q = Fraction(q)
    if q == 0:
        return ZERO
    return Expr((((), q),))


def as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, Fraction)):
        return const(v)
    if isinstance(v, Atom):
        return atom(v)
    if isinstance(v, float):
        raise ExprError("floats are not exact; pass a Fraction or a decimal string")
    raise TypeError(f"cannot convert {type(v).__name__} to Expr")


def atom(a: Atom) -> Expr:
    if _is_lattice(a):
        return _single(a, (1, 0))
    return _single(a, 1)


def var(name: str) -> Expr:
    return atom(Var(name))


def param(name: str) -> Expr:
    return atom(Param(name))


def jet(base: str = "phi", nx: int = 0, ny: int = 0, nt: int = 0) -> Expr:
    return atom(Jet(base, nx, ny, nt))


def phi_power(m: int, n: int) -> Expr:
    """phi^(m + n*theta) in lattice form."""
    if m == 0 and n == 0:
        return ONE
    return _single(PHI, (m, n))


def _lattice_of(e: Expr):
    """Return (m, n) if e = m + n*theta with integers m, n, else None."""
    m = n = 0
    for mono, c in e.terms:
        if c.denominator != 1:
            return None
        if not mono:
            m = int(c)
        elif mono == ((THETA, 1),):
            n = int(c)
        else:
            return None
    return (m, n)


def pow_(base, e) -> Expr:
    base, e = as_expr(base), as_expr(e)
    if not e.terms:
        return ONE
    if not base.terms:
        if e.is_const() and e.const_value() > 0:
            return ZERO
        raise ExprError("zero raised to a non-positive or symbolic power")
    if base == ONE:
        return ONE
    if e.is_const():
        q = e.const_value()
        if q.denominator == 1:
            return _int_power(base, int(q))
    if base.is_single_term():
        mono, c = base.terms[0]
        if c == 1 and len(mono) == 1 and _is_lattice(mono[0][0]) and mono[0][1] == (1, 0):
            lat = _lattice_of(e)
            if lat is not None:
                return phi_power(*lat)
        out = ONE
        rest = []
        for a, x in mono:
            if _expr_exponent(a):
                out = out * _finish(((a, x * e),), Fraction(1))
            else:
                rest.append((a, x))
        rest_expr = Expr(((tuple(rest), c),))
        if rest_expr != ONE:
            out = out * _finish(((PowBase(rest_expr), e),), Fraction(1))
        return out
    content, common, prim = _primitive(base)
    if content > 0 and not common and content != 1:
        return pow_(const(content), e) * _finish(((PowBase(prim), e),), Fraction(1))
    return _finish(((PowBase(base), e),), Fraction(1))


def exp_(a) -> Expr:
    a = as_expr(a)
    out = ONE
    rest = {}
    for mono, c in a.terms:
        if len(mono) == 1 and type(mono[0][0]) is Func and mono[0][0].name == "ln" and mono[0][1] == 1:
            out = out * pow_(mono[0][0].arg, const(c))
        else:
            rest[mono] = c
    if rest:
        out = out * _single(EXP, _build(rest))
    return out


def ln_(u) -> Expr:
    u = as_expr(u)
    if not u.terms:
        raise ExprError("ln(0)")
    if u == ONE:
        return ZERO
    if u.is_single_term():
        mono, c = u.terms[0]
        if c == 1 and len(mono) == 1 and mono[0][0] is EXP:
            return mono[0][1]
    return _single(Func("ln", u))


def _leading_negative(u: Expr) -> bool:
    return u.terms[0][1] < 0


def sin_(u) -> Expr:
    u = as_expr(u)
    if not u.terms:
        return ZERO
    if _leading_negative(u):
        return -_single(Func("sin", -u))
    return _single(Func("sin", u))


def cos_(u) -> Expr:
    u = as_expr(u)
    if not u.terms:
        return ONE
    if _leading_negative(u):
        u = -u
    return _single(Func("cos", u))


FUNCS = {"exp": exp_, "ln": ln_, "sin": sin_, "cos": cos_}

ZERO = Expr(())
ONE = Expr((((), Fraction(1)),))


def _factor_expr(a, e) -> Expr:
    """The Expr for a single factor ``a^e`` of a monomial."""
    if _expr_exponent(a):
        return _finish(((a, e),), Fraction(1))
    return _single(a, e)


def factors(mono) -> Iterable:
    return mono


# ---------------------------------------------------------------- calculus

def differentiate(e: Expr, wrt) -> Expr:
    """Partial derivative treating all other atoms as independent."""
    if isinstance(wrt, Expr):
        wrt = _as_atom(wrt)
    if wrt not in e.free_atoms():
        return ZERO
    parts = []
    for mono, c in e.terms:
        for i, (a, k) in enumerate(mono):
            d = _diff_factor(a, k, wrt)
            if not d.terms:
                continue
            rest = mono[:i] + mono[i + 1:]
            parts.append(Expr(((rest, c),)) * d)
    return add_all(parts)


def _as_atom(x: Expr) -> Atom:
    if len(x.terms) == 1 and x.terms[0][1] == 1 and len(x.terms[0][0]) == 1:
        a, k = x.terms[0][0][0]
        if k == 1 or k == (1, 0):
            return a
    raise ExprError(f"not an atom: {x}")


def _diff_factor(a, k, wrt) -> Expr:
    t = type(a)
    if t is Var or t is Param or (t is Jet and not _is_lattice(a)):
        if a == wrt:
            return _single(a, k - 1, k) if k != 1 else ONE
        return ZERO
    if t is Jet:  # lattice phi
        m, n = k
        out = ZERO
        if a == wrt:
            coeff = const(m) + const(n) * atom(THETA)
            out = coeff * phi_power(m - 1, n)
        if wrt == THETA and n:
            out = out + const(n) * ln_(atom(PHI)) * phi_power(m, n)
        return out
    if t is Func:
        du = differentiate(a.arg, wrt)
        if not du.terms:
            return ZERO
        if a.name == "ln":
            inner = pow_(a.arg, -1)
        elif a.name == "sin":
            inner = cos_(a.arg)
        else:
            inner = -sin_(a.arg)
        pre = _single(a, k - 1, k) if k != 1 else ONE
        return pre * inner * du
    if t is PowBase:
        db = differentiate(a.base, wrt)
        de = differentiate(k, wrt)
        if not db.terms and not de.terms:
            return ZERO
        p = _finish(((a, k),), Fraction(1))
        inner = ZERO
        if de.terms:
            inner = inner + de * ln_(a.base)
        if db.terms:
            inner = inner + k * db * pow_(a.base, -1)
        return p * inner
    # EXP
    da = differentiate(k, wrt)
    if not da.terms:
        return ZERO
    return _single(EXP, k) * da


def total_derivative(e: Expr, base: str) -> Expr:
    """D_base e = de/dbase + sum_j (de/dj) * j_base over jet atoms j."""
    parts = [differentiate(e, Var(base))]
    for j in sorted(e.jets()):
        d = differentiate(e, j)
        if d.terms:
            parts.append(d * atom(j.inc(base)))
    return add_all(parts)


def total_derivative_multi(e: Expr, nx: int = 0, ny: int = 0, nt: int = 0) -> Expr:
    for v, n in (("x", nx), ("y", ny), ("t", nt)):
        for _ in range(n):
            e = total_derivative(e, v)
    return e


# ---------------------------------------------------------------- substitution

def subs(e: Expr, mapping: Mapping) -> Expr:
    """Simultaneous substitution of atoms (Var/Param/Jet/Func) by Exprs."""
    table = {}
    for k, v in mapping.items():
        if isinstance(k, Expr):
            k = _as_atom(k)
        table[k] = as_expr(v)
    if not table:
        return e
    keys = set(table)
    theta_changed = THETA in keys
    return _subs(e, table, keys, theta_changed, {})


def _rebuild(e: Expr, factor_fn, memo) -> Expr:
    """Rebuild ``e`` term by term; ``factor_fn(a, k)`` returns None to keep a factor."""
    hit = memo.get(e)
    if hit is not None:
        return hit
    parts = []
    changed = False
    for mono, c in e.terms:
        keep = []
        extras = []
        for a, k in mono:
            f = factor_fn(a, k)
            if f is None:
                keep.append((a, k))
            else:
                extras.append(f)
        if not extras:
            parts.append(Expr(((mono, c),)))
            continue
        changed = True
        t = Expr(((tuple(keep), c),))
        for f in extras:
            t = t * f
            if not t.terms:
                break
        parts.append(t)
    out = add_all(parts) if changed else e
    memo[e] = out
    return out


def _subs(e, table, keys, theta_changed, memo):
    func_keys = any(type(a) is Func for a in keys)
    if not func_keys and not (e.free_atoms() & keys):
        return e

    def factor(a, k):
        ta = type(a)
        if ta is Func or ta is PowBase or a is EXP:
            if not func_keys and not (_factor_expr(a, k).free_atoms() & keys):
                return None
        if a in table:
            r = table[a]
            if type(k) is int:
                return _int_power(r, k)
            if type(k) is tuple:
                m, n = k
                th = table.get(THETA, atom(THETA))
                return pow_(r, const(m) + const(n) * th)
        if ta is Jet and _is_lattice(a):
            if theta_changed and k[1]:
                m, n = k
                return pow_(atom(a), const(m) + const(n) * table[THETA])
            return None
        if ta in (Var, Param, Jet):
            return None
        if ta is Func:
            arg = _rebuild(a.arg, factor, memo)
            if arg is a.arg:
                return None
            return _int_power(FUNCS[a.name](arg), k)
        if ta is PowBase:
            b = _rebuild(a.base, factor, memo)
            ex = _rebuild(k, factor, memo)
            if b is a.base and ex is k:
                return None
            return pow_(b, ex)
        arg = _rebuild(k, factor, memo)
        if arg is k:
            return None
        return exp_(arg)
    return _rebuild(e, factor, memo)


def substitute(e: Expr, target, replacement) -> Expr:
    """Replace every occurrence of ``target`` (an atom or a kernel) by ``replacement``.

    Atoms and ``ln/sin/cos`` kernels are matched by identity.  ``exp`` and
    power kernels are matched as whole factors (same base and exponent).
    """
    replacement = as_expr(replacement)
    if isinstance(target, Atom):
        return subs(e, {target: replacement})
    target = as_expr(target)
    if len(target.terms) != 1 or target.terms[0][1] != 1 or len(target.terms[0][0]) != 1:
        raise ExprError(f"substitution target must be a single atom or kernel: {target}")
    a, k = target.terms[0][0][0]
    if not _expr_exponent(a):
        if k not in (1, (1, 0)):
            raise ExprError("substitution target must have unit exponent")
        return subs(e, {a: replacement})
    return map_factors(e, lambda fa, fk: replacement if (fa == a and fk == k) else None)


def map_factors(e: Expr, fn, _memo=None) -> Expr:
    """Rebuild ``e`` bottom-up; ``fn(atom, exp)`` may return a replacement Expr or None."""
    memo = {} if _memo is None else _memo

    def factor(a, k):
        r = fn(a, k)
        if r is not None:
            return r
        if type(a) is Func:
            arg = _rebuild(a.arg, factor, memo)
            return None if arg is a.arg else _int_power(FUNCS[a.name](arg), k)
        if type(a) is PowBase:
            b = _rebuild(a.base, factor, memo)
            ex = _rebuild(k, factor, memo)
            return None if (b is a.base and ex is k) else pow_(b, ex)
        if a is EXP:
            arg = _rebuild(k, factor, memo)
            return None if arg is k else exp_(arg)
        return None
    return _rebuild(e, factor, memo)


def collect(e: Expr, atoms) -> dict:
    """Coefficients of ``e`` as a polynomial in the given atoms (integer exponents)."""
    atoms = list(atoms)
    aset = set(atoms)
    out = {}
    for mono, c in e.terms:
        powers = dict.fromkeys(atoms, 0)
        rest = []
        for a, k in mono:
            if a in aset:
                if type(k) is tuple:
                    if k[1]:
                        raise ExprError("non-integer power of a collected atom")
                    k = k[0]
                powers[a] = k
            else:
                if any(x in aset for x in _factor_expr(a, k).free_atoms()):
                    raise ExprError(f"collected atom inside a kernel: {_factor_expr(a, k)}")
                rest.append((a, k))
        key = tuple(powers[a] for a in atoms)
        out[key] = out.get(key, ZERO) + Expr(((tuple(rest), c),))
    return {k: v for k, v in out.items() if v.terms}
