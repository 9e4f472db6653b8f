"""Recursive-descent parser for the expression grammar.

Grammar (EBNF)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = ("-" | "+") unary | power ;
    power   = primary [ "^" unary ] ;               (* right associative *)
    primary = number | name | func "(" expr ")" | "(" expr ")" ;
    func    = "exp" | "ln" | "sin" | "cos" ;
    name    = var | jet | param ;
    var     = "x" | "y" | "t" ;
    jet     = ("phi" | "psi") [ "_" { "x" | "y" | "t" } ] ;
    number  = digits [ "." digits ] ;               (* exact decimal *)

Parameters are the built-in names in ``KNOWN_PARAMS`` plus any names passed
through ``params=``.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .core import FUNCS, Expr, ExprError, Jet, JetOrderError, atom, const, param, pow_, var

KNOWN_PARAMS = frozenset(
    ["h", "theta", "gamma", "tau", "k", "kappa", "eps", "lam", "mu1", "b2", "a2", "a4", "a5",
     "d1", "d2", "sigma1", "sigma2", "X", "Y", "G", "Gp", "Gpp",
     "F", "F_X", "F_Y", "F_XX", "F_XY", "F_YY"]
    + [f"c{i}" for i in range(1, 6)]
    + [f"alpha{i}" for i in range(1, 6)]
    + [f"eps{i}" for i in range(1, 6)]
    + [f"beta{i}" for i in range(1, 6)]
)

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(.))")
_JET = re.compile(r"^(phi|psi)(?:_([xyt]+))?$")


class ParseError(ExprError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1) is not None:
            out.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), start))
        elif m.group(3) is not None:
            out.append(("op", m.group(3), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def name_to_expr(name: str, params=frozenset(), pos: int = 0) -> Expr:
    if name in ("x", "y", "t"):
        return var(name)
    m = _JET.match(name)
    if m:
        sub = m.group(2) or ""
        try:
            return atom(Jet(m.group(1), sub.count("x"), sub.count("y"), sub.count("t")))
        except JetOrderError as exc:
            raise ParseError(str(exc), pos) from None
    if name in KNOWN_PARAMS or name in params:
        return param(name)
    raise ParseError(f"unknown identifier {name!r}", pos)


class _Parser:
    def __init__(self, text, params):
        self.toks = _tokens(text)
        self.i = 0
        self.params = frozenset(params)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise ParseError(f"expected {op!r}, found {t[1] or 'end of input'!r}", t[2])

    def expr(self):
        e = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            r = self.term()
            e = e + r if op == "+" else e - r
        return e

    def term(self):
        e = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            _, op, pos = self.take()
            r = self.unary()
            if op == "*":
                e = e * r
            else:
                if r.is_zero():
                    raise ParseError("division by zero", pos)
                e = e / r
        return e

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            u = self.unary()
            return -u if t[1] == "-" else u
        return self.power()

    def power(self):
        b = self.primary()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            e = self.unary()
            try:
                return pow_(b, e)
            except ExprError as exc:
                raise ParseError(str(exc), t[2]) from None
        return b

    def primary(self):
        kind, val, pos = self.take()
        if kind == "num":
            return const(Fraction(val))
        if kind == "name":
            if val in FUNCS and self.peek()[0] == "op" and self.peek()[1] == "(":
                self.take()
                arg = self.expr()
                self.expect(")")
                try:
                    return FUNCS[val](arg)
                except ExprError as exc:
                    raise ParseError(str(exc), pos) from None
            return name_to_expr(val, self.params, pos)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


def parse(text: str, params=()) -> Expr:
    """Parse ``text`` into a normalized Expr; errors carry the character position."""
    p = _Parser(text, params)
    e = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {val!r}", pos)
    return e
