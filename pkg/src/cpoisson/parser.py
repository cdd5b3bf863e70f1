"""Recursive-descent parser for the expression grammar.

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ('^' integer)? | '-' factor
    atom   := 'z'DIGITS | 'zb'DIGITS | identifier | number | '(' expr ')'
    number := decimal with an optional trailing 'i'

A bare ``i`` is the imaginary unit.  Rational literals are written as
divisions (``3/4``); decimals are converted exactly (``0.5`` is ``1/2``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Collection

from sympy import QQ, QQ_I

from cpoisson.expr import Expr, function_base, jet_suffix, parse_coord, symbol_kind

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?i?|\.\d+i?)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


class ParseError(ValueError):
    """Syntax or semantic error in an expression string."""

    def __init__(self, message: str, text: str = "", pos: int | None = None):
        self.message = message
        self.text = text
        self.pos = pos
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}" + (f" in {text!r}" if text else ""))


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: str
    pos: int


def tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            bad = len(text[pos:]) - len(text[pos:].lstrip()) + pos
            raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, n: int, symbols: Collection[str] | None):
        self.text = text
        self.n = n
        self.symbols = None if symbols is None else set(symbols)
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise ParseError(msg, self.text, tok.pos)

    def accept(self, op: str) -> bool:
        if self.tok.kind == "op" and self.tok.value == op:
            self.i += 1
            return True
        return False

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.value!r}")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while True:
            if self.accept("+"):
                e = e + self.term()
            elif self.accept("-"):
                e = e - self.term()
            else:
                return e

    def term(self) -> Expr:
        e = self.factor()
        while True:
            if self.accept("*"):
                e = e * self.factor()
            elif self.tok.kind == "op" and self.tok.value == "/":
                slash = self.tok
                self.i += 1
                rhs = self.factor()
                if rhs.is_zero():
                    self.error("division by zero", slash)
                e = e / rhs
            else:
                return e

    def factor(self) -> Expr:
        if self.accept("-"):
            return -self.factor()
        start = self.tok
        base = self.atom()
        if self.accept("^"):
            sign = -1 if self.accept("-") else 1
            if self.tok.kind != "num" or not self.tok.value.isdigit():
                self.error("exponent must be an integer")
            k = sign * int(self.tok.value)
            self.i += 1
            if k < 0 and base.is_zero():
                self.error("negative power of zero", start)
            return base**k
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            imag = tok.value.endswith("i")
            val = Fraction(tok.value[:-1] if imag else tok.value)
            return Expr.const(_exact(val, imag))
        if tok.kind == "ident":
            self.i += 1
            return self.identifier(tok)
        if self.accept("("):
            e = self.expr()
            if not self.accept(")"):
                self.error("expected ')'")
            return e
        if tok.kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {tok.value!r}")

    def identifier(self, tok: _Tok) -> Expr:
        name = tok.value
        if name == "i":
            return Expr.const(_exact(Fraction(1), True))
        try:
            kind = symbol_kind(name)
        except ValueError:
            self.error(f"unknown variable {name!r}", tok)
        if kind == "coord":
            self.check_index(name, tok)
        elif kind == "func":
            for s in jet_suffix(name):
                self.check_index(s, tok)
            if self.symbols is not None and function_base(name) not in self.symbols:
                self.error(f"unknown function {function_base(name)!r}", tok)
        elif self.symbols is not None and name not in self.symbols:
            self.error(f"unknown constant {name!r}", tok)
        return Expr.symbol(name)

    def check_index(self, name: str, tok: _Tok):
        j, _ = parse_coord(name)
        if j > self.n:
            self.error(f"index out of range: {name} in a chart of dimension {self.n}", tok)


def _exact(val: Fraction, imag: bool):
    q = QQ(val.numerator, val.denominator)
    return QQ_I(0, q) if imag else QQ_I(q, 0)


def parse(text: str, n: int, symbols: Collection[str] | None = None) -> Expr:
    """Parse ``text`` into a canonical :class:`Expr` on an ``n``-dimensional chart.

    ``symbols``, when given, lists the allowed constant names (both members
    of a conjugate pair) and generic function base names; any other
    identifier is rejected.
    """
    if n < 1:
        raise ValueError("chart dimension must be positive")
    if not text.strip():
        raise ParseError("empty expression", text, 0)
    return _Parser(text, n, symbols).parse()
