"""Recursive-descent parser for rational expressions.

Grammar (whitespace-insensitive)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom (('^' | '**') INT)?
    atom   := INT | DECIMAL | IDENT | 'sqrt' '(' expr ')' | '(' expr ')'

``sqrt`` of a rational constant yields an exact element of Q(sqrt d), which is
how printed quadratic coefficients read back in.  ``sqrt`` of a non-constant
expression yields a symbolic radical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .exact import MPoly, RatFunc, exact_sqrt, radical
from .exact.scalars import MixedFieldError, QuadNumber

__all__ = ["ParseError", "parse_expression", "parse_scalar"]


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, source: str = ""):
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column
        self.source = source


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<num>\d+\.\d*|\.\d+|\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(src: str):
    toks = []
    i = 0
    while i < len(src):
        m = _TOKEN.match(src, i)
        if m is None:
            raise ParseError(f"unexpected character {src[i]!r}", *_linecol(src, i), src)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), i))
        i = m.end()
    toks.append(_Tok("end", "", len(src)))
    return toks


def _linecol(src: str, pos: int):
    line = src.count("\n", 0, pos) + 1
    col = pos - (src.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, src: str, symbols: dict):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0
        self.symbols = symbols

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, *_linecol(self.src, tok.pos), self.src)

    def expect(self, text):
        tok = self.peek()
        if tok.text != text:
            self.error(f"expected {text!r}" + (" but input ended" if tok.kind == "end" else f", found {tok.text!r}"))
        return self.take()

    def parse(self):
        if self.peek().kind == "end":
            self.error("empty expression")
        value = self.expr()
        if self.peek().kind != "end":
            self.error(f"unexpected {self.peek().text!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take()
            rhs = self.term()
            try:
                value = value + rhs if op.text == "+" else value - rhs
            except MixedFieldError as exc:
                self.error(str(exc), op)
        return value

    def term(self):
        value = self.unary()
        while self.peek().text in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            try:
                if op.text == "*":
                    value = value * rhs
                else:
                    if not rhs:
                        self.error("division by the zero polynomial", op)
                    value = value / rhs
            except MixedFieldError as exc:
                self.error(str(exc), op)
        return value

    def unary(self):
        tok = self.peek()
        if tok.text == "-":
            self.take()
            return -self.unary()
        if tok.text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().text in ("^", "**"):
            self.take()
            tok = self.peek()
            if tok.kind != "num" or not tok.text.isdigit():
                self.error("exponent must be a nonnegative integer")
            self.take()
            return base ** int(tok.text)
        return base

    def atom(self):
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            return RatFunc.const(Fraction(tok.text))
        if tok.kind == "ident":
            self.take()
            if tok.text == "sqrt" and self.peek().text == "(":
                self.take()
                inner = self.expr()
                self.expect(")")
                if not isinstance(inner, RatFunc):
                    self.error("nested square roots are not supported", tok)
                if not inner.is_constant():
                    return radical(inner)
                value = inner.constant_value()
                if isinstance(value, QuadNumber):
                    self.error("nested square roots are not supported", tok)
                return _const(exact_sqrt(value))
            if tok.text not in self.symbols:
                self.error(f"unknown identifier {tok.text!r}", tok)
            value = self.symbols[tok.text]
            if value is None:
                return RatFunc.var(tok.text)
            return _const(value)
        if tok.text == "(":
            self.take()
            value = self.expr()
            self.expect(")")
            return value
        if tok.kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {tok.text!r}")


def _const(value):
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, MPoly):
        return RatFunc(value, None, True)
    if isinstance(value, QuadNumber) and not value.numeric:
        return value
    return RatFunc.const(value)


def parse_expression(src: str, symbols=None, variables=("x", "y")):
    """Parse ``src`` into a reduced :class:`RatFunc`.

    ``symbols`` maps identifiers to values; ``None`` keeps an identifier as a
    free generator.  ``variables`` are always free.
    """
    table = {v: None for v in variables}
    if symbols:
        table.update(symbols)
    return _Parser(src, table).parse()


def parse_scalar(src: str):
    """Parse an exact scalar literal such as ``3/4`` or ``1/2+3/2*sqrt(-3)``."""
    value = parse_expression(str(src), {}, variables=())
    if not value.is_constant():
        raise ParseError("scalar literal is not constant", 1, 1, str(src))
    return value.constant_value()
