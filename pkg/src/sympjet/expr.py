"""Small exact expression grammar for chart files.

Expressions are rational functions of the chart coordinates built from
integer literals, coordinate names, ``+ - * / ( )`` and ``^`` with a
non-negative integer exponent.  They are evaluated directly into jets
recentered at the chart base point, so division is exact series division
and requires the denominator to be nonzero at the base point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ChartParseError
from .jets import Jet
from .rationals import rat

_TOKEN_RE = re.compile(r"(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([()+\-*/^])")


@dataclass(frozen=True)
class _Token:
    kind: str  # "int" | "name" | "op" | "end"
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    lines = text.split("\n")
    for line_no, line in enumerate(lines, start=1):
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            match = _TOKEN_RE.match(line, pos)
            if match is None:
                raise ChartParseError(
                    f"unexpected character {line[pos]!r}", line_no, pos + 1
                )
            number, name, op = match.groups()
            kind = "int" if number else "name" if name else "op"
            tokens.append(_Token(kind, match.group(0), line_no, pos + 1))
            pos = match.end()
    tokens.append(_Token("end", "", len(lines), len(lines[-1]) + 1))
    return tokens


class _Parser:
    """Recursive descent over +- / */ / unary minus / ^int / parentheses."""

    def __init__(self, tokens: list[_Token], env: dict[str, Jet], n_vars: int, order: int):
        self.tokens = tokens
        self.pos = 0
        self.env = env
        self.n_vars = n_vars
        self.order = order

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise ChartParseError(message, tok.line, tok.col)

    def parse(self) -> Jet:
        value = self.additive()
        if self.peek().kind != "end":
            self.fail(f"unexpected trailing input {self.peek().text!r}")
        return value

    def additive(self) -> Jet:
        value = self.multiplicative()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            rhs = self.multiplicative()
            value = value + rhs if op == "+" else value - rhs
        return value

    def multiplicative(self) -> Jet:
        value = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.take().text
            op_tok = self.tokens[self.pos - 1]
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if not rhs.constant_term():
                    self.fail("division by an expression vanishing at the base point", op_tok)
                value = value * rhs.reciprocal()
        return value

    def unary(self) -> Jet:
        # unary minus binds looser than exponentiation: -x^2 == -(x^2)
        if self.peek().kind == "op" and self.peek().text == "-":
            self.take()
            return -self.unary()
        if self.peek().kind == "op" and self.peek().text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Jet:
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            exp_tok = self.peek()
            if exp_tok.kind != "int":
                self.fail("exponent must be a non-negative integer literal")
            self.take()
            return base ** int(exp_tok.text)
        return base

    def atom(self) -> Jet:
        tok = self.take()
        if tok.kind == "int":
            return Jet.const(self.n_vars, self.order, int(tok.text))
        if tok.kind == "name":
            jet = self.env.get(tok.text)
            if jet is None:
                self.fail(f"unknown coordinate {tok.text!r}", tok)
            return jet
        if tok.kind == "op" and tok.text == "(":
            value = self.additive()
            closing = self.take()
            if closing.kind != "op" or closing.text != ")":
                self.fail("expected ')'", closing)
            return value
        self.fail(f"unexpected token {tok.text or 'end of input'!r}", tok)


def coordinate_env(names, base_point, order: int) -> dict[str, Jet]:
    """Coordinates as jets recentered at the base point: x_i -> p_i + xi_i."""
    n = len(names)
    env = {}
    for i, name in enumerate(names):
        env[name] = Jet.variable(n, order, i) + Jet.const(n, order, rat(base_point[i]))
    return env


def jet_from_expression(text: str, names, base_point, order: int) -> Jet:
    """Parse and evaluate one expression into a recentered jet."""
    env = coordinate_env(names, base_point, order)
    parser = _Parser(_tokenize(text), env, len(names), order)
    return parser.parse()
