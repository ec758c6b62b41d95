"""Expression parser for skew polynomials.

Grammar (no implicit multiplication)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' INT)?
    atom   := INT | 'x' | <operator symbol> | '(' expr ')'

Products are noncommutative and evaluated left to right.  ``a / b`` means
a * b^-1 and needs an operator-free, nonzero b; a non-constant b moves the
result to the rational layer.
"""

from __future__ import annotations

import re

from .coeff import RatFunc
from .ore import DEFAULT_SYMBOLS, POLYNOMIAL, RATIONAL, AlgebraSpec, OreMatrix, OrePoly, mul


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1, source: str | None = None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}line {line}, column {column}: {message}")

    def relocated(self, line: int, column_offset: int, source: str | None = None) -> "ParseError":
        """Same error with positions shifted into an enclosing file."""
        col = self.column + column_offset if self.line == 1 else self.column
        return ParseError(self.message, line + self.line - 1, col, source)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))", re.S)


def _tokenize(text: str):
    toks = []
    pos = 0
    line, line_start = 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        # track newlines inside skipped whitespace
        skipped = text[pos : m.start(m.lastindex)] if m.lastindex else text[pos : m.end()]
        for i, ch in enumerate(skipped):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        if m.lastindex is None:
            break
        start = m.start(m.lastindex)
        col = start - line_start + 1
        if m.group(1):
            toks.append(("INT", m.group(1), line, col))
        elif m.group(2):
            toks.append(("NAME", m.group(2), line, col))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", line, col)
            toks.append((ch, ch, line, col))
        pos = m.end()
    end_col = n - line_start + 1
    toks.append(("EOF", "", line, end_col))
    return toks


def _unify(a: OrePoly, b: OrePoly):
    if a.layer == b.layer:
        return a, b
    return a.to_rational(), b.to_rational()


class _Parser:
    def __init__(self, text: str, algebra: AlgebraSpec):
        self.alg = algebra
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok[2], tok[3])

    def parse(self) -> OrePoly:
        if self.peek()[0] == "EOF":
            raise self.error("empty expression")
        val = self.expr()
        tok = self.peek()
        if tok[0] != "EOF":
            if tok[0] in ("INT", "NAME", "("):
                raise self.error(f"unexpected {tok[1]!r}; write an explicit '*' for products", tok)
            raise self.error(f"unexpected {tok[1]!r}", tok)
        if val.layer == RATIONAL and val.is_polynomial():
            val = val.to_polynomial()
        return val

    def expr(self) -> OrePoly:
        val = self.term()
        while self.peek()[0] in "+-" and self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            val, rhs = _unify(val, rhs)
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self) -> OrePoly:
        val = self.unary()
        while self.peek()[0] in ("*", "/"):
            op_tok = self.take()
            rhs = self.unary()
            if op_tok[0] == "*":
                val, rhs = _unify(val, rhs)
                val = mul(val, rhs)
            else:
                val = self._divide(val, rhs, op_tok)
        return val

    def _divide(self, val: OrePoly, rhs: OrePoly, tok) -> OrePoly:
        if rhs.is_zero():
            raise self.error("division by zero", tok)
        if not rhs.is_scalar():
            raise self.error(f"cannot divide by {rhs}: divisor involves {self.alg.symbol}", tok)
        if rhs.is_constant():
            return val * (1 / rhs.constant_value())
        c = rhs.coeff(0)
        inv = (c if isinstance(c, RatFunc) else RatFunc(c)).inverse()
        return mul(val.to_rational(), OrePoly.const(self.alg, inv, RATIONAL))

    def unary(self) -> OrePoly:
        if self.peek()[0] == "-":
            self.take()
            return -self.unary()
        if self.peek()[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> OrePoly:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "INT":
                raise self.error("exponent must be a nonnegative integer literal", tok)
            self.take()
            return base ** int(tok[1])
        return base

    def atom(self) -> OrePoly:
        tok = self.take()
        kind = tok[0]
        if kind == "INT":
            return OrePoly.const(self.alg, int(tok[1]))
        if kind == "NAME":
            name = tok[1]
            if name == "x":
                return OrePoly.x(self.alg)
            if name == self.alg.symbol:
                return OrePoly.op(self.alg)
            if name in DEFAULT_SYMBOLS.values():
                raise self.error(
                    f"operator symbol {name!r} does not belong to this {self.alg.kind} algebra "
                    f"(its operator is {self.alg.symbol!r})",
                    tok,
                )
            raise self.error(f"unknown symbol {name!r}", tok)
        if kind == "(":
            val = self.expr()
            if self.peek()[0] != ")":
                raise self.error("expected ')'")
            self.take()
            return val
        if kind == "EOF":
            raise self.error("unexpected end of expression", tok)
        raise self.error(f"unexpected {tok[1]!r}", tok)


def parse_expression(text: str, algebra: AlgebraSpec) -> OrePoly:
    """Parse ``text`` into canonical form; the layer is rational only if needed."""
    return _Parser(text, algebra).parse()


def parse_matrix(rows, algebra: AlgebraSpec) -> OreMatrix:
    """Rows of expression strings (or numbers) to an OreMatrix."""
    parsed = []
    for i, r in enumerate(rows):
        row = []
        for j, e in enumerate(r):
            if isinstance(e, OrePoly):
                row.append(e)
                continue
            try:
                row.append(parse_expression(str(e), algebra))
            except ParseError as err:
                raise ParseError(f"entry [{i}][{j}]: {err.message}", err.line, err.column) from None
        parsed.append(row)
    layer = RATIONAL if any(e.layer == RATIONAL for r in parsed for e in r) else POLYNOMIAL
    return OreMatrix(algebra, parsed, layer)


def serialize(f) -> str | list:
    """Canonical text of an OrePoly, or nested lists of it for a matrix."""
    if isinstance(f, OreMatrix):
        return f.to_strings()
    return str(f)
