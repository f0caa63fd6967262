"""Tokenizer and recursive-descent parser shared by presentations, element
strings and jet expressions.

The parser produces a small tuple-based syntax tree; callers turn it into
polynomials (:mod:`weil.poly`) or expression trees (:mod:`weil.expr`).

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | IDENT | IDENT '(' expr (',' expr)* ')' | '(' expr ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 1, col: int = 1):
        super().__init__(f"{msg} (line {line}, column {col})")
        self.msg = msg
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # 'num', 'ident', 'op', 'end'
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)"
    r"|(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),|;])"
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "ws":
            for k, ch in enumerate(s):
                if ch == "\n":
                    line += 1
                    line_start = pos + k + 1
        else:
            tokens.append(Token(kind, s, line, col))
        pos = m.end()
    tokens.append(Token("end", "", line, pos - line_start + 1))
    return tokens


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def accept(self, text: str) -> Token | None:
        if self.tok.kind == "op" and self.tok.text == text:
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, text: str) -> Token:
        t = self.accept(text)
        if t is None:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return t

    def at_end(self) -> bool:
        return self.tok.kind == "end"

    def expect_end(self):
        if not self.at_end():
            raise self.error(f"unexpected {self.tok.text!r}")

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            raise self.error("expected identifier")
        t = self.tok
        self.i += 1
        return t

    def integer(self) -> int:
        t = self.tok
        if t.kind != "num" or not t.text.isdigit():
            raise self.error("expected a non-negative integer")
        self.i += 1
        return int(t.text)

    def expr(self):
        node = self.term()
        while True:
            if self.accept("+"):
                node = ("add", node, self.term())
            elif self.accept("-"):
                node = ("sub", node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            if self.accept("*"):
                node = ("mul", node, self.unary())
            elif t := self.accept("/"):
                node = ("div", node, self.unary(), t)
            else:
                return node

    def unary(self):
        if self.accept("-"):
            return ("neg", self.unary())
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if t := self.accept("^"):
            return ("pow", base, self.unary(), t)
        return base

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return ("num", Fraction(t.text))
        if t.kind == "ident":
            self.i += 1
            if self.accept("("):
                args = [self.expr()]
                while self.accept(","):
                    args.append(self.expr())
                self.expect(")")
                return ("call", t.text, tuple(args), t)
            return ("var", t.text, t)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        found = t.text or "end of input"
        raise self.error(f"unexpected {found!r}")


def parse_expression(text: str):
    p = Parser(text)
    node = p.expr()
    p.expect_end()
    return node


def const_value(node) -> Fraction | None:
    """Fold a syntax tree to a rational if it is built from literals only."""
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind == "neg":
        v = const_value(node[1])
        return None if v is None else -v
    if kind in ("add", "sub", "mul", "div"):
        a, b = const_value(node[1]), const_value(node[2])
        if a is None or b is None:
            return None
        if kind == "add":
            return a + b
        if kind == "sub":
            return a - b
        if kind == "mul":
            return a * b
        if b == 0:
            raise ParseError("division by zero", node[3].line, node[3].col)
        return a / b
    if kind == "pow":
        a, e = const_value(node[1]), const_value(node[2])
        if a is None or e is None or e.denominator != 1:
            return None
        if a == 0 and e < 0:
            raise ParseError("division by zero", node[3].line, node[3].col)
        return a ** int(e)
    return None
