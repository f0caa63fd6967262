"""Expression trees for smooth maps R^m -> R.

Variables are ``u0, u1, ...``.  Trees support ``+ - * **`` so tests can build
them directly, and :func:`parse_expr` reads the textual form::

    u0^3 + 2*u0*u1 - exp(sin(u1)) + pow(u0, 1/2)
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .parsing import ParseError, const_value, parse_expression

FUNCTIONS = ("exp", "log", "sin", "cos", "sqrt")


class Expr:
    def __add__(self, other):
        return Add((self, lift(other)))

    def __radd__(self, other):
        return Add((lift(other), self))

    def __sub__(self, other):
        return Add((self, Neg(lift(other))))

    def __rsub__(self, other):
        return Add((lift(other), Neg(self)))

    def __mul__(self, other):
        return Mul((self, lift(other)))

    def __rmul__(self, other):
        return Mul((lift(other), self))

    def __neg__(self):
        return Neg(self)

    def __pow__(self, n):
        if isinstance(n, int) and n >= 0:
            return Pow(self, n)
        return RPow(self, Fraction(n))

    def arity(self) -> int:
        """One more than the largest variable index used."""
        return max((c.arity() for c in self.children()), default=0)

    def children(self) -> tuple["Expr", ...]:
        return ()


def lift(x) -> Expr:
    return x if isinstance(x, Expr) else Const(Fraction(x))


@dataclass(frozen=True, eq=True)
class Var(Expr):
    index: int

    def arity(self):
        return self.index + 1

    def __str__(self):
        return f"u{self.index}"


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: Fraction

    def __str__(self):
        v = Fraction(self.value)
        return str(v.numerator) if v.denominator == 1 else f"({v.numerator}/{v.denominator})"


@dataclass(frozen=True, eq=True)
class Add(Expr):
    terms: tuple[Expr, ...]

    def children(self):
        return self.terms

    def __str__(self):
        return "(" + " + ".join(map(str, self.terms)) + ")"


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    factors: tuple[Expr, ...]

    def children(self):
        return self.factors

    def __str__(self):
        return "*".join(map(str, self.factors))


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"(-{self.arg})"


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    arg: Expr
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("integer powers must be non-negative")

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"({self.arg})^{self.n}"


@dataclass(frozen=True, eq=True)
class RPow(Expr):
    """``arg ** exponent`` for a real (here rational) exponent."""

    arg: Expr
    exponent: Fraction

    def children(self):
        return (self.arg,)

    def __str__(self):
        e = Fraction(self.exponent)
        return f"pow({self.arg}, {e.numerator}/{e.denominator})"


@dataclass(frozen=True, eq=True)
class Func(Expr):
    name: str
    arg: Expr

    def __post_init__(self):
        if self.name not in FUNCTIONS:
            raise ValueError(f"unknown function {self.name!r}")

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"{self.name}({self.arg})"


def exp(e):
    return Func("exp", lift(e))


def log(e):
    return Func("log", lift(e))


def sin(e):
    return Func("sin", lift(e))


def cos(e):
    return Func("cos", lift(e))


def sqrt(e):
    return Func("sqrt", lift(e))


def var(i: int) -> Var:
    return Var(i)


_VAR_RE = re.compile(r"u(\d+)$")


def parse_expr(text: str) -> Expr:
    """Parse the textual form of an expression."""
    return _from_ast(parse_expression(text))


def _from_ast(node) -> Expr:
    kind = node[0]
    if kind == "num":
        return Const(node[1])
    if kind == "var":
        m = _VAR_RE.match(node[1])
        if not m:
            tok = node[2]
            raise ParseError(f"unknown variable {node[1]!r} (use u0, u1, ...)", tok.line, tok.col)
        return Var(int(m.group(1)))
    if kind == "neg":
        return Neg(_from_ast(node[1]))
    if kind == "add":
        return Add((_from_ast(node[1]), _from_ast(node[2])))
    if kind == "sub":
        return Add((_from_ast(node[1]), Neg(_from_ast(node[2]))))
    if kind == "mul":
        return Mul((_from_ast(node[1]), _from_ast(node[2])))
    if kind == "div":
        d = const_value(node[2])
        if d is not None:
            if d == 0:
                raise ParseError("division by zero", node[3].line, node[3].col)
            return Mul((_from_ast(node[1]), Const(1 / d)))
        return Mul((_from_ast(node[1]), RPow(_from_ast(node[2]), Fraction(-1))))
    if kind == "pow":
        e = const_value(node[2])
        tok = node[3]
        if e is None:
            raise ParseError("exponent must be a rational constant", tok.line, tok.col)
        if e.denominator == 1 and e >= 0:
            return Pow(_from_ast(node[1]), int(e))
        return RPow(_from_ast(node[1]), e)
    if kind == "call":
        name, args, tok = node[1], node[2], node[3]
        if name == "pow":
            if len(args) != 2:
                raise ParseError("pow takes two arguments", tok.line, tok.col)
            e = const_value(args[1])
            if e is None:
                raise ParseError("pow exponent must be a rational constant", tok.line, tok.col)
            return RPow(_from_ast(args[0]), e)
        if name not in FUNCTIONS:
            raise ParseError(f"unknown function {name!r}", tok.line, tok.col)
        if len(args) != 1:
            raise ParseError(f"{name} takes one argument", tok.line, tok.col)
        return Func(name, _from_ast(args[0]))
    raise AssertionError(kind)


def evaluate(e: Expr, values) -> float | Fraction:
    """Classical evaluation at a point (floats, or Fractions for polynomials)."""
    if isinstance(e, Var):
        return values[e.index]
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Add):
        return sum((evaluate(t, values) for t in e.terms), Fraction(0))
    if isinstance(e, Mul):
        out = Fraction(1)
        for f in e.factors:
            out = out * evaluate(f, values)
        return out
    if isinstance(e, Neg):
        return -evaluate(e.arg, values)
    if isinstance(e, Pow):
        return evaluate(e.arg, values) ** e.n
    if isinstance(e, RPow):
        return float(evaluate(e.arg, values)) ** float(e.exponent)
    if isinstance(e, Func):
        x = float(evaluate(e.arg, values))
        return {"exp": math.exp, "log": math.log, "sin": math.sin,
                "cos": math.cos, "sqrt": math.sqrt}[e.name](x)
    raise TypeError(f"not an expression: {e!r}")


def is_polynomial(e: Expr) -> bool:
    if isinstance(e, (Func, RPow)):
        return False
    return all(is_polynomial(c) for c in e.children())


def substitute(e: Expr, args) -> Expr:
    """``e(args[0], args[1], ...)``: replace each variable by an expression."""
    if isinstance(e, Var):
        return args[e.index]
    if isinstance(e, Const):
        return e
    if isinstance(e, Add):
        return Add(tuple(substitute(t, args) for t in e.terms))
    if isinstance(e, Mul):
        return Mul(tuple(substitute(t, args) for t in e.factors))
    if isinstance(e, Neg):
        return Neg(substitute(e.arg, args))
    if isinstance(e, Pow):
        return Pow(substitute(e.arg, args), e.n)
    if isinstance(e, RPow):
        return RPow(substitute(e.arg, args), e.exponent)
    if isinstance(e, Func):
        return Func(e.name, substitute(e.arg, args))
    raise TypeError(f"not an expression: {e!r}")
