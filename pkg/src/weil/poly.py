"""Sparse multivariate polynomials with rational coefficients.

A polynomial is a dict mapping exponent tuples to nonzero Fractions.  Monomial
order is graded lexicographic with the variables in declared order, so for
variables ``x, y`` we have ``x^2 > x*y > y^2 > x > y > 1``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .linalg import fstr
from .parsing import ParseError, const_value

Monomial = tuple[int, ...]
Poly = dict[Monomial, Fraction]


def degree(m: Monomial) -> int:
    return sum(m)


def grlex_key(m: Monomial):
    """Sort key listing monomials in increasing grlex order.

    Within a degree the variable declared first comes first, matching how
    bases are displayed: ``1, x, y, x^2, x*y, y^2``.
    """
    return (sum(m), tuple(-e for e in m))


def monomials_below(nvars: int, k: int) -> list[Monomial]:
    """All monomials of total degree < k, in :func:`grlex_key` order."""
    out = []
    for d in range(k):
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for v in combo:
                e[v] += 1
            out.append(tuple(e))
    return sorted(set(out), key=grlex_key)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def add(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def scale(p: Poly, c) -> Poly:
    c = Fraction(c)
    if not c:
        return {}
    return {m: c * v for m, v in p.items()}


def mul(p: Poly, q: Poly, trunc: int | None = None) -> Poly:
    out: Poly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = mono_mul(m1, m2)
            if trunc is not None and sum(m) >= trunc:
                continue
            v = out.get(m, 0) + c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def power(p: Poly, n: int, nvars: int) -> Poly:
    out: Poly = {(0,) * nvars: Fraction(1)}
    for _ in range(n):
        out = mul(out, p)
    return out


def truncate(p: Poly, k: int) -> Poly:
    return {m: c for m, c in p.items() if sum(m) < k}


def constant_term(p: Poly, nvars: int) -> Fraction:
    return p.get((0,) * nvars, Fraction(0))


def format_monomial(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) or "1"


def format_poly(p: Poly, names: Sequence[str]) -> str:
    if not p:
        return "0"
    terms = []
    for m in sorted(p, key=grlex_key):
        c = p[m]
        mono = format_monomial(m, names)
        if mono == "1":
            body = fstr(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{fstr(abs(c))}*{mono}"
        terms.append(("-" if c < 0 else "+", body))
    sign, first = terms[0]
    out = ("-" if sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def from_ast(node, names: Sequence[str]) -> Poly:
    """Convert a syntax tree to a polynomial over the given variables."""
    index = {n: i for i, n in enumerate(names)}
    nvars = len(names)
    one = (0,) * nvars

    def conv(node) -> Poly:
        kind = node[0]
        if kind == "num":
            return {one: node[1]} if node[1] else {}
        if kind == "var":
            name, tok = node[1], node[2]
            if name not in index:
                raise UndeclaredVariable(name, tok.line, tok.col)
            e = [0] * nvars
            e[index[name]] = 1
            return {tuple(e): Fraction(1)}
        if kind == "neg":
            return scale(conv(node[1]), -1)
        if kind == "add":
            return add(conv(node[1]), conv(node[2]))
        if kind == "sub":
            return add(conv(node[1]), scale(conv(node[2]), -1))
        if kind == "mul":
            return mul(conv(node[1]), conv(node[2]))
        if kind == "div":
            d = const_value(node[2])
            tok = node[3]
            if d is None:
                raise ParseError("can only divide by a rational constant", tok.line, tok.col)
            if d == 0:
                raise ParseError("division by zero", tok.line, tok.col)
            return scale(conv(node[1]), 1 / d)
        if kind == "pow":
            e = const_value(node[2])
            tok = node[3]
            if e is None or e.denominator != 1 or e < 0:
                raise ParseError("exponent must be a non-negative integer", tok.line, tok.col)
            return power(conv(node[1]), int(e), nvars)
        if kind == "call":
            tok = node[3]
            raise ParseError(f"function {node[1]!r} not allowed in a polynomial", tok.line, tok.col)
        raise AssertionError(kind)

    return conv(node)


class UndeclaredVariable(ParseError):
    def __init__(self, name: str, line: int = 1, col: int = 1):
        super().__init__(f"undeclared variable {name!r}", line, col)
        self.name = name


def evaluate(p: Poly, values: Sequence, one, zero=None):
    """Evaluate ``p`` at ``values`` in any commutative ring.

    ``one`` is the ring's unit; products of ring elements must support ``*``,
    ``+`` and multiplication by a Fraction.
    """
    total = zero if zero is not None else one * 0
    for m, c in p.items():
        term = one
        for v, e in zip(values, m):
            for _ in range(e):
                term = term * v
        total = total + term * c
    return total


def iter_terms(p: Poly) -> Iterable[tuple[Monomial, Fraction]]:
    return sorted(p.items(), key=lambda t: grlex_key(t[0]))
