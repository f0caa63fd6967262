"""The Weil functor on R^n: W-points and higher-order forward-mode AD.

A point of ``R^n (x) W`` is an n-vector of elements of W.  Smooth maps, given
as expression trees, act on such points by evaluating the tree in W.  An
elementary function g at ``a0 + h`` (h nilpotent) is the finite sum

    sum_{j < nu} g^(j)(a0) h^j / j!

where ``h^nu = 0``, so nothing is truncated beyond scalar rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from .algebra import AlgebraHom, AlgebraMismatch, Element, WeilAlgebra, nilpotency_index, weil_algebra
from .expr import Add, Const, Expr, Func, Mul, Neg, Pow, RPow, Var


class DomainError(ValueError):
    pass


class ModeError(ValueError):
    """Exact mode needed a derivative value that is not rational."""


@dataclass(frozen=True)
class Mode:
    exact: bool = True
    rtol: float = 1e-9

    def __str__(self):
        return "exact" if self.exact else f"float(rtol={self.rtol:g})"


EXACT = Mode(True)
FLOAT = Mode(False)


def as_mode(mode) -> Mode:
    if isinstance(mode, Mode):
        return mode
    if mode == "exact":
        return EXACT
    if mode == "float":
        return FLOAT
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class WPoint:
    """A point of ``R^n (x) W``."""

    algebra: WeilAlgebra
    coords: tuple[Element, ...]

    def __post_init__(self):
        for c in self.coords:
            if c.algebra is not self.algebra:
                raise AlgebraMismatch("WPoint coordinates live in different algebras")

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def base(self) -> tuple:
        return tuple(c.coords[0] for c in self.coords)

    def map_hom(self, phi: AlgebraHom) -> "WPoint":
        """Apply an algebra map coordinatewise: ``id_{R^n} (x) phi``."""
        return WPoint(phi.dst, tuple(phi(c) for c in self.coords))

    def to_vector(self) -> list:
        return [x for c in self.coords for x in c.coords]

    def isclose(self, other: "WPoint", rtol: float = 1e-9) -> bool:
        return self.n == other.n and all(a.isclose(b, rtol) for a, b in zip(self.coords, other.coords))

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def w_point(algebra: WeilAlgebra, base: Sequence, infinitesimal: Mapping | None = None) -> WPoint:
    """Assemble a W-point from its base point and nilpotent parts.

    ``infinitesimal`` maps basis labels (e.g. ``"x"`` or ``"x^2"``) or basis
    indices to n-vectors.
    """
    n = len(base)
    cols = [[Fraction(0) if not isinstance(b, float) else 0.0] * algebra.dim for b in base]
    for i, b in enumerate(base):
        cols[i][0] = b
    for key, vec in (infinitesimal or {}).items():
        idx = algebra.basis.index(key) if isinstance(key, str) else int(key)
        if idx == 0:
            raise ValueError("the unit coordinate is the base point, not an infinitesimal part")
        if len(vec) != n:
            raise ValueError(f"infinitesimal part for {key!r} has length {len(vec)}, expected {n}")
        for i, v in enumerate(vec):
            cols[i][idx] = v
    return WPoint(algebra, tuple(algebra.element(c) for c in cols))


def _to_float(a: Element) -> Element:
    return Element(a.algebra, tuple(float(c) for c in a.coords))


def eval_jet(f: Expr, p: WPoint, mode=EXACT) -> Element:
    """Evaluate ``f`` at the W-point ``p``."""
    mode = as_mode(mode)
    if f.arity() > p.n:
        raise ValueError(f"expression uses {f.arity()} variables, point has {p.n}")
    args = p.coords if mode.exact else tuple(_to_float(c) for c in p.coords)
    w = p.algebra
    for c in args:
        if mode.exact and any(isinstance(x, float) for x in c.coords):
            raise ModeError("exact mode needs rational coordinates")
    memo: dict[int, Element] = {}

    def ev(e: Expr) -> Element:
        key = id(e)
        if key in memo:
            return memo[key]
        if isinstance(e, Var):
            out = args[e.index]
        elif isinstance(e, Const):
            out = w.scalar(e.value if mode.exact else float(e.value))
        elif isinstance(e, Add):
            out = ev(e.terms[0])
            for t in e.terms[1:]:
                out = out + ev(t)
        elif isinstance(e, Mul):
            out = ev(e.factors[0])
            for t in e.factors[1:]:
                out = out * ev(t)
        elif isinstance(e, Neg):
            out = -ev(e.arg)
        elif isinstance(e, Pow):
            out = ev(e.arg) ** e.n
        elif isinstance(e, RPow):
            out = apply_function("pow", ev(e.arg), mode, exponent=Fraction(e.exponent))
        elif isinstance(e, Func):
            out = apply_function(e.name, ev(e.arg), mode)
        else:
            raise TypeError(f"not an expression: {e!r}")
        memo[key] = out
        return out

    return ev(f)


def apply_function(name: str, a: Element, mode: Mode, exponent: Fraction | None = None) -> Element:
    """Elementary function of an algebra element via its finite Taylor sum."""
    a0 = a.coords[0]
    h = a - a0
    if mode.exact:
        nu = nilpotency_index(h)
    else:
        nu = a.algebra.loewy_length
    derivs = _derivatives(name, a0, nu, mode, exponent)
    out = a.algebra.zero
    hj = a.algebra.one
    fact = 1
    for j, dj in enumerate(derivs):
        if j:
            hj = hj * h
            fact *= j
        if dj:
            out = out + hj * (dj / fact if mode.exact else dj / float(fact))
    return out


def _derivatives(name: str, a0, nu: int, mode: Mode, exponent: Fraction | None) -> list:
    """Values g(a0), g'(a0), ..., g^(nu-1)(a0)."""
    if name == "sqrt":
        name, exponent = "pow", Fraction(1, 2)
    if mode.exact:
        return _exact_derivatives(name, Fraction(a0), nu, exponent)
    x = float(a0)
    if name == "exp":
        return [math.exp(x)] * nu
    if name in ("sin", "cos"):
        s, c = math.sin(x), math.cos(x)
        cycle = [s, c, -s, -c] if name == "sin" else [c, -s, -c, s]
        return [cycle[j % 4] for j in range(nu)]
    if name == "log":
        if x <= 0:
            raise DomainError(f"log at non-positive base point {x}")
        return [math.log(x)] + [(-1) ** (j - 1) * math.factorial(j - 1) / x ** j for j in range(1, nu)]
    if name == "pow":
        r = float(exponent)
        _check_pow_domain(x, exponent, nu)
        out = []
        falling = 1.0
        for j in range(nu):
            out.append(falling * x ** (r - j) if falling else 0.0)
            falling *= r - j
        return out
    raise ValueError(f"unknown function {name!r}")


def _check_pow_domain(x, exponent: Fraction, nu: int):
    if x < 0 and exponent.denominator != 1:
        raise DomainError(f"non-integer power of negative base point {x}")
    if x == 0:
        # derivative j needs x^(r-j); a problem only if the coefficient survives
        for j in range(nu):
            coeff_zero = exponent.denominator == 1 and 0 <= exponent < j
            if exponent - j < 0 and not coeff_zero:
                raise DomainError(f"pow({exponent}) is not differentiable at 0")


def _exact_derivatives(name: str, x: Fraction, nu: int, exponent: Fraction | None) -> list:
    def irrational():
        return ModeError(f"{name} at {x} has irrational Taylor coefficients; use float mode")

    if name == "exp":
        if x != 0:
            raise irrational()
        return [Fraction(1)] * nu
    if name in ("sin", "cos"):
        if x != 0:
            raise irrational()
        cycle = [0, 1, 0, -1] if name == "sin" else [1, 0, -1, 0]
        return [Fraction(cycle[j % 4]) for j in range(nu)]
    if name == "log":
        if x <= 0:
            raise DomainError(f"log at non-positive base point {x}")
        if x != 1:
            raise irrational()
        return [Fraction(0)] + [Fraction((-1) ** (j - 1) * math.factorial(j - 1)) / x ** j
                                for j in range(1, nu)]
    if name == "pow":
        _check_pow_domain(x, exponent, nu)
        out = []
        falling = Fraction(1)
        for j in range(nu):
            if falling:
                out.append(falling * rational_power(x, exponent - j))
            else:
                out.append(Fraction(0))
            falling *= exponent - j
        return out
    raise ValueError(f"unknown function {name!r}")


def _iroot(n: int, q: int) -> int | None:
    if n < 0:
        return None
    if n < 2:
        return n
    lo, hi = 0, 1 << (n.bit_length() // q + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** q <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo if lo ** q == n else None


def rational_power(x: Fraction, r: Fraction) -> Fraction:
    """``x ** r`` when it is rational, else ModeError."""
    if x == 0:
        if r > 0:
            return Fraction(0)
        raise DomainError("zero to a non-positive power")
    p, q = r.numerator, r.denominator
    sign = 1
    if x < 0:
        if q % 2 == 0:
            raise DomainError("even root of a negative number")
        sign = -1
        x = -x
    num, den = _iroot(x.numerator, q), _iroot(x.denominator, q)
    if num is None or den is None:
        raise ModeError(f"{x}^({r}) is irrational; use float mode")
    root = Fraction(num, den) * (sign if q % 2 else 1)
    return root ** p


def prolong_map(fs: Sequence[Expr], algebra: WeilAlgebra, mode=EXACT) -> Callable[[WPoint], WPoint]:
    """``f (x) W`` for ``f = (fs[0], ..., fs[n-1]) : R^m -> R^n``."""
    fs = tuple(fs)
    m = max((f.arity() for f in fs), default=0)

    def apply(p: WPoint) -> WPoint:
        if p.algebra is not algebra:
            raise AlgebraMismatch("point lives over a different algebra")
        if p.n < m:
            raise ValueError(f"map needs {m} coordinates, point has {p.n}")
        return WPoint(algebra, tuple(eval_jet(f, p, mode) for f in fs))

    apply.arity = m
    return apply


@lru_cache(maxsize=None)
def truncated_algebra(k: int) -> WeilAlgebra:
    """``Q[x]/(x^(k+1))``, which carries derivatives up to order k."""
    return weil_algebra(f"x | x^{k + 1} ; nil {k + 1}", name=f"D{k}")


def taylor_coefficients(f: Expr, x0, k: int, mode=FLOAT) -> list:
    """``[f(x0), f'(x0), f''(x0)/2, ..., f^(k)(x0)/k!]``."""
    mode = as_mode(mode)
    w = truncated_algebra(k)
    x0 = Fraction(x0) if mode.exact else float(x0)
    p = WPoint(w, (w.scalar(x0) + w.gen(0),))
    return list(eval_jet(f, p, mode).coords)


@dataclass(frozen=True)
class ProlongationSpace:
    """``R^n (x) W`` as a linear space of dimension ``n * dim W``."""

    n: int
    algebra: WeilAlgebra

    @property
    def linear_dim(self) -> int:
        return self.n * self.algebra.dim

    def project(self, p: WPoint) -> tuple:
        return p.base

    def split(self, p: WPoint) -> list[WPoint]:
        """``R^n (x) W = (R (x) W)^n``."""
        return [WPoint(p.algebra, (c,)) for c in p.coords]

    def join(self, parts: Sequence[WPoint]) -> WPoint:
        return WPoint(self.algebra, tuple(c for q in parts for c in q.coords))

    def from_vector(self, v: Sequence) -> WPoint:
        d = self.algebra.dim
        if len(v) != self.linear_dim:
            raise ValueError("vector has the wrong length")
        return WPoint(self.algebra, tuple(self.algebra.element(v[i * d:(i + 1) * d]) for i in range(self.n)))

    def contains(self, p: WPoint) -> bool:
        return p.algebra is self.algebra and p.n == self.n


def prolongation_space(n: int, algebra: WeilAlgebra) -> ProlongationSpace:
    if n < 0:
        raise ValueError("dimension must be non-negative")
    return ProlongationSpace(n, algebra)
