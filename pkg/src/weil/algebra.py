"""Finite-dimensional Weil algebras over the rationals.

A Weil algebra is stored as an ordered basis (the unit first) together with a
sparse table of structure constants.  Algebras built from a presentation also
remember the presentation and the monomial behind each basis element, which
is what lets homomorphisms be specified by generator images.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import poly as P
from .linalg import Matrix, fstr, inverse, rank, rref
from .parsing import ParseError, Parser


class WeilError(Exception):
    """Base class for algebraic failures (as opposed to syntax errors)."""


class NotWeil(WeilError):
    pass


class DegenerateQuotient(WeilError):
    pass


class NotAHom(WeilError):
    pass


class RelationViolated(WeilError):
    def __init__(self, relation: str):
        super().__init__(f"relation {relation} is not sent to 0")
        self.relation = relation


class NotInMaximalIdeal(WeilError):
    def __init__(self, index: int, image: str):
        super().__init__(f"image {image} of generator {index} has nonzero augmentation")
        self.index = index


class AlgebraMismatch(WeilError, TypeError):
    pass


class ConstantTermError(ParseError):
    pass


# -- presentations ------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    vars: tuple[str, ...]
    relations: tuple[tuple[tuple[P.Monomial, Fraction], ...], ...]
    nil: int

    @classmethod
    def from_polys(cls, vars: Sequence[str], polys: Iterable[P.Poly], nil: int) -> "Presentation":
        rels = tuple(tuple(P.iter_terms(p)) for p in polys)
        pres = cls(tuple(vars), rels, int(nil))
        pres.validate()
        return pres

    @property
    def polys(self) -> list[P.Poly]:
        return [dict(r) for r in self.relations]

    def validate(self):
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"duplicate generator names in {self.vars}")
        if self.nil < 1:
            raise ValueError("nilpotency bound must be at least 1")
        n = len(self.vars)
        for r in self.polys:
            if any(len(m) != n for m in r):
                raise ValueError("relation refers to undeclared variables")
            if P.constant_term(r, n):
                raise ValueError(f"relation {P.format_poly(r, self.vars)} has a nonzero constant term")

    def relation_strings(self) -> list[str]:
        return [P.format_poly(r, self.vars) for r in self.polys]

    def __str__(self) -> str:
        rels = ", ".join(self.relation_strings())
        left = ",".join(self.vars)
        return f"{left} | {rels} ; nil {self.nil}".replace("|  ;", "| ;").strip()


def parse_presentation(text: str) -> Presentation:
    """Parse ``vars | relations ; nil k``.

    >>> str(parse_presentation("x,y | x^2, y^2, x*y ; nil 2"))
    'x,y | x^2, y^2, x*y ; nil 2'
    """
    p = Parser(text)
    names: list[str] = []
    if not p.accept("|"):
        while True:
            t = p.ident()
            if t.text in names:
                raise ParseError(f"duplicate variable {t.text!r}", t.line, t.col)
            names.append(t.text)
            if p.accept("|"):
                break
            p.expect(",")
    polys = []
    if not p.accept(";"):
        while True:
            start = p.tok
            rel = P.from_ast(p.expr(), names)
            if P.constant_term(rel, len(names)):
                raise ConstantTermError("relation has a nonzero constant term", start.line, start.col)
            polys.append(rel)
            if p.accept(";"):
                break
            p.expect(",")
    if names and not polys:
        raise ParseError("an empty relation list is only allowed with no variables",
                         p.tok.line, p.tok.col)
    kw = p.ident()
    if kw.text != "nil":
        raise ParseError("expected 'nil'", kw.line, kw.col)
    t = p.tok
    k = p.integer()
    if k < 1:
        raise ParseError("nilpotency bound must be at least 1", t.line, t.col)
    p.expect_end()
    return Presentation.from_polys(names, polys, k)


# -- algebras -------------------------------------------------------------------

SparseVec = tuple[tuple[int, Fraction], ...]

_uids = itertools.count(1)


def _sparse(vec: Sequence) -> SparseVec:
    return tuple((k, Fraction(c)) for k, c in enumerate(vec) if c)


class WeilAlgebra:
    """A local commutative algebra ``Q.1 + m`` with ``m`` nilpotent.

    Instances are immutable; identity is object identity (``uid``), and
    ``key`` is a structural fingerprint of the presentation or table.
    """

    def __init__(self, labels: Sequence[str], table: Sequence[Sequence[SparseVec]], *,
                 presentation: Presentation | None = None,
                 monomials: Sequence[P.Monomial] | None = None,
                 generators: Sequence[Sequence] | None = None,
                 name: str | None = None):
        self.basis = tuple(labels)
        self.dim = len(self.basis)
        self._table = tuple(tuple(row) for row in table)
        self.presentation = presentation
        self.monomials = tuple(monomials) if monomials is not None else None
        self.name = name
        self.uid = next(_uids)
        if presentation is not None:
            self.key = hash(("pres", str(presentation)))
        else:
            self.key = hash(("table", self.basis, self._table))
        self.generators = tuple(self.element(g) for g in (generators or ()))
        self._loewy: int | None = None

    # construction helpers
    @classmethod
    def from_structure(cls, labels, table, **kw) -> "WeilAlgebra":
        """Build from dense or sparse structure constants and verify every axiom."""
        d = len(labels)
        if d == 0:
            raise DegenerateQuotient("an algebra of dimension 0 is not a Weil algebra")
        sparse = []
        for i in range(d):
            row = []
            for j in range(d):
                entry = table[i][j]
                if entry and not isinstance(entry[0], tuple):
                    entry = _sparse(entry)
                row.append(tuple((k, Fraction(c)) for k, c in entry if c))
            sparse.append(row)
        alg = cls(labels, sparse, **kw)
        alg.verify()
        return alg

    @property
    def vars(self) -> tuple[str, ...]:
        return self.presentation.vars if self.presentation else ()

    def __repr__(self) -> str:
        desc = self.name or (str(self.presentation) if self.presentation else f"dim {self.dim}")
        return f"WeilAlgebra({desc!r})"

    # elements
    def element(self, coords: Sequence) -> "Element":
        coords = tuple(coords)
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(coords)}")
        return Element(self, coords)

    def basis_element(self, i: int) -> "Element":
        v = [Fraction(0)] * self.dim
        v[i] = Fraction(1)
        return Element(self, tuple(v))

    @property
    def one(self) -> "Element":
        return self.basis_element(0)

    @property
    def zero(self) -> "Element":
        return Element(self, (Fraction(0),) * self.dim)

    def scalar(self, c) -> "Element":
        return self.one * c

    def gen(self, name_or_index) -> "Element":
        if isinstance(name_or_index, str):
            name_or_index = self.vars.index(name_or_index)
        return self.generators[name_or_index]

    def from_poly(self, p: P.Poly) -> "Element":
        if len(self.generators) != len(self.vars) or self.presentation is None:
            raise TypeError("algebra has no presentation to evaluate polynomials in")
        return P.evaluate(p, self.generators, self.one, self.zero)

    def parse_element(self, text: str) -> "Element":
        """Parse a polynomial in the generators, e.g. ``"1 + x*y"``."""
        p = Parser(text)
        node = p.expr()
        p.expect_end()
        return self.from_poly(P.from_ast(node, self.vars))

    def product_vector(self, i: int, j: int) -> SparseVec:
        return self._table[i][j]

    def structure_dense(self) -> list[list[list[Fraction]]]:
        d = self.dim
        out = []
        for i in range(d):
            row = []
            for j in range(d):
                v = [Fraction(0)] * d
                for k, c in self._table[i][j]:
                    v[k] = c
                row.append(v)
            out.append(row)
        return out

    def mul_coords(self, a: Sequence, b: Sequence) -> list:
        out = [0] * self.dim
        nb = [(j, y) for j, y in enumerate(b) if y]
        for i, x in enumerate(a):
            if not x:
                continue
            row = self._table[i]
            for j, y in nb:
                xy = x * y
                for k, c in row[j]:
                    out[k] += xy * c
        return out

    # invariants
    def verify(self, full: bool = True):
        """Check unit, commutativity, locality and nilpotency; associativity
        too when ``full``.  Raises :class:`NotWeil` on the first failure."""
        d = self.dim
        if d == 0:
            raise DegenerateQuotient("dimension 0")
        t = self._table
        for i in range(d):
            e = ((i, Fraction(1)),)
            if t[0][i] != e or t[i][0] != e:
                raise NotWeil(f"1 is not a unit on basis element {self.basis[i]}")
        for i in range(d):
            for j in range(i + 1, d):
                if t[i][j] != t[j][i]:
                    raise NotWeil(f"{self.basis[i]}*{self.basis[j]} is not commutative")
        for i in range(1, d):
            for j in range(1, d):
                if any(k == 0 for k, _ in t[i][j]):
                    raise NotWeil(f"{self.basis[i]}*{self.basis[j]} leaves the maximal ideal")
        if full:
            for i in range(1, d):
                for j in range(i, d):
                    ij = dict(t[i][j])
                    for k in range(j, d):
                        lhs = self.mul_coords(_dense(ij, d), _unit(k, d))
                        rhs = self.mul_coords(_unit(i, d), _dense(dict(t[j][k]), d))
                        if lhs != rhs:
                            raise NotWeil(f"associativity fails on "
                                          f"({self.basis[i]}, {self.basis[j]}, {self.basis[k]})")
        for i in range(1, d):
            if self.basis_element(i) ** d != self.zero:
                raise NotWeil(f"basis element {self.basis[i]} is not nilpotent")

    @property
    def loewy_length(self) -> int:
        """Least p with m^p = 0 (1 for the field itself)."""
        if self._loewy is None:
            d = self.dim
            m1 = [_unit(i, d) for i in range(1, d)]
            p, cur = 1, m1
            while cur:
                p += 1
                prods = [self.mul_coords(a, b) for a in cur for b in m1]
                cur, _ = rref(prods, d) if prods else ([], [])
            self._loewy = p
        return self._loewy

    def serialize(self) -> dict:
        pres = self.presentation
        return {
            "vars": list(pres.vars) if pres else None,
            "relations": pres.relation_strings() if pres else None,
            "nil": pres.nil if pres else self.loewy_length,
            "basis": list(self.basis),
            "structure": [[[fstr(c) for c in v] for v in row] for row in self.structure_dense()],
        }


def _unit(i: int, d: int) -> list:
    v = [0] * d
    v[i] = 1
    return v


def _dense(sv: dict, d: int) -> list:
    v = [0] * d
    for k, c in sv.items():
        v[k] = c
    return v


class Element:
    """An element of a Weil algebra, stored by coordinates in its basis.

    Coordinates are Fractions in exact mode; floats are allowed too (the jet
    engine uses them) and mix freely with the rational structure constants.
    """

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: WeilAlgebra, coords: tuple):
        self.algebra = algebra
        self.coords = coords

    def _check(self, other: "Element"):
        if other.algebra is not self.algebra:
            raise AlgebraMismatch(f"elements of different algebras: {self.algebra!r}, {other.algebra!r}")

    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            self._check(other)
            return other
        return self.algebra.scalar(other)

    def __add__(self, other):
        o = self._coerce(other)
        return Element(self.algebra, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Element):
            self._check(other)
            return Element(self.algebra, tuple(self.algebra.mul_coords(self.coords, other.coords)))
        return Element(self.algebra, tuple(a * other for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return Element(self.algebra, tuple(a / c for a in self.coords))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = self.algebra.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Element):
            return other.algebra is self.algebra and tuple(other.coords) == tuple(self.coords)
        return NotImplemented

    def __hash__(self):
        return hash((self.algebra.uid, tuple(self.coords)))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def isclose(self, other: "Element", rtol: float = 1e-9, atol: float = 0.0) -> bool:
        self._check(other)
        scale = max([abs(float(c)) for c in other.coords] + [0.0])
        tol = atol + rtol * scale
        return all(abs(float(a) - float(b)) <= tol for a, b in zip(self.coords, other.coords))

    @property
    def aug(self):
        return self.coords[0]

    def nilpart(self) -> "Element":
        return self - self.coords[0]

    def __str__(self) -> str:
        terms = []
        for label, c in zip(self.algebra.basis, self.coords):
            if not c:
                continue
            cs = fstr(c) if isinstance(c, (int, Fraction)) else repr(c)
            if label == "1":
                terms.append(cs)
            elif c == 1:
                terms.append(label)
            elif c == -1:
                terms.append(f"-{label}")
            else:
                terms.append(f"{cs}*{label}" if " " not in label else f"{cs}*({label})")
        return " + ".join(terms).replace("+ -", "- ") or "0"

    def __repr__(self) -> str:
        return f"Element({self})"


def multiply(a: Element, b: Element) -> Element:
    return a * b


def augment(a: Element):
    return a.coords[0]


NOT_NILPOTENT = None


def nilpotency_index(a: Element) -> int | None:
    """Least p with a^p = 0, or None when the augmentation is nonzero."""
    if a.coords[0]:
        return NOT_NILPOTENT
    p, cur = 1, a
    while not cur.is_zero():
        p += 1
        cur = cur * a
        if p > a.algebra.dim + 1:
            raise NotWeil("element in the maximal ideal is not nilpotent")
    return p


def build_weil_algebra(pres: Presentation, name: str | None = None) -> WeilAlgebra:
    """Realize ``Q[vars]/(relations)`` truncated at the declared nilpotency bound.

    The quotient is computed by row reduction on all monomials of degree
    below the bound; coset representatives are the standard monomials (the
    non-leading ones in grlex order).  The bound is checked for consistency by
    redoing the computation one degree higher: both must give the same
    dimension.
    """
    nv, k = len(pres.vars), pres.nil
    basis, nf = _standard_monomials(pres, k)
    if nv and len(_standard_monomials(pres, k + 1)[0]) != len(basis):
        raise NotWeil(f"nilpotency bound {k} is inconsistent with the relations of {pres}")
    if not basis:
        raise DegenerateQuotient(f"{pres} has a zero-dimensional quotient")
    index = {m: i for i, m in enumerate(basis)}
    d = len(basis)

    def to_vec(m: P.Monomial) -> SparseVec:
        if sum(m) >= k:
            return ()
        if m in index:
            return ((index[m], Fraction(1)),)
        return tuple(sorted((index[s], c) for s, c in nf[m].items() if c))

    table = [[to_vec(P.mono_mul(a, b)) for b in basis] for a in basis]
    gens = []
    for v in range(nv):
        e = [0] * nv
        e[v] = 1
        vec = [Fraction(0)] * d
        for i, c in to_vec(tuple(e)):
            vec[i] = c
        gens.append(vec)
    labels = [P.format_monomial(m, pres.vars) for m in basis]
    alg = WeilAlgebra(labels, table, presentation=pres, monomials=basis, generators=gens, name=name)
    alg.verify()
    return alg


def _standard_monomials(pres: Presentation, k: int):
    nv = len(pres.vars)
    monos = P.monomials_below(nv, k)
    cols = sorted(monos, key=lambda m: (-sum(m), tuple(-e for e in m)))
    col_of = {m: i for i, m in enumerate(cols)}
    rows = set()
    for g in pres.polys:
        if not g:
            continue
        low = min(sum(m) for m in g)
        for m in monos:
            if sum(m) + low >= k:
                continue
            prod = P.truncate(P.mul({m: Fraction(1)}, g), k)
            if prod:
                rows.add(tuple(sorted((col_of[mm], c) for mm, c in prod.items())))
    dense = []
    for r in sorted(rows):
        v = [Fraction(0)] * len(cols)
        for c, x in r:
            v[c] = x
        dense.append(v)
    red, pivots = rref(dense, len(cols))
    pivset = set(pivots)
    standard = sorted((m for m in cols if col_of[m] not in pivset), key=P.grlex_key)
    nf = {}
    for row, pc in zip(red, pivots):
        nf[cols[pc]] = {cols[j]: -row[j] for j in range(len(cols)) if j not in pivset and row[j]}
    return standard, nf


def weil_algebra(text: str, name: str | None = None) -> WeilAlgebra:
    return build_weil_algebra(parse_presentation(text), name=name)


# -- homomorphisms ------------------------------------------------------------

class AlgebraHom:
    """An algebra map given by its matrix (dst.dim rows, src.dim columns).

    Construction validates that 1 goes to 1, that the map is multiplicative
    on every pair of basis elements and that it preserves augmentations.
    """

    __slots__ = ("src", "dst", "matrix")

    def __init__(self, src: WeilAlgebra, dst: WeilAlgebra, matrix: Sequence[Sequence], check: bool = True):
        self.src = src
        self.dst = dst
        self.matrix = tuple(tuple(Fraction(x) for x in row) for row in matrix)
        if len(self.matrix) != dst.dim or any(len(r) != src.dim for r in self.matrix):
            raise ValueError(f"matrix shape does not match {dst.dim}x{src.dim}")
        if check:
            self.validate()

    def column(self, j: int) -> list[Fraction]:
        return [row[j] for row in self.matrix]

    def validate(self):
        src, dst = self.src, self.dst
        if self.column(0) != [Fraction(int(i == 0)) for i in range(dst.dim)]:
            raise NotAHom("1 is not sent to 1")
        if any(self.matrix[0][j] for j in range(1, src.dim)):
            raise NotAHom("the maximal ideal is not sent into the maximal ideal")
        cols = [self.column(j) for j in range(src.dim)]
        for i in range(1, src.dim):
            for j in range(i, src.dim):
                lhs = [0] * dst.dim
                for k, c in src.product_vector(i, j):
                    for r in range(dst.dim):
                        if cols[k][r]:
                            lhs[r] += c * cols[k][r]
                rhs = dst.mul_coords(cols[i], cols[j])
                if lhs != rhs:
                    raise NotAHom(f"not multiplicative on ({src.basis[i]}, {src.basis[j]})")

    def __call__(self, a: Element) -> Element:
        if a.algebra is not self.src:
            raise AlgebraMismatch("element is not in the domain")
        out = [0] * self.dst.dim
        for j, x in enumerate(a.coords):
            if x:
                for r, row in enumerate(self.matrix):
                    if row[j]:
                        out[r] += row[j] * x
        return Element(self.dst, tuple(out))

    apply = __call__

    def __eq__(self, other):
        if not isinstance(other, AlgebraHom):
            return NotImplemented
        return self.src is other.src and self.dst is other.dst and self.matrix == other.matrix

    def __hash__(self):
        return hash((self.src.uid, self.dst.uid, self.matrix))

    def __repr__(self) -> str:
        return f"AlgebraHom({self.src!r} -> {self.dst!r})"

    @property
    def rank(self) -> int:
        return rank(self.matrix, self.src.dim)

    def is_injective(self) -> bool:
        return self.rank == self.src.dim

    def is_bijective(self) -> bool:
        return self.src.dim == self.dst.dim and self.is_injective()

    def inverse(self) -> "AlgebraHom":
        inv = inverse(self.matrix)
        if inv is None:
            raise WeilError("homomorphism is not invertible")
        return AlgebraHom(self.dst, self.src, inv)


def compose(g: AlgebraHom, f: AlgebraHom) -> AlgebraHom:
    """g after f."""
    if f.dst is not g.src:
        raise AlgebraMismatch("codomain of f is not the domain of g")
    m = [[sum((g.matrix[r][k] * f.matrix[k][c] for k in range(f.dst.dim)
               if g.matrix[r][k] and f.matrix[k][c]), Fraction(0))
          for c in range(f.src.dim)] for r in range(g.dst.dim)]
    return AlgebraHom(f.src, g.dst, m)


def identity_hom(w: WeilAlgebra) -> AlgebraHom:
    return AlgebraHom(w, w, [[int(i == j) for j in range(w.dim)] for i in range(w.dim)], check=False)


def hom_from_generator_images(src: WeilAlgebra, dst: WeilAlgebra,
                              images: Sequence[Element | str]) -> AlgebraHom:
    """The algebra map sending the i-th generator of ``src`` to ``images[i]``.

    Images must lie in the maximal ideal of ``dst`` and satisfy every relation
    of ``src``; string images are parsed in ``dst``.
    """
    if src.presentation is None or src.monomials is None:
        raise TypeError(f"{src!r} has no presentation; build the map from its matrix instead")
    images = [dst.parse_element(x) if isinstance(x, str) else x for x in images]
    if len(images) != len(src.vars):
        raise ValueError(f"expected {len(src.vars)} generator images, got {len(images)}")
    for i, img in enumerate(images):
        if img.algebra is not dst:
            raise AlgebraMismatch(f"image {i} is not an element of the target")
        if img.coords[0]:
            raise NotInMaximalIdeal(i, str(img))
    for rel, text in zip(src.presentation.polys, src.presentation.relation_strings()):
        if not P.evaluate(rel, images, dst.one, dst.zero).is_zero():
            raise RelationViolated(text)
    cols = [P.evaluate({m: Fraction(1)}, images, dst.one, dst.zero).coords for m in src.monomials]
    matrix = [[cols[j][i] for j in range(src.dim)] for i in range(dst.dim)]
    return AlgebraHom(src, dst, matrix)


# -- the field and tensor products ---------------------------------------------

_cache_lock = threading.Lock()
_tensor_cache: dict[tuple[int, int], tuple] = {}
_REALS: WeilAlgebra | None = None


def reals() -> WeilAlgebra:
    """The one-dimensional algebra Q (empty presentation), shared instance."""
    global _REALS
    with _cache_lock:
        if _REALS is None:
            _REALS = build_weil_algebra(parse_presentation("| ; nil 1"), name="R")
    return _REALS


def aug_hom(w: WeilAlgebra) -> AlgebraHom:
    return AlgebraHom(w, reals(), [[int(j == 0) for j in range(w.dim)]], check=False)


def unit_hom(w: WeilAlgebra) -> AlgebraHom:
    return AlgebraHom(reals(), w, [[int(i == 0)] for i in range(w.dim)], check=False)


_FRESH = "xyzwvtsrqpon"


def fresh_names(n: int) -> list[str]:
    if n <= len(_FRESH):
        return list(_FRESH[:n])
    return [f"x{i + 1}" for i in range(n)]


def _joint_names(a: Sequence[str], b: Sequence[str]) -> list[str]:
    joint = list(a) + list(b)
    if len(set(joint)) == len(joint):
        return joint
    return fresh_names(len(joint))


class TensorAlgebra(WeilAlgebra):
    """``W1 (x) W2`` with the bookkeeping needed to tensor maps."""

    def __init__(self, *args, factors, pairs, **kw):
        super().__init__(*args, **kw)
        self.factors = factors
        self.pairs = tuple(pairs)
        self.index_of = {p: i for i, p in enumerate(self.pairs)}


def tensor_infinity(w1: WeilAlgebra, w2: WeilAlgebra):
    """Tensor product with its two unit injections ``(T, inj1, inj2)``.

    Results are cached per pair of algebras, so repeated calls return the
    same object and maps between tensors compose.
    """
    key = (w1.uid, w2.uid)
    with _cache_lock:
        hit = _tensor_cache.get(key)
    if hit is not None:
        return hit
    d1, d2 = w1.dim, w2.dim
    pairs = [(i, j) for i in range(d1) for j in range(d2)]
    presented = w1.monomials is not None and w2.monomials is not None
    if presented:
        names = _joint_names(w1.vars, w2.vars)
        monos = {(i, j): w1.monomials[i] + w2.monomials[j] for i, j in pairs}
        pairs.sort(key=lambda p: P.grlex_key(monos[p]))
        labels = [P.format_monomial(monos[p], names) for p in pairs]
    else:
        labels = [_pair_label(w1.basis[i], w2.basis[j]) for i, j in pairs]
    index = {p: n for n, p in enumerate(pairs)}
    table = []
    for i1, j1 in pairs:
        row = []
        for i2, j2 in pairs:
            acc: dict[int, Fraction] = {}
            for k, a in w1.product_vector(i1, i2):
                for l, b in w2.product_vector(j1, j2):
                    n = index[(k, l)]
                    acc[n] = acc.get(n, 0) + a * b
            row.append(tuple(sorted((n, c) for n, c in acc.items() if c)))
        table.append(row)
    kw = {}
    if presented and w1.presentation is not None and w2.presentation is not None:
        p1, p2 = w1.presentation, w2.presentation
        n1, n2 = len(p1.vars), len(p2.vars)
        rels = [{m + (0,) * n2: c for m, c in r.items()} for r in p1.polys]
        rels += [{(0,) * n1 + m: c for m, c in r.items()} for r in p2.polys]
        kw["presentation"] = Presentation.from_polys(names, rels, p1.nil + p2.nil - 1)
        kw["monomials"] = [monos[p] for p in pairs]
    name = f"{w1.name}(x){w2.name}" if w1.name and w2.name else None
    t = TensorAlgebra(labels, table, factors=(w1, w2), pairs=pairs, name=name, **kw)
    inj1 = AlgebraHom(w1, t, _kron_cols(t, lambda n: ((n, 0),), d1), check=False)
    inj2 = AlgebraHom(w2, t, _kron_cols(t, lambda n: ((0, n),), d2), check=False)
    gens = [inj1(g).coords for g in w1.generators] + [inj2(g).coords for g in w2.generators]
    t.generators = tuple(t.element(g) for g in gens)
    t.verify(full=False)
    result = (t, inj1, inj2)
    with _cache_lock:
        result = _tensor_cache.setdefault(key, result)
    return result


def _pair_label(a: str, b: str) -> str:
    if a == "1":
        return b
    if b == "1":
        return a
    wrap = (lambda s: f"({s})" if " " in s else s)
    return f"{wrap(a)}(x){wrap(b)}"


def _kron_cols(t: TensorAlgebra, pairs_of, ncols: int) -> Matrix:
    m = [[Fraction(0)] * ncols for _ in range(t.dim)]
    for c in range(ncols):
        for p in pairs_of(c):
            m[t.index_of[p]][c] = Fraction(1)
    return m


def tensor(w1: WeilAlgebra, w2: WeilAlgebra) -> TensorAlgebra:
    return tensor_infinity(w1, w2)[0]


def tensor_hom(f: AlgebraHom, g: AlgebraHom) -> AlgebraHom:
    """``f (x) g : A (x) B -> C (x) D``."""
    src = tensor(f.src, g.src)
    dst = tensor(f.dst, g.dst)
    m = [[Fraction(0)] * src.dim for _ in range(dst.dim)]
    for c, (i, j) in enumerate(src.pairs):
        for k in range(f.dst.dim):
            a = f.matrix[k][i]
            if not a:
                continue
            for l in range(g.dst.dim):
                b = g.matrix[l][j]
                if b:
                    m[dst.index_of[(k, l)]][c] = a * b
    return AlgebraHom(src, dst, m)


def tensor_assoc(w1: WeilAlgebra, w2: WeilAlgebra, w3: WeilAlgebra) -> AlgebraHom:
    """The canonical isomorphism ``W1 (x) (W2 (x) W3) -> (W1 (x) W2) (x) W3``."""
    t23 = tensor(w2, w3)
    src = tensor(w1, t23)
    t12 = tensor(w1, w2)
    dst = tensor(t12, w3)
    m = [[Fraction(0)] * src.dim for _ in range(dst.dim)]
    for c, (i, jk) in enumerate(src.pairs):
        j, k = t23.pairs[jk]
        m[dst.index_of[(t12.index_of[(i, j)], k)]][c] = Fraction(1)
    return AlgebraHom(src, dst, m)


def tensor_assoc_from_generators(w1, w2, w3) -> AlgebraHom:
    """Same comparison map, built from generator images (presented factors only)."""
    t23, _, _ = tensor_infinity(w2, w3)
    src = tensor(w1, t23)
    t12, a1, a2 = tensor_infinity(w1, w2)
    dst, b12, b3 = tensor_infinity(t12, w3)
    images = [b12(a1(g)) for g in w1.generators]
    images += [b12(a2(g)) for g in w2.generators]
    images += [b3(g) for g in w3.generators]
    return hom_from_generator_images(src, dst, images)
