"""Relative Weil prolongation for trivial bundles ``R^n x R^b -> R^n``.

A point of ``E (x)_M W`` is a base point of ``R^n`` together with a W-point of
the fiber; as a subset of ``R^(n+b) (x) W`` it is the linear subspace where
the base coordinates have no nilpotent part.  All comparisons below are
between explicit linear subspaces in reduced echelon form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import (AlgebraHom, WeilAlgebra, WeilError, aug_hom, compose, hom_from_generator_images,
                      identity_hom, tensor, tensor_assoc, tensor_hom, weil_algebra)
from .category import (Diagram, check_fibered_assoc, factor_through, fiber_pair, fibered_tensor,
                       finite_limit, product_w)
from .linalg import Matrix, block_diag, echelon_basis, matmul, nullspace, rank, transpose, zeros
from .prolongation import WPoint, prolongation_space


def repeat_block(m: Sequence[Sequence], n: int, rows: int, cols: int) -> Matrix:
    """``id_n (x) m``: apply ``m`` to each of n consecutive coordinate blocks."""
    return block_diag([list(map(list, m))] * n, [(rows, cols)] * n)


def hom_block(h: AlgebraHom, n: int) -> Matrix:
    return repeat_block(h.matrix, n, h.dst.dim, h.src.dim)


def column_span(m: Sequence[Sequence], nrows: int) -> Matrix:
    return echelon_basis(transpose(m), nrows)


@dataclass(frozen=True)
class TrivialBundleModel:
    base_dim: int
    fiber_dim: int

    def __post_init__(self):
        if self.base_dim < 0 or self.fiber_dim < 0:
            raise ValueError("dimensions must be non-negative")


@dataclass(frozen=True)
class FiberedProlongation:
    """``E (x)_M W`` for a trivial bundle, embedded in ``R^(n+b) (x) W``."""

    bundle: TrivialBundleModel
    algebra: WeilAlgebra

    @property
    def total_dim(self) -> int:
        return self.bundle.base_dim + self.bundle.fiber_dim * self.algebra.dim

    @property
    def ambient_dim(self) -> int:
        return (self.bundle.base_dim + self.bundle.fiber_dim) * self.algebra.dim

    def carrier(self) -> Matrix:
        """Echelon basis of the subspace with W-constant base coordinates."""
        d = self.algebra.dim
        n = self.bundle.base_dim
        rows = []
        for i in range(n):
            for k in range(1, d):
                r = [Fraction(0)] * self.ambient_dim
                r[i * d + k] = Fraction(1)
                rows.append(r)
        return nullspace(rows, self.ambient_dim)

    def point(self, base: Sequence, fiber: WPoint) -> WPoint:
        if fiber.algebra is not self.algebra or fiber.n != self.bundle.fiber_dim:
            raise ValueError("fiber point has the wrong shape")
        if len(base) != self.bundle.base_dim:
            raise ValueError("base point has the wrong dimension")
        w = self.algebra
        return WPoint(w, tuple(w.scalar(b) for b in base) + fiber.coords)

    def project(self, p: WPoint) -> tuple:
        return p.base[:self.bundle.base_dim]

    def fiber(self, p: WPoint) -> WPoint:
        return WPoint(p.algebra, p.coords[self.bundle.base_dim:])

    def contains(self, p: WPoint) -> bool:
        n = self.bundle.base_dim
        return (p.algebra is self.algebra and p.n == n + self.bundle.fiber_dim
                and all(c.nilpart().is_zero() for c in p.coords[:n]))

    def add(self, p: WPoint, q: WPoint) -> WPoint:
        """Fiberwise sum; both points must lie over the same base point."""
        if self.project(p) != self.project(q):
            raise ValueError("points lie over different base points")
        n = self.bundle.base_dim
        return WPoint(p.algebra, p.coords[:n] + tuple(a + b for a, b in zip(p.coords[n:], q.coords[n:])))

    def scale(self, c, p: WPoint) -> WPoint:
        n = self.bundle.base_dim
        return WPoint(p.algebra, p.coords[:n] + tuple(a * c for a in p.coords[n:]))


def fibered_prolong(bundle: TrivialBundleModel, algebra: WeilAlgebra) -> FiberedProlongation:
    return FiberedProlongation(bundle, algebra)


def fibered_product_check(n: int, b: int, c: int, w: WeilAlgebra) -> dict:
    """Prolonging ``E x_M F`` versus the fibered product of the prolongations."""
    d = w.dim
    ef = fibered_prolong(TrivialBundleModel(n, b + c), w)
    pe = fibered_prolong(TrivialBundleModel(n, b), w)
    pf = fibered_prolong(TrivialBundleModel(n, c), w)
    ne, nf = pe.ambient_dim, pf.ambient_dim
    # (base, fe, ff) -> ((base, fe), (base, ff))
    phi = zeros(ne + nf, ef.ambient_dim)
    for k in range(n * d):
        phi[k][k] = Fraction(1)
        phi[ne + k][k] = Fraction(1)
    for k in range(b * d):
        phi[n * d + k][n * d + k] = Fraction(1)
    for k in range(c * d):
        phi[ne + n * d + k][(n + b) * d + k] = Fraction(1)
    carrier = ef.carrier()
    image = column_span(matmul(phi, transpose(carrier)), ne + nf) if carrier else []
    # fibered product: both factors in their carriers, same base point
    cons = [row + [Fraction(0)] * nf for row in _complement_rows(pe)]
    cons += [[Fraction(0)] * ne + row for row in _complement_rows(pf)]
    for k in range(n):
        r = [Fraction(0)] * (ne + nf)
        r[k * d] = Fraction(1)
        r[ne + k * d] = Fraction(-1)
        cons.append(r)
    fp = nullspace(cons, ne + nf)
    injective = rank(matmul(phi, transpose(carrier)), len(carrier)) == len(carrier) if carrier else True
    return {
        "dims": [len(carrier), len(fp)],
        "expected_dim": n + (b + c) * d,
        "same_subspace": image == fp,
        "comparison_bijective": image == fp and injective,
    }


def _complement_rows(fp: FiberedProlongation) -> Matrix:
    d = fp.algebra.dim
    rows = []
    for i in range(fp.bundle.base_dim):
        for k in range(1, d):
            r = [Fraction(0)] * fp.ambient_dim
            r[i * d + k] = Fraction(1)
            rows.append(r)
    return rows


# -- iterated prolongation ----------------------------------------------------------

@dataclass(frozen=True)
class IteratedProlongationSpace:
    """``(R^n (x) W1) (x)_M W2`` inside ``R^n (x) (W1 (x) W2)``."""

    n: int
    w1: WeilAlgebra
    w2: WeilAlgebra
    carrier: Matrix = field(repr=False)
    fibered: WeilAlgebra = field(repr=False)
    comparison_bijective: bool = False

    @property
    def ambient(self) -> WeilAlgebra:
        return tensor(self.w1, self.w2)

    @property
    def linear_dim(self) -> int:
        return len(self.carrier)

    @property
    def expected_dim(self) -> int:
        return self.n * self.fibered.dim


def iterated_prolongation(n: int, w1: WeilAlgebra, w2: WeilAlgebra, strict: bool = True) -> IteratedProlongationSpace:
    """Equalizer of ``id (x) W(d -> (0,d))`` and ``id (x) W(d -> (0,0))`` on ``R^n (x) (W1 (x) W2)``.

    The carrier is computed as a kernel on the whole model, then compared
    with ``R^n (x) (W1 (~) W2)`` through the inclusion, coordinatewise.
    """
    t, f, g = fiber_pair(w1, w2)
    diff = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(f.matrix, g.matrix)]
    big = repeat_block(diff, n, w2.dim, t.dim)
    carrier = nullspace(big, n * t.dim)
    s, incl = fibered_tensor(w1, w2)
    emb = hom_block(incl, n)
    image = column_span(emb, n * t.dim) if n else []
    bij = image == carrier and rank(emb, n * s.dim) == n * s.dim
    space = IteratedProlongationSpace(n, w1, w2, carrier, s, bij)
    if strict and (space.linear_dim != space.expected_dim or not bij):
        raise WeilError(f"iterated prolongation of ({w1!r}, {w2!r}) over R^{n} does not match "
                        f"R^{n} (x) (W1 (~) W2)")
    return space


# -- Euclidean law ------------------------------------------------------------------

_DUAL: WeilAlgebra | None = None
_D2V: WeilAlgebra | None = None


def dual_numbers() -> WeilAlgebra:
    global _DUAL
    if _DUAL is None:
        _DUAL = weil_algebra("x | x^2 ; nil 2", name="W_D")
    return _DUAL


def first_order_pair() -> WeilAlgebra:
    """``W_{D(2)}``: two first-order infinitesimals with product zero."""
    global _D2V
    if _D2V is None:
        _D2V = weil_algebra("x,y | x^2, y^2, x*y ; nil 2", name="W_D(2)")
    return _D2V


def first_order_pair_comparison() -> AlgebraHom:
    """``W_{D(2)} -> W_D (~) W_D`` from (d1, d2) -> (d1, d1 d2)."""
    d = dual_numbers()
    s, incl = fibered_tensor(d, d)
    t = incl.dst
    c = hom_from_generator_images(first_order_pair(), t, [t.gen(0), t.gen(0) * t.gen(1)])
    u = factor_through(incl, c)
    if u is None:
        raise WeilError("(d1, d2) -> (d1, d1 d2) does not land in the fibered tensor")
    return u


def _vertical_tangent_map(n: int, w: WeilAlgebra) -> Matrix:
    """``R^n (x) (W (x) W_D) -> (R^n (x) W) x (R^n (x) W)``: ``a + b e -> (a, aug(a) + b)``."""
    t = tensor(w, dual_numbers())
    d = w.dim
    m = zeros(2 * n * d, n * t.dim)
    for p in range(n):
        for c, (i, j) in enumerate(t.pairs):
            col = p * t.dim + c
            if j == 0:
                m[p * d + i][col] = Fraction(1)
                if i == 0:
                    m[n * d + p * d][col] = Fraction(1)
            else:
                m[n * d + p * d + i][col] = Fraction(1)
    return m


def euclidean_check(n: int, w: WeilAlgebra | None = None) -> dict:
    """``(R^n (x) W) (x)_M W_D`` versus ``(R^n (x) W) x_M (R^n (x) W)``.

    For ``W = W_D`` the comparison is also rebuilt step by step: into
    ``R^n (x) (W_D (~) W_D)``, across to ``R^n (x) W_{D(2)}``, then split by
    the two projections of ``W_{D(2)} = W_D x W_D``; it must agree with the
    direct map.
    """
    w = w or dual_numbers()
    dd = dual_numbers()
    d = w.dim
    it = iterated_prolongation(n, w, dd)
    amb = 2 * n * d
    cons = []
    for k in range(n):
        r = [Fraction(0)] * amb
        r[k * d] = Fraction(1)
        r[n * d + k * d] = Fraction(-1)
        cons.append(r)
    fp = nullspace(cons, amb) if amb else []
    psi = _vertical_tangent_map(n, w)
    carrier_t = transpose(it.carrier) if it.carrier else []
    imgs = matmul(psi, carrier_t) if it.carrier else []
    image = column_span(imgs, amb) if it.carrier else []
    injective = (rank(imgs, len(it.carrier)) == len(it.carrier)) if it.carrier else True
    report = {
        "dims": [it.linear_dim, len(fp)],
        "expected_dim": n * (2 * d - 1),
        "comparison_bijective": image == fp and injective,
    }
    if w is dd:
        report["chain_agrees"] = _chain_map(n) == psi_on_carrier(psi, it, n)
    report["passed"] = (report["comparison_bijective"] and report["dims"][0] == report["dims"][1]
                        == report["expected_dim"] and report.get("chain_agrees", True))
    return report


def psi_on_carrier(psi: Matrix, it: IteratedProlongationSpace, n: int) -> Matrix:
    """The direct comparison, restricted to ``R^n (x) (W_D (~) W_D)`` coordinates."""
    _, incl = fibered_tensor(it.w1, it.w2)
    return matmul(psi, hom_block(incl, n)) if n else []


def _chain_map(n: int) -> Matrix:
    dd = dual_numbers()
    c = first_order_pair_comparison()
    c_inv = c.inverse()
    prod = product_w(dd, dd)
    # W_{D(2)} -> product over Q, through its presentation
    to_prod = hom_from_generator_images(first_order_pair(), prod.algebra, list(prod.algebra.generators))
    if not to_prod.is_bijective():
        raise WeilError("W_{D(2)} is not the product W_D x W_D")
    p1 = compose(prod.cone.legs["0"], compose(to_prod, c_inv))
    p2 = compose(prod.cone.legs["1"], compose(to_prod, c_inv))
    if n == 0:
        return []
    return hom_block(p1, n) + hom_block(p2, n)


def fiber_add(p: WPoint, q: WPoint) -> WPoint:
    """Sum of two W-points over the same base point: ``a + h1 + h2``."""
    if p.base != q.base:
        raise ValueError("points lie over different base points")
    return WPoint(p.algebra, tuple(a + b.nilpart() for a, b in zip(p.coords, q.coords)))


def fiber_scale(c, p: WPoint) -> WPoint:
    return WPoint(p.algebra, tuple(a.coords[0] + a.nilpart() * c for a in p.coords))


# -- microlinearity and exponentiability -----------------------------------------------

def m_microlinearity_check(n: int, w: WeilAlgebra, diagram: Diagram) -> dict:
    """``Lim((R^n (x) W) (x)_M D)`` against ``(R^n (x) W) (x)_M Lim D``.

    The left side is computed on the model: one block ``R^n (x) (W (x) W_i)``
    per node, cut down to the prolongation carrier and to the edge equations.
    The right side is ``R^n (x) (W (~) Lim D)``.  The terminal node is
    adjoined first so that the limit is taken over ``R^n (x) W``.
    """
    dd = diagram.over_terminal()
    ids = list(dd.nodes)
    tens = {k: tensor(w, a) for k, a in dd.nodes.items()}
    offs, total = {}, 0
    for k in ids:
        offs[k] = total
        total += n * tens[k].dim
    cons: list[list[Fraction]] = []

    def embed_rows(mat, k_src, k_dst=None, other=None):
        for r in range(len(mat)):
            row = [Fraction(0)] * total
            for j, x in enumerate(mat[r]):
                row[offs[k_src] + j] = x
            if k_dst is not None:
                for j, x in enumerate(other[r]):
                    row[offs[k_dst] + j] -= x
            cons.append(row)

    for k in ids:
        _, f, g = fiber_pair(w, dd.nodes[k])
        diff = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(f.matrix, g.matrix)]
        embed_rows(repeat_block(diff, n, dd.nodes[k].dim, tens[k].dim), k)
    for a, b, h in dd.edges:
        push = hom_block(tensor_hom(identity_hom(w), h), n)
        ident = repeat_block([[int(i == j) for j in range(tens[b].dim)] for i in range(tens[b].dim)],
                             n, tens[b].dim, tens[b].dim)
        embed_rows(push, a, b, ident)
    lhs = nullspace(cons, total) if total else []

    lim = finite_limit(diagram)
    legs = dict(lim.cone.legs)
    legs[ids[-1]] = aug_hom(lim.algebra)
    s, incl = fibered_tensor(w, lim.algebra)
    theta = zeros(total, n * s.dim)
    for k in ids:
        m = compose(tensor_hom(identity_hom(w), legs[k]), incl)
        blk = hom_block(m, n)
        for r, row in enumerate(blk):
            theta[offs[k] + r] = [x + y for x, y in zip(theta[offs[k] + r], row)]
    image = column_span(theta, total) if n * s.dim else []
    injective = rank(theta, n * s.dim) == n * s.dim if n * s.dim else True
    bij = image == lhs and injective
    return {"dims": [len(lhs), n * s.dim], "limit_dim": lim.algebra.dim, "comparison_bijective": bij}


def weil_exponentiability_check(n: int, w: WeilAlgebra, w1: WeilAlgebra, w2: WeilAlgebra) -> dict:
    """``((R^n (x) W) (x)_M W1) (x)_M W2`` versus ``(R^n (x) W) (x)_M (W1 (x) W2)``.

    Replays the chain: iterated prolongation, again, fibered associativity,
    iterated prolongation; each step must hold and the two ends must be the
    same subspace of ``R^n (x) ((W (x) W1) (x) W2)``.
    """
    steps = []
    first = iterated_prolongation(n, w, w1, strict=False)
    steps.append(("prolong W1", first.comparison_bijective))
    s1 = first.fibered
    second = iterated_prolongation(n, s1, w2, strict=False)
    steps.append(("prolong W2", second.comparison_bijective))
    assoc = check_fibered_assoc(w, w1, w2)
    steps.append(("fibered associativity", assoc["passed"]))
    w12 = tensor(w1, w2)
    last = iterated_prolongation(n, w, w12, strict=False)
    steps.append(("prolong W1 (x) W2", last.comparison_bijective))

    _, inc1 = fibered_tensor(w, w1)
    to_amb = hom_block(tensor_hom(inc1, identity_hom(w2)), n)
    amb_dim = n * tensor(tensor(w, w1), w2).dim
    left = column_span(matmul(to_amb, transpose(second.carrier)), amb_dim) if second.carrier else []
    assoc_block = hom_block(tensor_assoc(w, w1, w2), n)
    right = column_span(matmul(assoc_block, transpose(last.carrier)), amb_dim) if last.carrier else []
    same = left == right
    return {
        "dims": [second.linear_dim, last.linear_dim],
        "expected_dim": n * fibered_tensor(w, w12)[0].dim,
        "steps": [{"step": s, "ok": ok} for s, ok in steps],
        "same_subspace": same,
        "passed": same and all(ok for _, ok in steps),
    }
