"""Finite limits in the category of Weil algebras.

Morphisms preserve augmentations, so the terminal object is Q and binary
products are fibered over Q: ``Q.1 + m1 + m2`` with ``m1 * m2 = 0``.  Every
limit here is computed as a subalgebra of a product, stored by a reduced
echelon basis so that subspace equality is a plain comparison.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import poly as P
from .algebra import (AlgebraHom, AlgebraMismatch, aug_hom, NotWeil, Presentation, WeilAlgebra,
                      WeilError, _joint_names, compose, fresh_names, hom_from_generator_images,
                      identity_hom, parse_presentation, build_weil_algebra, reals, tensor,
                      tensor_assoc, tensor_hom, tensor_infinity)
from .linalg import Matrix, echelon_basis, in_span, nullspace, rank, rref, solve_many, transpose


def terminal() -> WeilAlgebra:
    return reals()


class Subalgebra(WeilAlgebra):
    """A subalgebra of ``ambient`` spanned by the rows of ``echelon``."""

    def __init__(self, *args, ambient: WeilAlgebra, echelon: Matrix, pivots: list[int], **kw):
        super().__init__(*args, **kw)
        self.ambient = ambient
        self.echelon = echelon
        self.pivots = pivots


def subalgebra(ambient: WeilAlgebra, vectors: Sequence[Sequence], name: str | None = None):
    """The subalgebra spanned by ``vectors`` and its inclusion.

    The span must contain 1 and be closed under multiplication; both are
    checked.  In reduced echelon form the first basis vector is then exactly
    1 and the rest lie in the maximal ideal, as a Weil algebra basis must.
    """
    d = ambient.dim
    ech, piv = rref(vectors, d)
    one = [Fraction(int(i == 0)) for i in range(d)]
    if not ech or piv[0] != 0 or ech[0] != one:
        raise NotWeil("subspace does not contain 1")
    s = len(ech)
    table = []
    for i in range(s):
        row = []
        for j in range(s):
            prod = ambient.mul_coords(ech[i], ech[j])
            coords = in_span(ech, piv, prod)
            if coords is None:
                raise NotWeil("subspace is not closed under multiplication")
            row.append(tuple((k, c) for k, c in enumerate(coords) if c))
        table.append(row)
    labels = [str(ambient.element(v)) for v in ech]
    sub = Subalgebra(labels, table, ambient=ambient, echelon=ech, pivots=piv, name=name)
    sub.verify(full=False)
    incl = AlgebraHom(sub, ambient, transpose(ech), check=False)
    return sub, incl


def restrict_to(sub: Subalgebra, vec: Sequence) -> list[Fraction] | None:
    """Coordinates in ``sub`` of an ambient vector, or None if outside."""
    return in_span(sub.echelon, sub.pivots, vec)


def factor_through(emb: AlgebraHom, h: AlgebraHom) -> AlgebraHom | None:
    """The ``u`` with ``emb . u == h``, or None if ``h`` does not land in the image.

    ``emb`` must be injective, which makes ``u`` unique.
    """
    if emb.dst is not h.dst:
        raise AlgebraMismatch("maps have different codomains")
    if not emb.is_injective():
        raise WeilError("factoring map is not injective")
    x = solve_many(emb.matrix, h.matrix, emb.src.dim)
    if x is None:
        return None
    return AlgebraHom(h.src, emb.src, x)


# -- diagrams, cones, limits ----------------------------------------------------

@dataclass(frozen=True)
class Diagram:
    nodes: Mapping[str, WeilAlgebra]
    edges: tuple[tuple[str, str, AlgebraHom], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", dict(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        for a, b, h in self.edges:
            if a not in self.nodes or b not in self.nodes:
                raise ValueError(f"edge {a}->{b} refers to an unknown node")
            if h.src is not self.nodes[a] or h.dst is not self.nodes[b]:
                raise AlgebraMismatch(f"edge {a}->{b} does not match its node algebras")

    @classmethod
    def from_json(cls, data) -> "Diagram":
        """``{"nodes": {id: presentation}, "edges": [{"from", "to", "images"}]}``."""
        if isinstance(data, str):
            data = json.loads(data)
        nodes = {k: build_weil_algebra(parse_presentation(v), name=k) for k, v in data["nodes"].items()}
        edges = []
        for e in data.get("edges", []):
            a, b = e["from"], e["to"]
            if a not in nodes or b not in nodes:
                raise ValueError(f"edge {a}->{b} refers to an unknown node")
            edges.append((a, b, hom_from_generator_images(nodes[a], nodes[b], e["images"])))
        return cls(nodes, edges)

    def over_terminal(self, tag: str = "*") -> "Diagram":
        """Adjoin the terminal algebra with the augmentation from every node.

        The limit is unchanged (Q is terminal), but the new diagram is
        connected, so functors that only preserve connected limits, or send Q
        to something else, can be applied to it safely.
        """
        if tag in self.nodes:
            raise ValueError(f"node id {tag!r} already used")
        nodes = dict(self.nodes)
        nodes[tag] = terminal()
        edges = list(self.edges) + [(k, tag, aug_hom(w)) for k, w in self.nodes.items()]
        return Diagram(nodes, edges)


@dataclass(frozen=True)
class Cone:
    apex: WeilAlgebra
    legs: Mapping[str, AlgebraHom]

    def commutes(self, diagram: Diagram) -> bool:
        return all(compose(h, self.legs[a]) == self.legs[b] for a, b, h in diagram.edges)


@dataclass(frozen=True)
class LimitResult:
    """A limit, its cone, and its embedding into the ambient product.

    ``blocks`` lists the nodes whose product is the ambient algebra (a single
    node for an equalizer, whose ambient is then that node itself).
    """

    algebra: WeilAlgebra
    cone: Cone
    embedding: AlgebraHom
    blocks: tuple[str, ...]
    diagram: Diagram = field(repr=False)

    @property
    def ambient(self) -> WeilAlgebra:
        return self.embedding.dst

    @property
    def echelon(self) -> Matrix:
        return echelon_basis(transpose(self.embedding.matrix), self.ambient.dim)

    def pair(self, legs: Mapping[str, AlgebraHom]) -> AlgebraHom:
        """Map a family of legs into the ambient product."""
        if len(self.blocks) == 1:
            return legs[self.blocks[0]]
        algebras = [self.diagram.nodes[b] for b in self.blocks]
        return pairing(algebras, [legs[b] for b in self.blocks])

    def factor(self, legs: Mapping[str, AlgebraHom], apex: WeilAlgebra | None = None) -> AlgebraHom:
        """Unique factorization of a cone through the limit.

        Raises if the legs do not form a cone over the diagram.
        """
        if apex is None:
            apex = next(iter(legs.values())).src
        if not self.blocks:
            return aug_hom(apex)
        cone = Cone(apex, legs)
        if not cone.commutes(self.diagram):
            raise WeilError("legs do not commute with the diagram")
        u = factor_through(self.embedding, self.pair(legs))
        if u is None:
            raise WeilError("cone does not factor through the limit")
        for k, leg in legs.items():
            if compose(self.cone.legs[k], u) != leg:
                raise WeilError(f"factorization does not reproduce leg {k}")
        return u


_cache_lock = threading.Lock()
_product_cache: dict = {}
_fibered_cache: dict = {}


class ProductAlgebra(WeilAlgebra):
    """Fibered product; ``slots[k]`` is (factor, basis index) or (None, 0) for 1."""

    def __init__(self, *args, slots, **kw):
        super().__init__(*args, **kw)
        self.slots = tuple(slots)


def product_many(algebras: Sequence[WeilAlgebra]):
    """Fibered product over Q of several algebras, with its projections."""
    if not algebras:
        return terminal(), []
    if len(algebras) == 1:
        return algebras[0], [identity_hom(algebras[0])]
    key = tuple(w.uid for w in algebras)
    with _cache_lock:
        hit = _product_cache.get(key)
    if hit:
        return hit
    # basis: 1, then the maximal ideal of each factor in turn
    slots = [(None, 0)] + [(n, i) for n, w in enumerate(algebras) for i in range(1, w.dim)]
    presented = all(w.presentation is not None for w in algebras)
    kw = {}
    if presented:
        names = _joint_names_many([w.vars for w in algebras])
        offs = [0]
        for w in algebras:
            offs.append(offs[-1] + len(w.vars))
        nv = offs[-1]

        def lift(n, m):
            e = [0] * nv
            e[offs[n]:offs[n + 1]] = m
            return tuple(e)

        monos = {(None, 0): (0,) * nv}
        monos.update({(n, i): lift(n, algebras[n].monomials[i]) for n, i in slots[1:]})
        slots.sort(key=lambda s: P.grlex_key(monos[s]))
        labels = [P.format_monomial(monos[s], names) for s in slots]
        rels = [{lift(n, m): c for m, c in r.items()}
                for n, w in enumerate(algebras) for r in w.presentation.polys]
        for a in range(len(algebras)):
            for b in range(a + 1, len(algebras)):
                for va in range(offs[a], offs[a + 1]):
                    for vb in range(offs[b], offs[b + 1]):
                        e = [0] * nv
                        e[va] = e[vb] = 1
                        rels.append({tuple(e): Fraction(1)})
        nil = max(w.presentation.nil for w in algebras)
        kw = dict(presentation=Presentation.from_polys(names, rels, nil),
                  monomials=[monos[s] for s in slots])
    else:
        labels = ["1"] + [f"{algebras[n].basis[i]}[{n}]" for n, i in slots[1:]]
    index = {s: k for k, s in enumerate(slots)}
    index.update({(n, 0): 0 for n in range(len(algebras))})
    table = []
    for sa in slots:
        row = []
        for sb in slots:
            if sa[0] is None:
                row.append(((index[sb], Fraction(1)),))
            elif sb[0] is None:
                row.append(((index[sa], Fraction(1)),))
            elif sa[0] != sb[0]:
                row.append(())
            else:
                n = sa[0]
                vec = algebras[n].product_vector(sa[1], sb[1])
                row.append(tuple(sorted((index[(n, k)], c) for k, c in vec)))
        table.append(row)
    prod = ProductAlgebra(labels, table, slots=slots, **kw)
    if presented:
        gens = []
        for n, w in enumerate(algebras):
            for g in w.generators:
                v = [Fraction(0)] * len(slots)
                for i, c in enumerate(g.coords):
                    if c and i:
                        v[index[(n, i)]] = c
                gens.append(prod.element(v))
        prod.generators = tuple(gens)
    prod.verify(full=False)
    projs = []
    for n, w in enumerate(algebras):
        m = [[Fraction(0)] * len(slots) for _ in range(w.dim)]
        m[0][0] = Fraction(1)
        for k, s in enumerate(slots):
            if s[0] == n:
                m[s[1]][k] = Fraction(1)
        projs.append(AlgebraHom(prod, w, m))
    result = (prod, projs)
    with _cache_lock:
        result = _product_cache.setdefault(key, result)
    return result


def _joint_names_many(groups: Sequence[Sequence[str]]) -> list[str]:
    joint = [v for g in groups for v in g]
    if len(set(joint)) == len(joint):
        return joint
    return fresh_names(len(joint))


def pairing(algebras: Sequence[WeilAlgebra], legs: Sequence[AlgebraHom]) -> AlgebraHom:
    """The map into ``product_many(algebras)`` with the given components."""
    prod, _ = product_many(algebras)
    if len(algebras) == 1:
        return legs[0]
    apex = legs[0].src
    m = [[Fraction(0)] * apex.dim for _ in range(prod.dim)]
    for c in range(apex.dim):
        cols = [leg.column(c) for leg in legs]
        m[0][c] = cols[0][0]
        for k, (n, i) in enumerate(prod.slots):
            if n is not None:
                m[k][c] = cols[n][i]
    return AlgebraHom(apex, prod, m)


def product_w(w1: WeilAlgebra, w2: WeilAlgebra) -> LimitResult:
    return finite_limit(Diagram({"0": w1, "1": w2}))


def equalizer(f: AlgebraHom, g: AlgebraHom) -> LimitResult:
    """Equalizer of a parallel pair, as the kernel of ``f - g``."""
    if f.src is not g.src or f.dst is not g.dst:
        raise AlgebraMismatch("equalizer needs a parallel pair")
    diff = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(f.matrix, g.matrix)]
    ker = nullspace(diff, f.src.dim)
    sub, incl = subalgebra(f.src, ker)
    diagram = Diagram({"src": f.src, "dst": f.dst}, [("src", "dst", f), ("src", "dst", g)])
    cone = Cone(sub, {"src": incl, "dst": compose(f, incl)})
    return LimitResult(sub, cone, incl, ("src",), diagram)


def finite_limit(d: Diagram) -> LimitResult:
    """Limit of a finite diagram: product of the nodes, then equalize every edge."""
    ids = list(d.nodes)
    if not ids:
        r = terminal()
        return LimitResult(r, Cone(r, {}), identity_hom(r), (), d)
    prod, projs = product_many([d.nodes[k] for k in ids])
    proj = dict(zip(ids, projs))
    rows: list[list[Fraction]] = []
    for a, b, h in d.edges:
        lhs = proj[b].matrix
        rhs = compose(h, proj[a]).matrix
        rows.extend([x - y for x, y in zip(ra, rb)] for ra, rb in zip(lhs, rhs))
    if rows:
        sub, incl = subalgebra(prod, nullspace(rows, prod.dim))
    else:
        sub, incl = prod, identity_hom(prod)
    cone = Cone(sub, {k: compose(proj[k], incl) for k in ids})
    return LimitResult(sub, cone, incl, tuple(ids), d)


def limit_comparison(a: LimitResult, b: LimitResult) -> AlgebraHom:
    """Canonical map between two limits of the same diagram (any ordering)."""
    return b.factor(a.cone.legs)


# -- the fibered tensor -----------------------------------------------------------

def fiber_pair(w1: WeilAlgebra, w2: WeilAlgebra):
    """The two maps ``W1 (x) W2 -> W2`` induced by d -> (0, d) and d -> (0, 0).

    With presentations both are given by generator images; otherwise the
    same maps are written down from the tensor basis directly.
    """
    t = tensor(w1, w2)
    if t.presentation is not None and w2.presentation is not None:
        zero = w2.zero
        f = hom_from_generator_images(t, w2, [zero] * len(w1.vars) + list(w2.generators))
        g = hom_from_generator_images(t, w2, [zero] * (len(w1.vars) + len(w2.vars)))
        return t, f, g
    return (t, *fiber_pair_structural(w1, w2))


def fiber_pair_structural(w1: WeilAlgebra, w2: WeilAlgebra):
    t = tensor(w1, w2)
    fm = [[Fraction(0)] * t.dim for _ in range(w2.dim)]
    gm = [[Fraction(0)] * t.dim for _ in range(w2.dim)]
    for c, (i, j) in enumerate(t.pairs):
        if i == 0:
            fm[j][c] = Fraction(1)
            if j == 0:
                gm[0][c] = Fraction(1)
    return AlgebraHom(t, w2, fm), AlgebraHom(t, w2, gm)


def fibered_tensor_limit(w1: WeilAlgebra, w2: WeilAlgebra) -> LimitResult:
    key = (w1.uid, w2.uid)
    with _cache_lock:
        hit = _fibered_cache.get(key)
    if hit:
        return hit
    t, f, g = fiber_pair(w1, w2)
    lim = equalizer(f, g)
    expected = t.dim - w2.dim + 1
    if lim.algebra.dim != expected:
        raise WeilError(f"fibered tensor has dimension {lim.algebra.dim}, expected {expected}")
    if w1.name and w2.name:
        lim.algebra.name = f"{w1.name}(~){w2.name}"
    with _cache_lock:
        lim = _fibered_cache.setdefault(key, lim)
    return lim


def fibered_tensor(w1: WeilAlgebra, w2: WeilAlgebra):
    """``W1 (~) W2`` and its inclusion into ``W1 (x) W2``."""
    lim = fibered_tensor_limit(w1, w2)
    return lim.algebra, lim.embedding


def fibered_tensor_hom(w: WeilAlgebra, phi: AlgebraHom) -> AlgebraHom:
    """``W (~) phi``: the restriction of ``id_W (x) phi`` to the fibered tensors."""
    sa, ia = fibered_tensor(w, phi.src)
    sb, ib = fibered_tensor(w, phi.dst)
    amb = compose(tensor_hom(identity_hom(w), phi), ia)
    u = factor_through(ib, amb)
    if u is None:
        raise WeilError("id (x) phi does not preserve the fibered tensor")
    return u


def fibered_tensor_diagram(w: WeilAlgebra, d: Diagram) -> Diagram:
    nodes = {k: fibered_tensor(w, a)[0] for k, a in d.nodes.items()}
    edges = [(a, b, fibered_tensor_hom(w, h)) for a, b, h in d.edges]
    return Diagram(nodes, edges)


def check_fibered_assoc(w1: WeilAlgebra, w2: WeilAlgebra, w3: WeilAlgebra) -> dict:
    """Compare ``(W1 (~) W2) (~) W3`` with ``W1 (~) (W2 (x) W3)`` inside the
    triple tensor ``(W1 (x) W2) (x) W3``."""
    s12, inc12 = fibered_tensor(w1, w2)
    left, inc_left = fibered_tensor(s12, w3)
    emb_left = compose(tensor_hom(inc12, identity_hom(w3)), inc_left)
    right, inc_right = fibered_tensor(w1, tensor(w2, w3))
    emb_right = compose(tensor_assoc(w1, w2, w3), inc_right)
    amb = emb_left.dst
    ech_l = echelon_basis(transpose(emb_left.matrix), amb.dim)
    ech_r = echelon_basis(transpose(emb_right.matrix), amb.dim)
    same = ech_l == ech_r
    comp = factor_through(emb_left, emb_right) if same else None
    bij = comp is not None and comp.is_bijective()
    return {
        "ambient_dim": amb.dim,
        "dims": [left.dim, right.dim],
        "same_subspace": same,
        "comparison_bijective": bij,
        "passed": same and bij,
    }


def tensor_preserves_equalizer(w: WeilAlgebra, f: AlgebraHom, g: AlgebraHom) -> dict:
    """Compare ``Eq(f, g) (x) W`` with ``Eq(f (x) W, g (x) W)``."""
    e = equalizer(f, g)
    idw = identity_hom(w)
    e2 = equalizer(tensor_hom(f, idw), tensor_hom(g, idw))
    u = factor_through(e2.embedding, tensor_hom(e.embedding, idw))
    bij = u is not None and u.is_bijective()
    return {"dims": [tensor(e.algebra, w).dim, e2.algebra.dim], "comparison_bijective": bij}


def lim_fibered_comparison(w: WeilAlgebra, d: Diagram) -> dict:
    """Compare ``Lim(W (~) D)`` with ``W (~) Lim D`` by the canonical map.

    Both sides are taken over the diagram with the terminal node adjoined,
    since ``W (~) Q = W`` rather than Q.
    """
    dd = d.over_terminal()
    lim = finite_limit(dd)
    wd = fibered_tensor_diagram(w, dd)
    lim_wd = finite_limit(wd)
    s, _ = fibered_tensor(w, lim.algebra)
    legs = {k: fibered_tensor_hom(w, leg) for k, leg in lim.cone.legs.items()}
    u = lim_wd.factor(legs)
    return {
        "dims": [lim_wd.algebra.dim, s.dim],
        "comparison_bijective": u.is_bijective(),
        "limit_dim": lim.algebra.dim,
    }


def clear_caches() -> None:
    """Forget memoized tensor products, products and fibered tensors."""
    from . import algebra
    with _cache_lock:
        _product_cache.clear()
        _fibered_cache.clear()
    algebra._tensor_cache.clear()
