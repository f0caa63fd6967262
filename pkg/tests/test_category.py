import itertools
import json

import pytest
from hypothesis import given, strategies as st

from weil.algebra import (AlgebraHom, NotAHom, WeilError, aug_hom, compose, hom_from_generator_images,
                          identity_hom, tensor, weil_algebra)
from weil.category import (Cone, Diagram, check_fibered_assoc, equalizer, factor_through, fibered_tensor,
                           fibered_tensor_diagram, finite_limit, lim_fibered_comparison, limit_comparison,
                           product_w, tensor_preserves_equalizer, terminal)
from weil.linalg import echelon_basis, rref, transpose
from weil.verify import parallel_pair_homs, stock_diagrams


def span_labels(lim):
    _, piv = rref(lim.echelon, lim.ambient.dim)
    return [lim.ambient.basis[p] for p in piv]


# -- terminal object ------------------------------------------------------------------


def test_terminal_is_one_dimensional():
    assert terminal().dim == 1


def test_only_hom_to_terminal_is_augmentation(D):
    assert AlgebraHom(D, terminal(), [[1, 0]]) == aug_hom(D)
    with pytest.raises(NotAHom):
        AlgebraHom(D, terminal(), [[1, 1]])
    assert aug_hom(terminal()) == identity_hom(terminal())


# -- equalizers -----------------------------------------------------------------------


def test_parallel_pair_equalizer(DxD):
    s, t = parallel_pair_homs()
    eq = equalizer(s, t)
    assert eq.algebra.dim == 3
    assert span_labels(eq) == ["1", "x", "x*y"]
    assert compose(s, eq.embedding) == compose(t, eq.embedding)


def test_equalizer_of_a_map_with_itself(D2):
    f = hom_from_generator_images(D2, D2, ["x^2"])
    eq = equalizer(f, f)
    assert eq.algebra.dim == D2.dim
    assert eq.embedding.is_bijective()


def test_equalizer_of_identity_and_negation(D):
    neg = hom_from_generator_images(D, D, ["-x"])
    assert equalizer(identity_hom(D), neg).algebra.dim == 1


def test_first_order_pair_factors_uniquely(DxD, Dv2):
    s, t = parallel_pair_homs()
    eq = equalizer(s, t)
    c = hom_from_generator_images(Dv2, DxD, ["x", "x*y"])
    u = eq.factor({"src": c, "dst": compose(s, c)})
    assert compose(eq.embedding, u) == c
    assert u.is_bijective()


def test_non_cone_is_rejected(DxD, D):
    s, t = parallel_pair_homs()
    eq = equalizer(s, t)
    bad = identity_hom(DxD)
    with pytest.raises(WeilError):
        eq.factor({"src": bad, "dst": compose(s, bad)})


# -- products -----------------------------------------------------------------------


def test_product_of_dual_numbers_is_first_order_pair(D, Dv2):
    lim = product_w(D, D)
    assert lim.algebra.dim == 3
    c = hom_from_generator_images(Dv2, lim.algebra, list(lim.algebra.generators))
    assert c.is_bijective()
    assert compose(lim.cone.legs["0"], c) == hom_from_generator_images(Dv2, D, ["x", "0"])


def test_product_with_terminal(fam, R):
    for w in fam.values():
        lim = product_w(w, R)
        assert lim.algebra.dim == w.dim
        assert lim.cone.legs["0"].is_bijective()


def test_product_dimension(fam):
    for a, b in itertools.product(fam.values(), repeat=2):
        assert product_w(a, b).algebra.dim == a.dim + b.dim - 1


def test_product_universal_property(D, D2, Dv2):
    lim = product_w(D2, D)
    f1 = hom_from_generator_images(Dv2, D2, ["x^2", "2*x^2"])
    f2 = hom_from_generator_images(Dv2, D, ["0", "x"])
    u = lim.factor({"0": f1, "1": f2})
    assert compose(lim.cone.legs["0"], u) == f1
    assert compose(lim.cone.legs["1"], u) == f2


# -- finite limits --------------------------------------------------------------------


def test_single_node_limit(D2):
    lim = finite_limit(Diagram({"a": D2}))
    assert lim.algebra.dim == D2.dim
    assert lim.cone.legs["a"].is_bijective()


def test_parallel_pair_limit_is_the_equalizer(DxD):
    d = stock_diagrams()["parallel pair"]
    lim = finite_limit(d)
    eq = equalizer(*parallel_pair_homs())
    assert lim.algebra.dim == eq.algebra.dim == 3
    # the "a" leg identifies the limit with the equalizer subspace
    assert echelon_basis(transpose(lim.cone.legs["a"].matrix), DxD.dim) == eq.echelon


def test_discrete_limit_is_the_product(D, D2):
    lim = finite_limit(Diagram({"0": D2, "1": D}))
    prod = product_w(D2, D)
    assert limit_comparison(lim, prod).is_bijective()


def test_empty_diagram_gives_terminal():
    lim = finite_limit(Diagram({}))
    assert lim.algebra.dim == 1


def test_limit_independent_of_node_order(D, D2, Dv2):
    d = stock_diagrams()["cospan"]
    flipped = Diagram(dict(reversed(list(d.nodes.items()))), list(reversed(d.edges)))
    a, b = finite_limit(d), finite_limit(flipped)
    assert a.cone.commutes(d) and b.cone.commutes(flipped)
    assert limit_comparison(a, b).is_bijective()


def test_diagram_from_json(tmp_path):
    text = json.dumps({"nodes": {"a": "x,y | x^2, y^2 ; nil 3", "b": "x | x^2 ; nil 2"},
                       "edges": [{"from": "a", "to": "b", "images": ["0", "x"]},
                                 {"from": "a", "to": "b", "images": ["0", "0"]}]})
    lim = finite_limit(Diagram.from_json(text))
    assert lim.algebra.dim == 3
    with pytest.raises(ValueError):
        Diagram.from_json({"nodes": {"a": "x | x^2 ; nil 2"}, "edges": [{"from": "a", "to": "z", "images": ["x"]}]})


def test_edge_must_match_nodes(D, D2):
    h = hom_from_generator_images(D, D2, ["x^2"])
    with pytest.raises(Exception):
        Diagram({"a": D2, "b": D2}, [("a", "b", h)])


# -- fibered tensor ---------------------------------------------------------------------


def test_fibered_square_of_dual_numbers(D, Dv2):
    s, incl = fibered_tensor(D, D)
    assert s.dim == 3
    t = incl.dst
    c = hom_from_generator_images(Dv2, t, [t.gen(0), t.gen(0) * t.gen(1)])
    u = factor_through(incl, c)
    assert u is not None and u.is_bijective()


def test_fibered_tensor_with_terminal(fam, R):
    for w in fam.values():
        s, incl = fibered_tensor(w, R)
        assert s.dim == w.dim and incl.is_bijective()
        assert fibered_tensor(R, w)[0].dim == 1


def test_fibered_tensor_dimension_formula(fam):
    for a, b in itertools.product(fam.values(), repeat=2):
        s, _ = fibered_tensor(a, b)
        assert s.dim == a.dim * b.dim - b.dim + 1


def test_fibered_tensor_is_a_subalgebra(fam):
    for a, b in itertools.product(fam.values(), repeat=2):
        s, incl = fibered_tensor(a, b)
        s.verify(full=True)
        incl.validate()


@pytest.mark.parametrize("names", [("W_D", "W_D", "W_D"), ("W_D", "R", "R"), ("W_D", "W_D2", "W_D"),
                                   ("W_DxD", "W_D(2)", "W_D2")])
def test_fibered_associativity_examples(fam, names):
    w1, w2, w3 = (fam[n] for n in names)
    r = check_fibered_assoc(w1, w2, w3)
    assert r["passed"]
    assert r["ambient_dim"] == w1.dim * w2.dim * w3.dim
    if names == ("W_D", "W_D", "W_D"):
        assert r["ambient_dim"] == 8


# -- limits commute with the fibered tensor ----------------------------------------------


@pytest.mark.parametrize("dname", ["single node", "discrete pair", "parallel pair", "cospan"])
def test_lim_fibered_comparison(fam, dname):
    d = stock_diagrams()[dname]
    for w in fam.values():
        r = lim_fibered_comparison(w, d)
        assert r["comparison_bijective"], (w, dname, r)
        assert r["dims"][0] == r["dims"][1]


def test_discrete_pair_needs_the_terminal_node(D):
    # W (~) Q is W, not Q, so the plain discrete diagram overcounts
    d = stock_diagrams()["discrete pair"]
    naive = finite_limit(fibered_tensor_diagram(D, d)).algebra.dim
    right = fibered_tensor(D, finite_limit(d).algebra)[0].dim
    assert (naive, right) == (5, 4)
    assert lim_fibered_comparison(D, d)["dims"] == [4, 4]


def test_tensor_preserves_equalizers(fam):
    s, t = parallel_pair_homs()
    for w in fam.values():
        r = tensor_preserves_equalizer(w, s, t)
        assert r["comparison_bijective"] and r["dims"][0] == r["dims"][1]


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_equalizer_cones_factor_uniquely(a, b, c, d):
    # homs W_D(2) -> W_DxD with images of the form (p x + q xy) equalize the pair
    s, t = parallel_pair_homs()
    eq = equalizer(s, t)
    dxd = s.src
    dv2 = weil_algebra("x,y | x^2, y^2, x*y ; nil 2")
    h = hom_from_generator_images(dv2, dxd, [f"{a}*x + {b}*x*y", f"{c}*x + {d}*x*y"])
    u = factor_through(eq.embedding, h)
    assert u is not None and compose(eq.embedding, u) == h
    assert eq.embedding.is_injective()
