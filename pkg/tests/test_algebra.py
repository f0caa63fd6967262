import itertools
import json
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from weil.algebra import (AlgebraHom, AlgebraMismatch, ConstantTermError, NotAHom, NotInMaximalIdeal,
                          NotWeil, RelationViolated, aug_hom, augment, build_weil_algebra, compose,
                          hom_from_generator_images, identity_hom, multiply, nilpotency_index,
                          parse_presentation, reals, tensor, tensor_assoc, tensor_assoc_from_generators,
                          tensor_hom, tensor_infinity, unit_hom, weil_algebra)
from weil.parsing import ParseError
from weil.poly import UndeclaredVariable

# -- presentations -------------------------------------------------------------------


def test_parse_dual_numbers():
    p = parse_presentation("x | x^2 ; nil 2")
    assert p.vars == ("x",)
    assert p.relation_strings() == ["x^2"]
    assert p.nil == 2


def test_parse_first_order_pair():
    p = parse_presentation("x,y | x^2, y^2, x*y ; nil 2")
    assert p.vars == ("x", "y")
    assert sorted(p.relation_strings()) == ["x*y", "x^2", "y^2"]
    assert str(p) == "x,y | x^2, y^2, x*y ; nil 2"


def test_constant_term_is_rejected_with_position():
    with pytest.raises(ConstantTermError) as info:
        parse_presentation("x | x^2 + 1 ; nil 2")
    assert info.value.line == 1 and info.value.col == 5


@pytest.mark.parametrize("text, error", [
    ("x | y^2 ; nil 2", UndeclaredVariable),
    ("x, x | x^2 ; nil 2", ParseError),
    ("x | ; nil 2", ParseError),
    ("x | x^2", ParseError),
    ("x | x^2 ; nil 0", ParseError),
    ("x | x^^2 ; nil 2", ParseError),
])
def test_malformed_presentations(text, error):
    with pytest.raises(error):
        parse_presentation(text)


def test_syntax_error_reports_column():
    with pytest.raises(ParseError) as info:
        parse_presentation("x,y | x^2, y^2 x ; nil 2")
    assert info.value.line == 1 and info.value.col > 10


def test_rational_coefficients():
    w = weil_algebra("x,y | x^2 - 1/2*y^2, x*y ; nil 3")
    assert w.dim == 4
    assert w.gen("x") * w.gen("x") == w.gen("y") ** 2 / 2


# -- building algebras -----------------------------------------------------------------


def test_bases_of_named_algebras(D, D2, Dv2, DxD, R):
    assert D.basis == ("1", "x")
    assert D2.basis == ("1", "x", "x^2")
    assert Dv2.basis == ("1", "x", "y")
    assert DxD.basis == ("1", "x", "y", "x*y")
    assert R.dim == 1 and R.basis == ("1",)


def test_first_order_pair_products_vanish(Dv2):
    x, y = Dv2.gen("x"), Dv2.gen("y")
    assert (x * x).is_zero() and (y * y).is_zero() and (x * y).is_zero()


def test_inconsistent_nilpotency_bound():
    with pytest.raises(NotWeil):
        weil_algebra("x | x^3 ; nil 2")


def test_unit_in_ideal_is_not_a_weil_algebra():
    with pytest.raises(ParseError):
        weil_algebra("x | 1 ; nil 1")


def test_all_family_algebras_satisfy_invariants(fam):
    for w in fam.values():
        w.verify(full=True)
        one = w.one
        for i in range(1, w.dim):
            b = w.basis_element(i)
            assert augment(b) == 0
            assert (b ** w.dim).is_zero()
            assert b * one == b


@pytest.mark.parametrize("text", [
    "x,y | x^2, y^2, x*y ; nil 2",
    "x,y | x^2 - y^3, x*y ; nil 5",
    "x,y,z | x^2, y^2 - x*z, z^3, y*z ; nil 4",
])
def test_relation_order_does_not_matter(text):
    pres = parse_presentation(text)
    base = build_weil_algebra(pres)
    for perm in itertools.permutations(pres.relations):
        other = build_weil_algebra(type(pres)(pres.vars, tuple(perm), pres.nil))
        assert other.basis == base.basis
        assert other.structure_dense() == base.structure_dense()


# -- multiplication against a Groebner normal form oracle ------------------------------

ORACLE_ALGEBRAS = [
    "x | x^3 ; nil 3",
    "x,y | x^2, y^2 ; nil 3",
    "x,y | x^2 - y^3, x*y ; nil 5",
    "x,y | x^3 - x*y, y^2 ; nil 5",
]


def _sympy_normal_form(w, poly):
    pres = w.presentation
    syms = sympy.symbols(list(pres.vars))
    gens = [sympy.sympify(r.replace("^", "**"), locals=dict(zip(pres.vars, syms)))
            for r in pres.relation_strings()]
    # everything of degree >= nil lies in the ideal
    gens += [sympy.prod(m) for m in itertools.combinations_with_replacement(syms, pres.nil)]
    g = sympy.groebner(gens, *syms, order="grlex")
    return g.reduce(poly)[1], syms


def _as_sympy(elem, syms):
    w = elem.algebra
    names = dict(zip(w.presentation.vars, syms))
    total = 0
    for c, label in zip(elem.coords, w.basis):
        term = sympy.Rational(c.numerator, c.denominator)
        if label != "1":
            term *= sympy.sympify(label.replace("^", "**"), locals=names)
        total += term
    return sympy.expand(total)


coef = st.integers(-4, 4).map(Fraction)


@pytest.mark.parametrize("text", ORACLE_ALGEBRAS)
@given(data=st.data())
def test_products_match_groebner_reduction(text, data):
    w = weil_algebra(text)
    a = w.element([data.draw(coef) for _ in range(w.dim)])
    b = w.element([data.draw(coef) for _ in range(w.dim)])
    pres = w.presentation
    syms = sympy.symbols(list(pres.vars))
    want, _ = _sympy_normal_form(w, sympy.expand(_as_sympy(a, syms) * _as_sympy(b, syms)))
    assert sympy.expand(_as_sympy(multiply(a, b), syms) - want) == 0


@given(data=st.data())
def test_ring_axioms(fam, data):
    w = data.draw(st.sampled_from(list(fam.values())))
    a, b, c = (w.element([data.draw(coef) for _ in range(w.dim)]) for _ in range(3))
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert augment(a * b) == augment(a) * augment(b)


def test_multiply_examples(D, D2, Dv2):
    x = D2.gen(0)
    assert (1 + x) * (1 + x) == D2.parse_element("1 + 2*x + x^2")
    assert (D.gen(0) * D.gen(0)).is_zero()
    assert multiply(Dv2.gen("x"), Dv2.gen("y")).is_zero()
    with pytest.raises(AlgebraMismatch):
        multiply(D.gen(0), D2.gen(0))


def test_augment_examples(D, D2):
    assert augment(D.parse_element("3 + 5*x")) == 3
    assert augment(D2.parse_element("x^2")) == 0
    assert augment(D.zero) == 0


def test_nilpotency_examples(D, D2, Dv2):
    assert nilpotency_index(D2.gen(0)) == 3
    assert nilpotency_index(D.parse_element("1 + x")) is None
    assert nilpotency_index(Dv2.gen("x") + Dv2.gen("y")) == 2
    assert nilpotency_index(D.zero) == 1


# -- tensor products ----------------------------------------------------------------


def test_tensor_of_dual_numbers(D):
    t, i1, i2 = tensor_infinity(D, D)
    assert t.dim == 4
    assert str(t.presentation) == "x,y | x^2, y^2 ; nil 3"
    assert i1(D.gen(0)) == t.gen("x") and i2(D.gen(0)) == t.gen("y")


def test_tensor_with_reals_is_unit(fam, R):
    for w in fam.values():
        t, i1, _ = tensor_infinity(w, R)
        assert i1.is_bijective()


def test_tensor_dimension_law(fam):
    for a, b in itertools.product(fam.values(), repeat=2):
        assert tensor(a, b).dim == a.dim * b.dim


def test_jets_times_dual_numbers(D, D2):
    assert tensor(D2, D).dim == 6


def test_tensor_is_functorial(D, D2, Dv2):
    f1 = hom_from_generator_images(D, D2, ["x^2"])
    g1 = hom_from_generator_images(D2, D, ["x"])
    f2 = hom_from_generator_images(Dv2, D, ["x", "x"])
    g2 = identity_hom(D)
    assert tensor_hom(compose(g1, f1), compose(g2, f2)) == compose(tensor_hom(g1, g2), tensor_hom(f1, f2))
    assert tensor_hom(identity_hom(D), identity_hom(D2)) == identity_hom(tensor(D, D2))


def test_tensor_associativity_is_bijective(fam):
    for a, b, c in itertools.product(fam.values(), repeat=3):
        h = tensor_assoc(a, b, c)
        assert h.is_bijective()
        assert h == tensor_assoc_from_generators(a, b, c)


# -- homomorphisms -------------------------------------------------------------------


def test_square_map_into_jets(D, D2):
    h = hom_from_generator_images(D, D2, ["x^2"])
    assert h(D.gen(0)) == D2.gen(0) ** 2


def test_parallel_pair_components_are_homs(DxD, D):
    s = hom_from_generator_images(DxD, D, ["0", "x"])
    assert s(DxD.gen("y")) == D.gen(0) and s(DxD.gen("x")).is_zero()


def test_hom_errors(D, D2):
    with pytest.raises(RelationViolated) as info:
        hom_from_generator_images(D, D2, ["x"])
    assert "x^2" in str(info.value)
    with pytest.raises(NotInMaximalIdeal):
        hom_from_generator_images(D, D2, ["1 + x"])
    with pytest.raises(NotAHom):
        AlgebraHom(D, D, [[1, 1], [0, 1]])


def test_hom_into_jets_is_valid_when_relation_holds(D2):
    # x -> x^2 descends: x^6 = 0
    assert hom_from_generator_images(D2, D2, ["x^2"]).rank == 2


def test_compose_examples(DxD, D, Dv2, R):
    f = hom_from_generator_images(DxD, D, ["0", "x"])
    assert compose(identity_hom(D), f) == f
    assert compose(aug_hom(D), f) == aug_hom(DxD)
    c = hom_from_generator_images(Dv2, DxD, ["x", "x*y"])
    direct = hom_from_generator_images(Dv2, D, ["0", "0"])
    assert compose(f, c) == direct
    assert compose(aug_hom(R), unit_hom(R)) == identity_hom(R)


def test_every_emitted_hom_validates(fam):
    homs = [hom_from_generator_images(fam["W_D"], fam["W_D2"], ["x^2"]),
            hom_from_generator_images(fam["W_DxD"], fam["W_D(2)"], ["x", "y"]),
            hom_from_generator_images(fam["W_D(2)"], fam["W_DxD"], ["x", "x*y"])]
    for h in homs:
        AlgebraHom(h.src, h.dst, h.matrix, check=True)


def test_serialization_shape(DxD):
    data = json.loads(json.dumps(DxD.serialize()))
    assert data["vars"] == ["x", "y"]
    assert data["nil"] == 3
    assert data["basis"] == ["1", "x", "y", "x*y"]
    assert data["structure"][1][2] == ["0", "0", "0", "1"]
    assert reals().serialize()["basis"] == ["1"]


def test_bound_too_small_for_local_ideal():
    # x^4 = x^2*y is nonzero in the local algebra, so nil 4 understates it
    with pytest.raises(NotWeil):
        weil_algebra("x,y | x^3 - x*y, y^2 ; nil 4")
