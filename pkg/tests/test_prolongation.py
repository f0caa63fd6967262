import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from weil.algebra import hom_from_generator_images, weil_algebra
from weil.expr import Var, evaluate, exp, log, parse_expr, sin, sqrt, substitute
from weil.parsing import ParseError
from weil.prolongation import (DomainError, ModeError, WPoint, eval_jet, prolong_map, prolongation_space,
                               taylor_coefficients, truncated_algebra, w_point)
from weil.verify import _naturality_homs, _rand_point, random_polynomial

u0, u1 = Var(0), Var(1)
seeds = st.integers(0, 2**32 - 1)


# -- W-points ------------------------------------------------------------------------


def test_w_point_examples(D, D2):
    assert str(w_point(D, [3], {"x": [1]})) == "(3 + x)"
    p = w_point(D, [2, 5])
    assert p.base == (2, 5) and all(c.nilpart().is_zero() for c in p.coords)
    q = w_point(D2, [0], {"x": [1], "x^2": [0]})
    assert q.coords[0] == D2.gen(0)


def test_w_point_dimension_mismatch(D):
    with pytest.raises(ValueError):
        w_point(D, [1, 2], {"x": [1]})


def test_prolongation_space_examples(D, Dv2, R):
    assert prolongation_space(2, D).linear_dim == 4
    assert prolongation_space(3, R).linear_dim == 3
    assert prolongation_space(1, Dv2).linear_dim == 3
    sp = prolongation_space(2, D)
    p = w_point(D, [1, 2], {"x": [3, 4]})
    assert sp.join(sp.split(p)) == p
    assert sp.from_vector(p.to_vector()) == p
    assert sp.project(p) == (1, 2)


# -- evaluation ----------------------------------------------------------------------


def test_square_over_second_order_jets(D2):
    p = w_point(D2, [3], {"x": [1]})
    assert eval_jet(parse_expr("u0^2"), p) == D2.parse_element("9 + 6*x + x^2")


def test_identity_expression(D2):
    p = w_point(D2, [Fraction(1, 3)], {"x": [2], "x^2": [5]})
    assert eval_jet(u0, p) == p.coords[0]


def test_exp_over_third_order_jets():
    w = weil_algebra("x | x^4 ; nil 4")
    got = eval_jet(exp(u0), WPoint(w, (w.gen(0),)), mode="float").coords
    for j, c in enumerate(got):
        assert abs(c - 1 / math.factorial(j)) <= 1e-12
    exact = eval_jet(exp(u0), WPoint(w, (w.gen(0),)), mode="exact").coords
    assert exact == tuple(Fraction(1, math.factorial(j)) for j in range(4))


def test_leibniz_rule(D):
    f = prolong_map([u0 * u1], D)
    p = w_point(D, [2, 5], {"x": [7, 11]})
    assert f(p).coords[0] == D.parse_element("10 + 57*x")


def test_constant_map(D2):
    p = _rand_point(random.Random(1), D2, 2)
    out = prolong_map([parse_expr("7/2")], D2)(p)
    assert out.coords[0] == D2.scalar(Fraction(7, 2))


def test_taylor_examples():
    assert taylor_coefficients(u0 ** 3, 1, 3, mode="exact") == [1, 3, 3, 1]
    assert taylor_coefficients(parse_expr("5"), 2, 4, mode="exact") == [5, 0, 0, 0, 0]
    want = [0, 1, 0, -1 / 6, 0, 1 / 120]
    got = taylor_coefficients(sin(u0), 0, 5)
    assert all(abs(g - w) <= 1e-12 for g, w in zip(got, want))


def test_exact_mode_refuses_irrational_values():
    with pytest.raises(ModeError):
        taylor_coefficients(exp(u0), 1, 2, mode="exact")
    with pytest.raises(ModeError):
        taylor_coefficients(sqrt(u0), 2, 2, mode="exact")
    assert taylor_coefficients(sqrt(u0), 4, 2, mode="exact") == [2, Fraction(1, 4), Fraction(-1, 64)]
    assert taylor_coefficients(log(1 + u0), 0, 3, mode="exact") == [0, 1, Fraction(-1, 2), Fraction(1, 3)]


def test_domain_errors():
    with pytest.raises(DomainError):
        taylor_coefficients(log(u0), 0, 2)
    with pytest.raises(DomainError):
        taylor_coefficients(sqrt(u0), -1, 2)
    with pytest.raises(DomainError):
        taylor_coefficients(sqrt(u0), 0, 2)


def test_arity_mismatch(D):
    with pytest.raises(ValueError):
        eval_jet(u0 * u1, w_point(D, [1]))


# -- functor laws, exact ---------------------------------------------------------------


@given(seeds, st.sampled_from(["R", "W_D", "W_D2", "W_D(2)", "W_DxD"]))
def test_functor_laws(fam, seed, name):
    rng = random.Random(seed)
    w = fam[name]
    p = _rand_point(rng, w, 2)
    f = [random_polynomial(rng, 2) for _ in range(2)]
    g = [random_polynomial(rng, 2) for _ in range(2)]
    assert prolong_map([u0, u1], w)(p) == p
    fg = [substitute(e, g) for e in f]
    assert prolong_map(fg, w)(p) == prolong_map(f, w)(prolong_map(g, w)(p))
    paired = prolong_map([f[0], g[1]], w)(p)
    assert paired.coords == (prolong_map([f[0]], w)(p).coords[0], prolong_map([g[1]], w)(p).coords[0])
    assert eval_jet(f[0], p).aug == evaluate(f[0], p.base)


@given(seeds, st.integers(0, 7))
def test_naturality_in_the_algebra(seed, which):
    rng = random.Random(seed)
    phi = _naturality_homs()[which]
    p = _rand_point(rng, phi.src, 2)
    f = [random_polynomial(rng, 2)]
    assert prolong_map(f, phi.dst)(p.map_hom(phi)) == prolong_map(f, phi.src)(p).map_hom(phi)


@given(seeds, st.integers(1, 6))
def test_truncation_consistency(seed, k):
    rng = random.Random(seed)
    hi, lo = truncated_algebra(k), truncated_algebra(k - 1)
    cut = hom_from_generator_images(hi, lo, ["x"])
    f = [random_polynomial(rng, 1, max_degree=6)]
    p = _rand_point(rng, hi, 1)
    assert prolong_map(f, hi)(p).map_hom(cut) == prolong_map(f, lo)(p.map_hom(cut))


# -- oracles ---------------------------------------------------------------------------

U, V = sympy.symbols("u0 u1")


def to_sympy(text):
    return sympy.sympify(text.replace("^", "**"), locals={"u0": U, "u1": V})


@given(seeds)
def test_polynomial_jets_match_symbolic_derivatives(seed):
    rng = random.Random(seed)
    f = random_polynomial(rng, 1, max_degree=4)
    a = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    got = taylor_coefficients(f, a, 6, mode="exact")
    fs = to_sympy(str(f))
    for j, c in enumerate(got):
        want = sympy.diff(fs, U, j).subs(U, sympy.Rational(a.numerator, a.denominator)) / sympy.factorial(j)
        assert sympy.Rational(c.numerator, c.denominator) == want


@given(seeds)
def test_mixed_partials_over_d_times_d(DxD, seed):
    rng = random.Random(seed)
    f = random_polynomial(rng, 2, max_degree=4)
    a, b = (Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(2))
    p = WPoint(DxD, (DxD.scalar(a) + DxD.gen("x"), DxD.scalar(b) + DxD.gen("y")))
    got = eval_jet(f, p).coords
    fs = to_sympy(str(f))
    at = {U: sympy.Rational(a.numerator, a.denominator), V: sympy.Rational(b.numerator, b.denominator)}
    want = [fs, sympy.diff(fs, U), sympy.diff(fs, V), sympy.diff(fs, U, V)]
    assert [sympy.Rational(c.numerator, c.denominator) for c in got] == [w.subs(at) for w in want]


@pytest.mark.parametrize("text, x0", [
    ("exp(u0)", "0"), ("exp(u0)", "3/2"), ("sin(u0)", "1/3"), ("cos(u0)", "-2"),
    ("log(1 + u0)", "1/2"), ("log(1 + u0)", "-1/2"), ("sqrt(u0)", "2"), ("exp(sin(u0))", "1/4"),
])
def test_taylor_matches_sympy_to_order_six(text, x0):
    f = parse_expr(text)
    got = taylor_coefficients(f, Fraction(x0), 6)
    fs = to_sympy(text)
    for j, c in enumerate(got):
        want = float(sympy.diff(fs, U, j).subs(U, sympy.Rational(x0)) / sympy.factorial(j))
        assert abs(c - want) <= max(1e-10 * abs(want), 1e-14)


@pytest.mark.parametrize("text", ["exp(u0)", "sin(u0)*u0^2", "log(1 + u0^2)", "sqrt(1 + u0^2)", "pow(2 + u0, 5/3)"])
@pytest.mark.parametrize("x0", [-0.6, 0.2, 1.7])
def test_first_coefficient_matches_finite_differences(D, text, x0):
    f = parse_expr(text)
    slope = eval_jet(f, WPoint(D, (D.element([x0, 1.0]),)), mode="float").coords[1]
    h = 1e-5
    fd = (evaluate(f, [x0 + h]) - evaluate(f, [x0 - h])) / (2 * h)
    assert abs(slope - fd) <= 1e-6 * max(abs(fd), 1e-3)


# -- expression grammar ---------------------------------------------------------------


def test_expression_parsing():
    e = parse_expr("u0^3 + 2*u0*u1 - exp(sin(u1)) + pow(u0, 1/2)")
    assert e.arity() == 2
    assert evaluate(parse_expr("u0^2/4 - u1"), [Fraction(2), Fraction(3)]) == -2


@pytest.mark.parametrize("text", ["v0 + 1", "tan(u0)", "u0^u1", "exp(u0, u1)", "u0 +", "u0/0"])
def test_expression_errors(text):
    with pytest.raises(ParseError):
        parse_expr(text)
