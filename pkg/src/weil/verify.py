"""Named verification suites.

Each suite replays one claim as a sequence of exact checks and returns a
:class:`SuiteReport`.  Reports are deterministic apart from ``duration_ms``;
the sampled W-points of the ``jets`` suite are driven by ``WEIL_VERIFY_SEED``.
"""

from __future__ import annotations

import math
import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable

from .algebra import (AlgebraHom, WeilAlgebra, aug_hom, compose, hom_from_generator_images, reals,
                      tensor, unit_hom, weil_algebra, WeilError)
from .bundles import (euclidean_check, fiber_add, fiber_scale, fibered_product_check, fibered_prolong,
                      iterated_prolongation, m_microlinearity_check, TrivialBundleModel,
                      weil_exponentiability_check)
from .category import (Diagram, check_fibered_assoc, equalizer, factor_through, fibered_tensor,
                       lim_fibered_comparison)
from .expr import Add, Const, Expr, Mul, Pow, Var, cos, evaluate, exp, log, sin, sqrt, substitute
from .linalg import fstr
from .prolongation import WPoint, eval_jet, prolong_map, taylor_coefficients, truncated_algebra

PASS, FAIL = "pass", "fail"


@dataclass
class Check:
    name: str
    cite: str
    status: str
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "cite": self.cite, "status": self.status, "details": self.details}


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check]
    duration_ms: int = 0

    @property
    def passed(self) -> bool:
        return all(c.status == PASS for c in self.checks)

    def to_json(self) -> dict:
        return {"suite": self.suite, "checks": [c.to_json() for c in self.checks],
                "duration_ms": self.duration_ms}


class UnknownSuite(KeyError):
    pass


# -- the test family ------------------------------------------------------------------

FAMILY_TEXT = {
    "R": "| ; nil 1",
    "W_D": "x | x^2 ; nil 2",
    "W_D2": "x | x^3 ; nil 3",
    "W_D(2)": "x,y | x^2, y^2, x*y ; nil 2",
    "W_DxD": "x,y | x^2, y^2 ; nil 3",
}

_FAMILY: dict[str, WeilAlgebra] = {}


def family() -> dict[str, WeilAlgebra]:
    """R, dual numbers, second-order jets, D(2) and D x D, built once."""
    if not _FAMILY:
        for name, text in FAMILY_TEXT.items():
            _FAMILY[name] = reals() if name == "R" else weil_algebra(text, name=name)
    return _FAMILY


def describe(w: WeilAlgebra) -> dict:
    """Witness form of an algebra: presentation when there is one, else the full table."""
    if w.presentation is not None:
        return {"presentation": str(w.presentation), "basis": list(w.basis)}
    return w.serialize()


def describe_hom(h: AlgebraHom) -> dict:
    return {"src": describe(h.src), "dst": describe(h.dst),
            "matrix": [[fstr(x) for x in row] for row in h.matrix]}


def parallel_pair_homs() -> tuple[AlgebraHom, AlgebraHom]:
    """The homs ``W_{DxD} -> W_D`` induced by ``d -> (0, d)`` and ``d -> (0, 0)``."""
    f = family()
    dd, d = f["W_DxD"], f["W_D"]
    return (hom_from_generator_images(dd, d, ["0", "x"]), hom_from_generator_images(dd, d, ["0", "0"]))


def stock_diagrams() -> dict[str, Diagram]:
    f = family()
    d, d2, dv = f["W_D"], f["W_D2"], f["W_D(2)"]
    s, t = parallel_pair_homs()
    cospan = Diagram({"a": d2, "b": dv, "c": d},
                     [("a", "c", hom_from_generator_images(d2, d, ["x"])),
                      ("b", "c", hom_from_generator_images(dv, d, ["x", "x"]))])
    return {
        "single node": Diagram({"a": d2}),
        "discrete pair": Diagram({"a": d, "b": d}),
        "parallel pair": Diagram({"a": f["W_DxD"], "b": d}, [("a", "b", s), ("a", "b", t)]),
        "cospan": cospan,
    }


def seed() -> int:
    return int(os.environ.get("WEIL_VERIFY_SEED", "0"))


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


# -- suites ----------------------------------------------------------------------------

CITE = {
    "lemma-3-2": "Lemma 3.2",
    "prop-3-3": "Proposition 3.3",
    "thm-3-1": "Theorem 3.1",
    "thm-3-4": "Theorem 3.4",
    "prop-4-6": "Proposition 4.6",
    "thm-4-7": "Theorem 4.7",
    "lemma-5-7": "Lemma 5.7",
    "thm-5-6": "Theorem 5.6",
    "thm-6-6": "Theorem 6.6",
    "jets": "Weil prolongation of smooth maps",
}


def suite_lemma_3_2() -> list[Check]:
    cite = CITE["lemma-3-2"]
    f = family()
    dd, dv = f["W_DxD"], f["W_D(2)"]
    s, t = parallel_pair_homs()
    checks = []
    eq = equalizer(s, t)
    basis = [dd.basis[p] for p in _pivots(eq)]
    checks.append(Check("equalizer is spanned by 1, x, x*y", cite, _status(basis == ["1", "x", "x*y"]),
                        {"dims": [dd.dim, eq.algebra.dim], "basis": basis}))
    c = hom_from_generator_images(dv, dd, ["x", "x*y"])
    equalizes = compose(s, c) == compose(t, c)
    checks.append(Check("(d1,d2) -> (d1,d1 d2) equalizes the pair", cite, _status(equalizes),
                        {} if equalizes else {"witness": describe_hom(c)}))
    u = factor_through(eq.embedding, c)
    bij = u is not None and u.is_bijective()
    checks.append(Check("comparison with W_D(2) is bijective", cite, _status(bij),
                        {"dims": [dv.dim, eq.algebra.dim]}))

    cones = _equalizing_cones(s, t, random.Random(seed()), 12)
    bad = None
    for h in cones:
        # unique factorization through c: existence plus injectivity of c
        v = factor_through(c, h)
        if v is None or compose(c, v) != h or not c.is_injective():
            bad = h
            break
    checks.append(Check("cones factor uniquely through W_D(2)", cite, _status(bad is None and len(cones) >= 10),
                        {"cones": len(cones)} if bad is None else {"cones": len(cones), "witness": describe_hom(bad)}))
    return checks


def _pivots(lim) -> list[int]:
    from .linalg import rref
    return rref(lim.echelon, lim.ambient.dim)[1]


def _equalizing_cones(s: AlgebraHom, t: AlgebraHom, rng: random.Random, want: int) -> list[AlgebraHom]:
    """Random homs into ``s.src`` that equalize ``s`` and ``t``, by rejection sampling."""
    amb = s.src
    sources = [w for w in family().values()]
    cones: list[AlgebraHom] = []
    seen = set()
    for _ in range(4000):
        if len(cones) >= want:
            break
        a = sources[rng.randrange(len(sources))]
        images = []
        for _g in a.vars:
            coords = [Fraction(0)] + [Fraction(rng.randint(-2, 2)) for _ in range(amb.dim - 1)]
            images.append(amb.element(coords))
        try:
            h = hom_from_generator_images(a, amb, images)
        except WeilError:
            continue
        key = (a.uid, tuple(map(tuple, h.matrix)))
        if key in seen or compose(s, h) != compose(t, h):
            continue
        seen.add(key)
        cones.append(h)
    return cones


def suite_prop_3_3() -> list[Check]:
    cite = CITE["prop-3-3"]
    f = family()
    d = f["W_D"]
    s, incl = fibered_tensor(d, d)
    target = weil_algebra("x,y | x^2, y^2, x*y ; nil 2")
    t = incl.dst
    c = hom_from_generator_images(target, t, [t.gen(0), t.gen(0) * t.gen(1)])
    u = factor_through(incl, c)
    bij = u is not None and u.is_bijective()
    ok = s.dim == 3 and bij
    details = {"dims": [s.dim, target.dim], "basis": [t.basis[i] for i in _incl_pivots(incl)]}
    if not ok:
        details["witness"] = describe(s)
    return [Check("W_D (~) W_D is W_D(2)", cite, _status(ok), details)]


def _incl_pivots(incl: AlgebraHom) -> list[int]:
    from .linalg import rref, transpose
    return rref(transpose(incl.matrix), incl.dst.dim)[1]


def suite_thm_3_1() -> list[Check]:
    cite = CITE["thm-3-1"]
    checks = []
    for name, w in family().items():
        bad, count = None, 0
        for n, b, c in product(range(3), repeat=3):
            r = fibered_product_check(n, b, c, w)
            count += 1
            if not (r["comparison_bijective"] and r["dims"][0] == r["dims"][1] == r["expected_dim"]):
                bad = {"n": n, "b": b, "c": c, "algebra": describe(w), "report": r}
                break
        details = {"cases": count}
        if bad:
            details["witness"] = bad
        checks.append(Check(f"fibered products preserved over {name}", cite, _status(bad is None), details))
    return checks


def suite_thm_3_4() -> list[Check]:
    cite = CITE["thm-3-4"]
    fam = family()
    checks = []
    for n in (1, 2, 3):
        dims, bad = {}, None
        for (a, w1), (b, w2) in product(fam.items(), repeat=2):
            sp = iterated_prolongation(n, w1, w2, strict=False)
            dims[f"{a},{b}"] = [sp.linear_dim, sp.expected_dim]
            if not (sp.comparison_bijective and sp.linear_dim == sp.expected_dim) and bad is None:
                bad = {"W1": describe(w1), "W2": describe(w2), "dims": dims[f"{a},{b}"]}
        details = {"dims": dims}
        if bad:
            details["witness"] = bad
        checks.append(Check(f"iterated prolongation over R^{n}", cite, _status(bad is None), details))
    return checks


def suite_prop_4_6() -> list[Check]:
    cite = CITE["prop-4-6"]
    fam = family()
    checks = []
    for a, w1 in fam.items():
        bad, count = None, 0
        for (b, w2), (c, w3) in product(fam.items(), repeat=2):
            r = check_fibered_assoc(w1, w2, w3)
            count += 1
            if not r["passed"] and bad is None:
                bad = {"W1": describe(w1), "W2": describe(w2), "W3": describe(w3), "report": r}
        details = {"triples": count}
        if bad:
            details["witness"] = bad
        checks.append(Check(f"fibered associativity with W1 = {a}", cite, _status(bad is None), details))
    return checks


def suite_thm_4_7() -> list[Check]:
    cite = CITE["thm-4-7"]
    fam = family()
    names = ["prolong W1", "prolong W2", "fibered associativity", "prolong W1 (x) W2"]
    first_bad: dict[str, dict] = {}
    end_bad = None
    count = 0
    cases = [(1, t) for t in product(fam.items(), repeat=3)]
    cases += [(2, t) for t in product([(k, fam[k]) for k in ("W_D", "W_D(2)")], repeat=3)]
    for n, ((a, w), (b, w1), (c, w2)) in cases:
        r = weil_exponentiability_check(n, w, w1, w2)
        count += 1
        wit = {"n": n, "W": describe(w), "W1": describe(w1), "W2": describe(w2)}
        for st in r["steps"]:
            if not st["ok"]:
                first_bad.setdefault(st["step"], wit)
        if not (r["same_subspace"] and r["dims"][0] == r["dims"][1] == r["expected_dim"]) and end_bad is None:
            end_bad = dict(wit, dims=r["dims"])
    checks = []
    for i, step in enumerate(names, 1):
        bad = first_bad.get(step)
        checks.append(Check(f"step {i}: {step}", cite, _status(bad is None),
                            {"cases": count} if bad is None else {"cases": count, "witness": bad}))
    checks.append(Check("both sides are the same subspace", cite, _status(end_bad is None),
                        {"cases": count} if end_bad is None else {"cases": count, "witness": end_bad}))
    return checks


def suite_lemma_5_7() -> list[Check]:
    cite = CITE["lemma-5-7"]
    checks = []
    for dname, d in stock_diagrams().items():
        dims, bad = {}, None
        for name, w in family().items():
            r = lim_fibered_comparison(w, d)
            dims[name] = r["dims"]
            if not r["comparison_bijective"] and bad is None:
                bad = {"W": describe(w), "diagram": dname, "report": r}
        details = {"dims": dims}
        if bad:
            details["witness"] = bad
        checks.append(Check(f"Lim(W (~) D) = W (~) Lim D for the {dname}", cite, _status(bad is None), details))
    return checks


def suite_thm_5_6() -> list[Check]:
    cite = CITE["thm-5-6"]
    checks = []
    for dname, d in stock_diagrams().items():
        dims, bad = {}, None
        for n in (0, 1, 2):
            for name, w in family().items():
                r = m_microlinearity_check(n, w, d)
                dims[f"{n},{name}"] = r["dims"]
                if not r["comparison_bijective"] and bad is None:
                    bad = {"n": n, "W": describe(w), "diagram": dname, "report": r}
        details = {"dims": dims}
        if bad:
            details["witness"] = bad
        checks.append(Check(f"R^n (x) W -> R^n is microlinear for the {dname}", cite,
                            _status(bad is None), details))
    return checks


def suite_thm_6_6() -> list[Check]:
    cite = CITE["thm-6-6"]
    checks = []
    dims, bad = {}, None
    for n in range(5):
        r = euclidean_check(n)
        dims[str(n)] = r["dims"]
        if not (r["passed"] and r["dims"][0] == 3 * n) and bad is None:
            bad = {"n": n, "report": r}
    checks.append(Check("(R^n (x) W_D) (x)_M W_D = (R^n (x) W_D) x_M (R^n (x) W_D)", cite,
                        _status(bad is None), {"dims": dims} if bad is None else {"dims": dims, "witness": bad}))

    bad = None
    for name, w in family().items():
        for n in (1, 2):
            r = euclidean_check(n, w)
            if not r["passed"] and bad is None:
                bad = {"n": n, "W": describe(w), "report": r}
    checks.append(Check("Euclidean law for every R^n (x) W in the family", cite, _status(bad is None),
                        {} if bad is None else {"witness": bad}))

    bad = _linear_structure_counterexample(random.Random(seed() + 66))
    checks.append(Check("fiberwise linear structure commutes with prolonged linear maps", cite,
                        _status(bad is None), {} if bad is None else {"witness": bad}))
    return checks


def _linear_structure_counterexample(rng: random.Random) -> dict | None:
    """Sum and scaling over a shared base point, against prolonged linear maps and the projection."""
    d = family()["W_D"]
    for n in (1, 2, 3):
        for _ in range(10):
            base = [_rand_q(rng) for _ in range(n)]
            p = _rand_point(rng, d, n, base)
            q = _rand_point(rng, d, n, base)
            lam = _rand_q(rng)
            coeffs = [[_rand_q(rng) for _ in range(n)] for _ in range(n)]
            lin = [Add(tuple(Mul((Const(c), Var(j))) for j, c in enumerate(row))) for row in coeffs]
            big = prolong_map(lin, d)
            s = fiber_add(p, q)
            ok = (s.base == p.base and fiber_scale(lam, p).base == p.base
                  and big(s) == fiber_add(big(p), big(q))
                  and big(fiber_scale(lam, p)) == fiber_scale(lam, big(p)))
            # the same structure seen as a trivial bundle R^n x R^n -> R^n
            fp = fibered_prolong(TrivialBundleModel(n, n), d)
            e1, e2 = fp.point(base, p), fp.point(base, q)
            ok = ok and fp.project(fp.add(e1, e2)) == tuple(base) and fp.contains(fp.scale(lam, e1))
            if not ok:
                return {"n": n, "p": str(p), "q": str(q), "scalar": fstr(lam),
                        "matrix": [[fstr(c) for c in row] for row in coeffs]}
    return None


# -- jets ------------------------------------------------------------------------------

def _rand_q(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 5))


def _rand_point(rng: random.Random, w: WeilAlgebra, n: int, base=None) -> WPoint:
    coords = []
    for i in range(n):
        v = [_rand_q(rng) for _ in range(w.dim)]
        if base is not None:
            v[0] = Fraction(base[i])
        coords.append(w.element(v))
    return WPoint(w, tuple(coords))


def random_polynomial(rng: random.Random, nvars: int, max_degree: int = 4, terms: int = 4) -> Expr:
    """A random polynomial expression with rational coefficients and total degree at most ``max_degree``."""
    out = []
    for _ in range(rng.randint(1, terms)):
        deg = rng.randint(0, max_degree)
        exps = [0] * nvars
        for _ in range(deg):
            exps[rng.randrange(nvars)] += 1
        factors: list[Expr] = [Const(_rand_q(rng))]
        factors += [Pow(Var(i), e) for i, e in enumerate(exps) if e]
        out.append(Mul(tuple(factors)))
    return Add(tuple(out))


def _naturality_homs() -> list[AlgebraHom]:
    f = family()
    r, d, d2, dv, dd = f["R"], f["W_D"], f["W_D2"], f["W_D(2)"], f["W_DxD"]
    return [
        aug_hom(d2), unit_hom(dv),
        hom_from_generator_images(d, d2, ["x^2"]),
        hom_from_generator_images(d2, d, ["x"]),
        hom_from_generator_images(dv, d, ["x", "x"]),
        hom_from_generator_images(dd, dv, ["x", "y"]),
        hom_from_generator_images(d, dd, ["x*y"]),
        hom_from_generator_images(dv, dd, ["x", "x*y"]),
    ]


def _first(cases, pred):
    for c in cases:
        if not pred(c):
            return c
    return None


def _jets_functor_checks(rng: random.Random, cite: str) -> list[Check]:
    fam = family()
    points = 100
    bad = {"identity": None, "composition": None, "pairing": None, "base point": None}
    ident = [Var(0), Var(1)]
    for name, w in fam.items():
        for _ in range(points):
            p = _rand_point(rng, w, 2)
            f = [random_polynomial(rng, 2) for _ in range(2)]
            g = [random_polynomial(rng, 2) for _ in range(2)]
            if bad["identity"] is None and prolong_map(ident, w)(p) != p:
                bad["identity"] = {"W": describe(w), "point": str(p)}
            fg = [substitute(e, g) for e in f]
            lhs = prolong_map(fg, w)(p)
            rhs = prolong_map(f, w)(prolong_map(g, w)(p))
            if bad["composition"] is None and lhs != rhs:
                bad["composition"] = {"W": describe(w), "point": str(p), "f": list(map(str, f)),
                                      "g": list(map(str, g))}
            both = prolong_map([f[0], g[1]], w)(p)
            if bad["pairing"] is None and both.coords != (eval_jet(f[0], p), eval_jet(g[1], p)):
                bad["pairing"] = {"W": describe(w), "point": str(p), "f": str(f[0]), "g": str(g[1])}
            if bad["base point"] is None and eval_jet(f[0], p).aug != evaluate(f[0], p.base):
                bad["base point"] = {"W": describe(w), "point": str(p), "f": str(f[0])}
    labels = {"identity": "prolongation of the identity is the identity",
              "composition": "prolongation preserves composition",
              "pairing": "prolongation preserves pairing",
              "base point": "augmentation of a jet is classical evaluation"}
    per = {"points_per_algebra": points, "algebras": list(fam)}
    return [Check(labels[k], cite, _status(v is None), per if v is None else dict(per, witness=v))
            for k, v in bad.items()]


def _jets_naturality_check(rng: random.Random, cite: str) -> Check:
    bad = None
    homs = _naturality_homs()
    for phi in homs:
        for _ in range(20):
            p = _rand_point(rng, phi.src, 2)
            f = [random_polynomial(rng, 2) for _ in range(2)]
            if prolong_map(f, phi.dst)(p.map_hom(phi)) != prolong_map(f, phi.src)(p).map_hom(phi):
                bad = {"hom": describe_hom(phi), "point": str(p), "f": list(map(str, f))}
                break
        if bad:
            break
    return Check("prolongation is natural in W", cite, _status(bad is None),
                 {"homs": len(homs)} if bad is None else {"homs": len(homs), "witness": bad})


def _jets_truncation_check(rng: random.Random, cite: str) -> Check:
    bad = None
    for k in range(1, 7):
        hi, lo = truncated_algebra(k), truncated_algebra(k - 1)
        cut = hom_from_generator_images(hi, lo, ["x"])
        for _ in range(10):
            f = [random_polynomial(rng, 1, max_degree=6)]
            p = _rand_point(rng, hi, 1)
            if prolong_map(f, hi)(p).map_hom(cut) != prolong_map(f, lo)(p.map_hom(cut)):
                bad = {"k": k, "f": str(f[0]), "point": str(p)}
                break
        if bad:
            break
    return Check("truncating jets commutes with evaluation", cite, _status(bad is None),
                 {"orders": [1, 6]} if bad is None else {"witness": bad})


TAYLOR_CASES = [
    ("exp(u0)", [Fraction(0), Fraction(1, 2), Fraction(-1), Fraction(2)]),
    ("sin(u0)", [Fraction(0), Fraction(1, 3), Fraction(-2), Fraction(3)]),
    ("log(1 + u0)", [Fraction(0), Fraction(1, 2), Fraction(-1, 2), Fraction(4)]),
]


def symbolic_taylor(text: str, x0: Fraction, order: int) -> list[float]:
    """Oracle: Taylor coefficients by symbolic differentiation."""
    import sympy
    u = sympy.Symbol("u0")
    expr = sympy.sympify(text.replace("^", "**"), locals={"u0": u})
    out = []
    for j in range(order + 1):
        out.append(float(sympy.diff(expr, u, j).subs(u, sympy.Rational(x0.numerator, x0.denominator))
                         / sympy.factorial(j)))
    return out


def _close(a: float, b: float, rtol: float, atol: float = 1e-14) -> bool:
    return abs(a - b) <= max(rtol * max(abs(a), abs(b)), atol)


def _jets_taylor_check(cite: str, order: int = 6, rtol: float = 1e-10) -> Check:
    from .expr import parse_expr
    bad, count = None, 0
    for text, bases in TAYLOR_CASES:
        f = parse_expr(text)
        for x0 in bases:
            got = taylor_coefficients(f, x0, order, mode="float")
            want = symbolic_taylor(text, x0, order)
            count += 1
            if not all(_close(g, w, rtol) for g, w in zip(got, want)) and bad is None:
                bad = {"f": text, "x0": fstr(x0), "got": got, "want": want}
    return Check(f"Taylor coefficients to order {order} match symbolic differentiation", cite,
                 _status(bad is None), {"cases": count, "rtol": rtol} if bad is None else
                 {"cases": count, "rtol": rtol, "witness": bad})


FD_CASES = [
    ("exp(u0)", [exp(Var(0))], [-1.0, 0.3, 2.0]),
    ("sin(u0)", [sin(Var(0))], [-2.0, 0.0, 1.1]),
    ("cos(u0)", [cos(Var(0))], [-0.7, 0.5, 3.0]),
    ("log(1 + u0)", [log(1 + Var(0))], [-0.5, 0.0, 4.0]),
    ("sqrt(u0)", [sqrt(Var(0))], [0.25, 2.0, 9.0]),
    ("u0^(3/2)", [Var(0) ** Fraction(3, 2)], [0.5, 1.0, 4.0]),
    ("exp(sin(u0)) * u0^2", [exp(sin(Var(0))) * Var(0) ** 2], [-1.3, 0.4, 2.2]),
]


def _jets_finite_difference_check(cite: str, rtol: float = 1e-6) -> Check:
    d = family()["W_D"]
    bad, count = None, 0
    for text, (f,), xs in FD_CASES:
        for x0 in xs:
            p = WPoint(d, (d.element([x0, 1.0]),))
            slope = eval_jet(f, p, mode="float").coords[1]
            h = 1e-5 * max(1.0, abs(x0))
            fd = (evaluate(f, [x0 + h]) - evaluate(f, [x0 - h])) / (2 * h)
            count += 1
            if not _close(float(slope), float(fd), rtol, atol=1e-9) and bad is None:
                bad = {"f": text, "x0": x0, "jet": slope, "finite_difference": fd}
    return Check("first jet coefficient matches central finite differences", cite, _status(bad is None),
                 {"cases": count, "rtol": rtol} if bad is None else {"cases": count, "witness": bad})


def suite_jets() -> list[Check]:
    cite = CITE["jets"]
    rng = random.Random(seed())
    checks = _jets_functor_checks(rng, cite)
    checks.append(_jets_naturality_check(rng, cite))
    checks.append(_jets_truncation_check(rng, cite))
    checks.append(_jets_taylor_check(cite))
    checks.append(_jets_finite_difference_check(cite))
    return checks


SUITES: dict[str, Callable[[], list[Check]]] = {
    "lemma-3-2": suite_lemma_3_2,
    "prop-3-3": suite_prop_3_3,
    "thm-3-1": suite_thm_3_1,
    "thm-3-4": suite_thm_3_4,
    "prop-4-6": suite_prop_4_6,
    "thm-4-7": suite_thm_4_7,
    "lemma-5-7": suite_lemma_5_7,
    "thm-5-6": suite_thm_5_6,
    "thm-6-6": suite_thm_6_6,
    "jets": suite_jets,
}


def run_suite(name: str) -> SuiteReport:
    if name not in SUITES:
        raise UnknownSuite(name)
    t0 = time.perf_counter()
    try:
        checks = SUITES[name]()
    except Exception as exc:  # a crash is a failed check, not a lost report
        checks = [Check("suite raised", CITE[name], FAIL,
                        {"witness": {"error": type(exc).__name__, "message": str(exc)}})]
    return SuiteReport(name, checks, int(math.ceil((time.perf_counter() - t0) * 1000)))


def run_all() -> list[SuiteReport]:
    return [run_suite(n) for n in SUITES]
