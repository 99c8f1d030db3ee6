import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ninepoints.algebra import (
    DEGREVLEX,
    LEX,
    Ideal,
    MPoly,
    NoSolvableRootError,
    QuadExt,
    det3,
    format_field,
    groebner,
    minors,
    nullspace,
    parse_field,
    parse_poly,
    rank_exact,
    rank_mod_p,
    roots_in_field,
    spoly,
    univariate_root_field,
)
from ninepoints.algebra.groebner import normal_form
from ninepoints.algebra.poly import PARAM_NAMES

R4 = PARAM_NAMES[:4]


def P(text, ring=R4):
    return parse_poly(text, ring)


def strs(polys):
    return [str(p) for p in polys]


# -- polynomials ------------------------------------------------------------

def test_text_form():
    assert str(P("2*t0 - t1")) == "2*t0 - t1"
    assert str(P("t1/2 - t0")) == "2*t0 - t1"
    assert str(P("t3^2 - 2*t3 + 4")) == "t3^2 - 2*t3 + 4"
    assert str(P("t0*t1^2 + t0^3 + t2")) == "t0^3 + t0*t1^2 + t2"


def test_arithmetic_and_evaluation():
    f = P("t0 + 1")
    g = f * f - P("t0^2")
    assert str(g) == "2*t0 + 1"
    assert g.evaluate({"t0": Fraction(1, 2), "t1": 0, "t2": 0, "t3": 0}) == 2
    assert P("t0*t1").subs({"t0": 3}) == P("3*t1")
    assert P("t0^3*t1").diff("t0") == P("3*t0^2*t1")


def test_det3_examples():
    ring = R4
    one, zero = MPoly.const(ring, 1), MPoly(ring)
    assert det3([[one, zero, zero], [zero, one, zero], [zero, zero, one]]) == one
    t0, t1 = MPoly.var(ring, "t0"), MPoly.var(ring, "t1")
    p1, p3 = [1, 0, 1], [0, 1, 1]
    p5 = [one, t0, t0 + 1]
    assert not det3([p1, p3, p5])
    d = det3([[0, 0, 1], p5, [2 * one, t1, t1 + 1]])
    assert str(d) == "2*t0 - t1"


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=9, max_size=9))
def test_det3_alternating(v):
    m = [v[0:3], v[3:6], v[6:9]]
    assert det3([m[1], m[0], m[2]]) == -det3(m)
    assert det3([m[0], m[0], m[2]]) == 0


# -- Groebner bases ----------------------------------------------------------

def test_groebner_examples():
    assert strs(groebner([P("2*t0 - t1"), P("t1 - 2"), P("t0 + 1")])) == ["1"]
    assert strs(groebner([P("t0")])) == ["t0"]
    assert groebner([]) == []


def test_level_ten_ideal_generators():
    ideal = Ideal([P("t3^2 - 2*t3 + 4"), P("t0 - t3/2 + 1"), P("t1 - t3/2 + 1"), P("t2 - t3/4")], R4)
    assert ideal.contains(P("2*t0 - t3 + 2"))
    assert ideal.contains(P("2*t0*t2 - t0 + 2*t2"))
    assert not Ideal([P("t1")]).contains(P("t0"))
    assert strs(ideal.eliminate(["t0", "t1", "t2"]).groebner()) == ["t3^2 - 2*t3 + 4"]


def _sympy_basis(polys, ring, order):
    syms = sympy.symbols(ring)
    exprs = [sympy.sympify(str(p).replace("^", "**"), locals=dict(zip(ring, syms))) for p in polys]
    gb = sympy.groebner(exprs, *syms, order=order)
    return sorted(str(parse_poly(str(g.as_expr()), ring)) for g in gb.exprs)


def _random_poly(rng, ring, terms=3, deg=2):
    f = MPoly(ring)
    for _ in range(terms):
        mono = [0] * len(ring)
        for _ in range(rng.randint(0, deg)):
            mono[rng.randrange(len(ring))] += 1
        f = f + MPoly(ring, {tuple(mono): rng.randint(-4, 4)})
    return f


@pytest.mark.parametrize("seed", range(25))
def test_groebner_matches_sympy(seed):
    rng = random.Random(seed)
    ring = R4[:3]
    polys = [p for p in (_random_poly(rng, ring) for _ in range(3)) if p]
    if not polys:
        return
    for order, name in ((DEGREVLEX, "grevlex"), (LEX, "lex")):
        ours = sorted(str(g) for g in groebner(polys, order))
        assert ours == _sympy_basis(polys, ring, name)


@pytest.mark.parametrize("seed", range(15))
def test_spolynomials_reduce_to_zero(seed):
    rng = random.Random(100 + seed)
    polys = [p for p in (_random_poly(rng, R4, 3, 3) for _ in range(3)) if p]
    if not polys:
        return
    gb = groebner(polys)
    for f in gb:
        for g in gb:
            if f is not g:
                assert not normal_form(spoly(f, g), gb)
    ideal = Ideal(polys, R4)
    assert all(ideal.contains(p) for p in polys)


def test_saturation():
    ideal = Ideal([P("t0*t1")])
    assert strs(ideal.saturate(P("t0")).groebner()) == ["t1"]
    unit = Ideal([MPoly.const(R4, 1)])
    assert unit.saturate(P("t0 + t1")).is_unit()
    i = Ideal([P("t0^2*t1 - t0*t1"), P("t0*t2")])
    sat = i.saturate(P("t0"))
    assert all(sat.contains(g) for g in i.gens)
    assert sat.saturate(P("t0")).equals(sat)


def test_elimination():
    assert strs(Ideal([P("t0 - t1"), P("t1 - 2")]).eliminate(["t1"]).groebner()) == ["t0 - 2"]
    assert Ideal([MPoly.const(R4, 1)]).eliminate(["t0"]).is_unit()


def test_radical_membership():
    ideal = Ideal([P("t0^2"), P("t1^3 - t1^2")])
    assert ideal.in_radical(P("t0"))
    assert not ideal.contains(P("t0"))
    assert not ideal.in_radical(P("t1"))


def test_dimension():
    assert Ideal([P("t0 - 2*t1")]).dimension() == 3
    assert Ideal([MPoly.const(R4, 1)]).dimension() == -1


def test_groebner_over_quadratic_field():
    w = QuadExt(0, 1, -3)
    ring = ("x", "y")
    f = MPoly(ring, {(1, 0): 1, (0, 1): w})
    g = MPoly(ring, {(0, 2): 1, (0, 0): 3})
    gb = groebner([f, g], LEX)
    assert not normal_form(f, gb) and not normal_form(g, gb)
    assert len(gb) == 2


# -- fields and roots ---------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(st.fractions(max_denominator=20), st.fractions(max_denominator=20),
       st.fractions(max_denominator=20), st.fractions(max_denominator=20),
       st.sampled_from([-3, -1, 2, 5]))
def test_quadratic_field_axioms(a, b, c, e, d):
    x, y = QuadExt(a, b, d), QuadExt(c, e, d)
    assert x * y == y * x
    assert (x + y) * x == x * x + y * x
    if y:
        assert (x / y) * y == x
    assert x * x.conjugate() == x.norm()
    assert parse_field(format_field(x)) == x


def test_univariate_root_field():
    assert univariate_root_field([4, -2, 1]).extensions == [-3]
    assert univariate_root_field([-2, 1]).rational_roots == [2]
    assert univariate_root_field([1, 0, 1]).extensions == [-1]
    with pytest.raises(NoSolvableRootError):
        univariate_root_field([-2, 0, 0, 1])


def test_roots_in_field():
    roots = roots_in_field([4, -2, 1])
    assert all(r.d == -3 for r in roots) and len(roots) == 2
    for r in roots:
        assert r * r - 2 * r + 4 == 0
    assert sorted(roots_in_field([-6, 1, 1])) == [-3, 2]


# -- linear algebra ------------------------------------------------------------

def test_rank_examples():
    assert rank_exact([[0] * 10 for _ in range(9)]) == 0
    assert rank_exact([[int(i == j) for j in range(9)] for i in range(9)]) == 9
    w = QuadExt(0, 1, -1)
    assert rank_exact([[1, w], [w, -1]]) == 1


def test_rank_matches_modular_rank():
    rng = random.Random(7)
    primes = [1000003, 998244353, 2147483647]
    for _ in range(100):
        rows, cols = rng.randint(1, 8), rng.randint(1, 8)
        base = [[rng.randint(-5, 5) for _ in range(cols)] for _ in range(rng.randint(1, rows))]
        m = [[sum(rng.randint(-2, 2) * r[j] for r in base) for j in range(cols)] for _ in range(rows)]
        assert rank_exact(m) == rank_mod_p(m, rng.choice(primes))


def test_nullspace():
    m = [[1, 2, 3], [2, 4, 6]]
    basis = nullspace(m)
    assert len(basis) == 2
    for v in basis:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)


def test_minors():
    ring = R4
    t0 = MPoly.var(ring, "t0")
    m = [[t0 if i == j else MPoly(ring) for j in range(5)] for i in range(4)]
    m[0][4] = MPoly.const(ring, 1)
    assert [str(x) for x in minors(m, 4)] == ["t0^4", "t0^3"]
    zero_row = [[MPoly.const(ring, 1)] * 5 for _ in range(3)] + [[MPoly(ring)] * 5]
    assert minors(zero_row, 4) == []
