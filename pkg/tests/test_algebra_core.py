import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicjac import QQ, LinearMap, PolyMap, PrimeField, compose_maps
from cubicjac.errors import ParseError, StructuralError
from cubicjac.fields import ExtensionField, field_from_spec
from cubicjac.matrices import det, inverse, matmul, nullspace, rank
from cubicjac.polymap import compose_linear, conjugate, transform
from cubicjac.polynomial import NEG_INF, Polynomial, monomials_of_degree
from cubicjac.textio import format_map, format_polynomial, parse_map
from helpers import pmap, poly

F5 = PrimeField(5)
FIELDS = [QQ, F5, PrimeField(7)]


def polynomials(n=3, F=QQ, max_terms=5, max_exp=3):
    coeff = st.integers(-6, 6)
    mono = st.tuples(*[st.integers(0, max_exp)] * n)
    return st.dictionaries(mono, coeff, max_size=max_terms).map(lambda d: Polynomial(d, n, F))


def to_sympy(f: Polynomial):
    xs = sympy.symbols(f"x1:{f.nvars + 1}")
    expr = sympy.Integer(0)
    for m, c in f.terms.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for x, e in zip(xs, m):
            term *= x**e
        expr += term
    return sympy.expand(expr), xs


# -- fields ----------------------------------------------------------------------------


@pytest.mark.parametrize("F", FIELDS + [ExtensionField(5, 2)], ids=str)
def test_field_inverses(F):
    rng = random.Random(0)
    for _ in range(50):
        a = F(rng.randint(1, 40)) if F.characteristic == 0 else rng.choice(list(F.elements())[1:])
        assert F.reduce(a + F.reduce(-a)) == F.zero
        assert F.reduce(a * F.inv(a)) == F.one


def test_field_specs():
    assert field_from_spec("Q") is QQ
    assert field_from_spec("F5") == F5
    assert F5.characteristic == 5 and QQ.characteristic == 0
    with pytest.raises(ParseError):
        field_from_spec("F6")
    with pytest.raises(ParseError):
        field_from_spec("R")


def test_rational_parse():
    assert QQ("2/3") * 3 == 2
    assert F5("1/2") == 3


# -- polynomial arithmetic ---------------------------------------------------------------


def test_difference_of_squares():
    a, b = poly("x1 + x2", 2), poly("x1 - x2", 2)
    assert a * b == poly("x1^2 - x2^2", 2)


def test_zero_absorbs():
    a = poly("x1^2 + 3*x2", 2)
    assert not (a * Polynomial.zero(2)).terms


def test_characteristic_kills_coefficient():
    f = poly("x1^3*x2", 2, F5)
    assert not (f * Polynomial.constant(5, 2, F5)).terms
    assert not f.scale(F5(5)).terms


def test_zero_polynomial_conventions():
    z = Polynomial.zero(3)
    assert z.terms == {} and z.degree() == NEG_INF
    assert Polynomial({(1, 0, 0): 0}, 3).terms == {}
    assert poly("x1^2*x2 + x3^3", 3).is_homogeneous(3)
    assert not poly("x1^2 + x3^3", 3).is_homogeneous()


def test_mismatched_contexts_raise():
    with pytest.raises(StructuralError):
        poly("x1", 2) + poly("x1", 3)
    with pytest.raises(StructuralError):
        poly("x1", 2) * poly("x1", 2, F5)


def test_partial_derivatives():
    f = poly("x1^2*x2", 3)
    assert f.diff(0) == poly("2*x1*x2", 3)
    assert not f.diff(2).terms
    assert not poly("x1^5", 1, F5).diff(0).terms
    with pytest.raises(StructuralError):
        f.diff(3)


def test_evaluate():
    assert poly("x1^2*x2", 2).evaluate([2, 3]) == 12
    assert poly("x1^3 + x1*x2^2", 2).evaluate([0, 0]) == 0
    assert poly("x1^3*x2", 2, F5).evaluate([1, 1]) == 1


def test_substitute():
    f = poly("x1^2*x2", 3)
    assert f.substitute({1: poly("x1*x3", 3)}) == poly("x1^3*x3", 3)
    assert f.substitute({}) == f
    doubled = f.extend(6, offset=3)
    assert doubled == poly("x4^2*x5", 6)


def test_monomial_order_is_grlex():
    f = poly("x2^3 + x1*x2 + x1^3 + x3 + x1^2*x2", 3)
    order = [m for m, _ in f.sorted_terms()]
    assert order == [(3, 0, 0), (2, 1, 0), (0, 3, 0), (1, 1, 0), (0, 0, 1)]
    assert len(monomials_of_degree(3, 3)) == 10


@settings(max_examples=300, deadline=None)
@given(polynomials(), polynomials(), polynomials())
def test_ring_axioms_over_Q(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert (a - a).is_zero()


@settings(max_examples=300, deadline=None)
@given(polynomials(F=F5), polynomials(F=F5), polynomials(F=F5))
def test_ring_axioms_over_F5(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - b) + b == a


def test_ring_axioms_randomized_thousand():
    rng = random.Random(42)
    for F in (QQ, F5):
        for _ in range(1000):
            a, b, c = (Polynomial({tuple(rng.randint(0, 2) for _ in range(3)): rng.randint(-4, 4) for _ in range(3)}, 3, F) for _ in range(3))
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c


@settings(max_examples=200, deadline=None)
@given(polynomials(), polynomials())
def test_product_matches_sympy(a, b):
    ea, xs = to_sympy(a)
    eb, _ = to_sympy(b)
    assert to_sympy(a * b)[0] == sympy.expand(ea * eb)


@settings(max_examples=200, deadline=None)
@given(polynomials(n=4), st.integers(0, 3), st.integers(0, 3))
def test_mixed_partials_commute(f, i, j):
    assert f.diff(i).diff(j) == f.diff(j).diff(i)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.randoms(use_true_random=False))
def test_euler_identity(d, rnd):
    for F in (QQ, F5):
        f = Polynomial({m: rnd.randint(-3, 3) for m in monomials_of_degree(3, d)}, 3, F)
        euler = Polynomial.zero(3, F)
        for i in range(3):
            euler = euler + Polynomial.var(i, 3, F) * f.diff(i)
        assert euler == f.scale(F(d))


def test_divmod_and_exact_division():
    f = poly("x1^3 - x2^3", 2)
    g = poly("x1 - x2", 2)
    q, r = f.divmod(g)
    assert not r.terms and q * g == f
    assert f.exact_div(g) == poly("x1^2 + x1*x2 + x2^2", 2)


# -- text format ------------------------------------------------------------------------


def test_parse_case3_representative():
    H = parse_map("field: Q\nH1 = 1*x3*x1^2\nH2 = 1*x3*x1^1*x2^1\nH3 = 1*x3*x2^2")
    assert H.nvars == 3 and H.m == 3
    assert H[1] == Polynomial.monomial((1, 1, 1))


def test_parse_zero_map():
    H = parse_map("H1 = 0")
    assert H.is_zero() and H.m == 1


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse_map("H1 = x1^")
    assert exc.value.line == 1
    assert exc.value.column is not None


def test_parse_errors():
    for bad in ("H1 = x1 +", "H1 = 2 x1", "H2 = x1", "field: F6\nH1 = x1", "H1 = x1 ? x2", "nvars: 1\nH1 = x2"):
        with pytest.raises(ParseError):
            parse_map(bad)
    with pytest.raises(ParseError):
        parse_map("field: F5\nH1 = x1", QQ)


def test_parse_fields_and_fractions():
    H = parse_map("field: F7\nH1 = 3/2*x1^2")
    assert H.field == PrimeField(7) and H[0].coefficient((2,)) == 5
    assert parse_map("H1 = -2/3*x1*x2 + x2")[0].coefficient((1, 1)) == QQ("-2/3")


@settings(max_examples=200, deadline=None)
@given(st.lists(polynomials(n=3), min_size=1, max_size=4))
def test_print_parse_round_trip(comps):
    H = PolyMap(comps, 3, QQ)
    text = format_map(H)
    assert parse_map(text) == H
    assert format_map(parse_map(text)) == text


@settings(max_examples=100, deadline=None)
@given(st.lists(polynomials(n=2, F=F5), min_size=1, max_size=3))
def test_print_parse_round_trip_mod_p(comps):
    H = PolyMap(comps, 2, F5)
    assert parse_map(format_map(H)) == H


def test_format_polynomial_signs():
    assert format_polynomial(poly("x1^2 - 2*x2", 2)) == "1*x1^2 - 2*x2"
    assert format_polynomial(Polynomial.zero(2)) == "0"


# -- scalar matrices --------------------------------------------------------------------


def test_scalar_linear_algebra_against_sympy():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(1, 4)
        A = [[QQ(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        S = sympy.Matrix([[int(x) for x in row] for row in A])
        assert det(A, QQ) == S.det()
        assert rank(A, QQ) == S.rank()
        for v in nullspace(A, QQ, n):
            assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in A)
        if S.det() != 0:
            inv = inverse(A, QQ)
            assert matmul(A, inv, QQ) == [[QQ(int(i == j)) for j in range(n)] for i in range(n)]


def test_linear_map_inverse():
    T = LinearMap(((1, 2), (3, 4)), QQ)
    assert (T @ T.inverse()).is_identity()
    assert T.is_invertible() and not LinearMap(((1, 2), (2, 4)), QQ).is_invertible()


# -- maps ---------------------------------------------------------------------------------


def test_compose_with_identity():
    H = pmap("H1 = x1^2*x2 + x3; H2 = x2^3; H3 = x1")
    X = PolyMap.identity(3, QQ)
    assert compose_maps(H, X) == H and compose_maps(X, H) == H


def test_exceptional_map_inverse_composition():
    H = pmap("H1 = x1*x3*x4 - x2*x4^2; H2 = x1*x3^2 - x2*x3*x4; H3 = 0; H4 = 0")
    X = PolyMap.identity(4, QQ)
    assert compose_maps(X + H, X - H) == X


def test_composition_degree_bound():
    F = pmap("H1 = x1^2 + x2; H2 = x1*x2")
    G = pmap("H1 = x2^3; H2 = x1 + x2^2")
    assert compose_maps(F, G).degree() <= F.degree() * G.degree()


def test_compose_linear_examples():
    H = pmap("H1 = x1^2*x2", nvars=2)
    assert compose_linear(H, LinearMap.identity(2, QQ)) == H
    swap = LinearMap(((0, 1), (1, 0)), QQ)
    assert compose_linear(H, swap) == pmap("H1 = x2^2*x1", nvars=2)
    P = pmap("H1 = x1*x2; H2 = x2^2")
    S = LinearMap(((7, 0), (0, 1)), QQ)
    assert compose_linear(P, S, "left") == pmap("H1 = 7*x1*x2; H2 = x2^2")
    with pytest.raises(StructuralError):
        compose_linear(H, LinearMap.identity(3, QQ))


def _random_gl(rng, n):
    while True:
        T = LinearMap(tuple(tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n)), QQ)
        if T.is_invertible():
            return T


def test_compose_linear_is_an_action():
    rng = random.Random(5)
    H = pmap("H1 = x1^2*x2 - x3^3; H2 = x2*x3^2; H3 = x1*x2*x3")
    for _ in range(10):
        T1, T2 = _random_gl(rng, 3), _random_gl(rng, 3)
        assert compose_linear(compose_linear(H, T1), T2) == compose_linear(H, T1 @ T2)


def test_conjugate_round_trip():
    rng = random.Random(6)
    H = pmap("H1 = x1^2*x2 - x3^3; H2 = x2*x3^2; H3 = 0")
    T = _random_gl(rng, 3)
    assert conjugate(conjugate(H, T), T.inverse()) == H
    S = _random_gl(rng, 3)
    assert transform(transform(H, S, T), S.inverse(), T.inverse()) == H
