import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicjac import FORM_I, FORM_II, QQ, TRIANGULARIZABLE, PolyMap, PrimeField, compose_maps
from cubicjac.corpus import form_ii_representative, random_gl, triangular_representative
from cubicjac.derivations import Derivation, derivation_apply, exp_derivation
from cubicjac.errors import HypothesisViolation, NonPolynomialInverse, ResourceLimitError
from cubicjac.gcd import gcd, is_unit
from cubicjac.jacobian import is_nilpotent, jacobian, jacobian_rank
from cubicjac.keller import (
    CASE2_CONSTANT,
    CASE3_CHAR3,
    TRIANGULAR,
    factor_nilpotent_2x2,
    invert_keller,
    is_keller,
    keller_normal_form,
    normalize_nilpotent_2x2_cubic,
)
from cubicjac.matrices import PolyMatrix
from cubicjac.polymap import conjugate
from cubicjac.polynomial import Polynomial
from helpers import pmap, poly

F3, F5 = PrimeField(3), PrimeField(5)
EXCEPTIONAL = "H1 = x1*x3*x4 - x2*x4^2; H2 = x1*x3^2 - x2*x3*x4; H3 = 0; H4 = 0"


def _F(H):
    return PolyMap.identity(H.nvars, H.field) + H


def _x(n, F=QQ):
    return PolyMap.identity(n, F)


# -- Keller test ---------------------------------------------------------------------------


def test_is_keller_examples():
    assert is_keller(_F(pmap("H1 = x2^3; H2 = 0")))
    assert not is_keller(_F(pmap("H1 = x1^3; H2 = 0")))
    assert is_keller(_F(pmap(EXCEPTIONAL)))


def test_is_keller_non_homogeneous():
    assert is_keller(_F(pmap("H1 = x2^3 + x2^2; H2 = 0")))
    assert not is_keller(_F(pmap("H1 = x1^2 + x2^3; H2 = 0")))


# -- 2x2 nilpotent blocks -------------------------------------------------------------------


def _block(a, b, c):
    return PolyMatrix([[c * a * b, -(c * b * b)], [c * a * a, -(c * a * b)]], a.nvars, a.field)


def test_factor_examples():
    N = PolyMatrix([[poly("x1*x2", 2), poly("-x2^2", 2)], [poly("x1^2", 2), poly("-x1*x2", 2)]])
    fac = factor_nilpotent_2x2(N)
    assert (fac.a, fac.b, fac.c) == (poly("x1", 2), poly("x2", 2), poly("1", 2))
    assert not fac.triangularizable
    zero = Polynomial.zero(2, QQ)
    fac = factor_nilpotent_2x2(PolyMatrix([[zero, zero], [zero, zero]]))
    assert not (fac.a.terms or fac.b.terms or fac.c.terms) and fac.triangularizable


def test_factor_first_column_zero():
    zero = Polynomial.zero(3, QQ)
    N = PolyMatrix([[zero, poly("-x3^2", 3)], [zero, zero]])
    fac = factor_nilpotent_2x2(N)
    assert fac.a == zero and fac.b == poly("x3", 3) and fac.c == poly("1", 3)
    assert fac.triangularizable and fac.rebuild() == N


def test_factor_rejects_non_nilpotent():
    N = PolyMatrix([[poly("x1", 2), poly("0", 2)], [poly("0", 2), poly("x2", 2)]])
    with pytest.raises(HypothesisViolation):
        factor_nilpotent_2x2(N)


coeffs = st.integers(-3, 3)
small = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 1)), coeffs, min_size=1, max_size=3).map(lambda d: Polynomial(d, 3, QQ))


@settings(max_examples=200, deadline=None)
@given(small, small, small)
def test_factor_round_trip(a, b, c):
    N = _block(a, b, c)
    fac = factor_nilpotent_2x2(N)
    assert fac.rebuild() == N
    if N.is_zero():
        return
    # a and b share no factor of positive degree unless a = 0
    if fac.a.terms:
        assert is_unit(gcd(fac.a, fac.b)) or not fac.b.terms
        assert fac.a.leading_coefficient() == 1


def test_normalize_block_exceptional():
    res = normalize_nilpotent_2x2_cubic(pmap(EXCEPTIONAL))
    assert res.outcome == CASE2_CONSTANT
    assert res.a == poly("x3", 4) and res.b == poly("x4", 4)


def test_normalize_block_dependent():
    H = pmap("H1 = x2*x3^2; H2 = x3^3; H3 = 0")
    assert normalize_nilpotent_2x2_cubic(H).outcome == TRIANGULAR
    rng = random.Random(31)
    T = random_gl(2, rng).block_diag(random_gl(1, rng))
    H2 = conjugate(pmap("H1 = x2*x3^2 + x2^3; H2 = 0; H3 = 0"), T)
    res = normalize_nilpotent_2x2_cubic(H2)
    assert res.outcome == TRIANGULAR


def test_normalize_block_characteristic_three():
    H = pmap("H1 = 2*x1^2*x2; H2 = x1*x2^2", F3)
    assert normalize_nilpotent_2x2_cubic(H).outcome == CASE3_CHAR3


# -- normal forms ------------------------------------------------------------------------------


def test_normal_form_examples():
    nf = keller_normal_form(pmap("H1 = x2^3; H2 = 0; H3 = 0"))
    assert nf.variant == FORM_I and nf.T.is_identity()
    H = pmap(EXCEPTIONAL)
    nf = keller_normal_form(H)
    assert nf.variant == FORM_II and nf.T.is_identity() and nf.residual.is_zero()


def test_normal_form_scrambles():
    rng = random.Random(32)
    for n in (4, 5):
        H = form_ii_representative(n)
        for _ in range(3):
            Hs = conjugate(H, random_gl(n, rng))
            nf = keller_normal_form(Hs)
            assert nf.variant == FORM_II and all(nf.verify(Hs).values())
            ok, k = is_nilpotent(jacobian(nf.H_tilde))
            assert ok and k <= 3 and jacobian_rank(nf.H_tilde) == 2
    for n in (4, 5):
        H = triangular_representative(n, rng)
        Hs = conjugate(H, random_gl(n, rng))
        nf = keller_normal_form(Hs)
        assert nf.variant == TRIANGULARIZABLE and all(nf.verify(Hs).values())


def test_normal_form_with_residual():
    H = pmap("H1 = x1*x3*x4 - x2*x4^2 + x5^3; H2 = x1*x3^2 - x2*x3*x4 + x3*x4*x5; H3 = 0; H4 = 0; H5 = 0")
    rng = random.Random(33)
    Hs = conjugate(H, random_gl(5, rng))
    nf = keller_normal_form(Hs)
    assert nf.variant == FORM_II and not nf.residual.is_zero()


def test_normal_form_preconditions():
    with pytest.raises(HypothesisViolation):
        keller_normal_form(pmap("H1 = x1^3; H2 = 0"))
    with pytest.raises(HypothesisViolation):
        keller_normal_form(pmap("H1 = x2^3; H2 = 0", F3))
    with pytest.raises(HypothesisViolation):
        keller_normal_form(pmap("H1 = x2^2; H2 = 0"))
    with pytest.raises(HypothesisViolation):
        keller_normal_form(pmap("H1 = x2^3 + x3^3; H2 = x3^3 + x4^3; H3 = x4^3; H4 = 0"))


# -- derivations -----------------------------------------------------------------------------


def _D(texts, n, F=QQ):
    return Derivation(tuple(poly(t, n, F) for t in texts))


def test_derivation_examples():
    D = _D(["x4", "x3", "0", "0"], 4)
    assert not derivation_apply(D, poly("x3*x1 - x4*x2", 4)).terms
    W = _D(["x1", "-2*x2", "4*x3"], 3)
    assert not W(poly("x1^2*x2", 3)).terms
    assert not W(poly("7", 3)).terms


@settings(max_examples=100, deadline=None)
@given(small, small)
def test_leibniz_rule(f, g):
    D = _D(["x2*x3", "x3^2", "1"], 3)
    assert D(f * g) == D(f) * g + f * D(g)


def test_exp_example():
    D = _D(["x4", "x3", "0", "0"], 4)
    w = poly("x3*x1 - x4*x2", 4)
    E = exp_derivation(D, w)
    assert E == pmap("H1 = x1 + x1*x3*x4 - x2*x4^2; H2 = x2 + x1*x3^2 - x2*x3*x4; H3 = x3; H4 = x4")
    assert E == _x(4) + pmap(EXCEPTIONAL)
    assert exp_derivation(D, Polynomial.zero(4, QQ)) == _x(4)
    inverse = exp_derivation(D, -w)
    assert compose_maps(E, inverse) == _x(4) and compose_maps(inverse, E) == _x(4)
    assert w.substitute(dict(enumerate(E.components)), 4) == w


def test_exp_needs_kernel_element():
    D = _D(["x4", "x3", "0", "0"], 4)
    with pytest.raises(HypothesisViolation):
        exp_derivation(D, poly("x1", 4))


def test_exp_characteristic_limit():
    D = _D(["x2^2", "1"], 2, F3)
    with pytest.raises(HypothesisViolation):
        exp_derivation(D)
    with pytest.raises(ResourceLimitError):
        exp_derivation(_D(["x2^2", "1"], 2), bound=2)


def test_exp_triangular_inverse_law():
    D = _D(["x2^2 + x3", "x3^3", "1"], 3)
    assert D.triangular and D.is_locally_nilpotent()
    E = exp_derivation(D)
    assert compose_maps(E, exp_derivation(_D(["-x2^2 - x3", "-x3^3", "-1"], 3))) == _x(3)


def test_linear_triangular_bound():
    rng = random.Random(34)
    for n in range(2, 6):
        images = []
        for i in range(n):
            lin = Polynomial.zero(n, QQ)
            for j in range(i + 1, n):
                lin = lin + Polynomial.var(j, n, QQ).scale(rng.randint(-3, 3))
            images.append(lin)
        D = Derivation(tuple(images))
        assert D.triangular
        assert D.is_locally_nilpotent(bound=n + 1)


def test_nonlinear_triangular_needs_more_than_n_plus_one():
    D = _D(["x2^2", "1"], 2)
    assert D.triangular
    assert D.nilpotency_orders() == [4, 2]
    assert not D.is_locally_nilpotent(bound=3)


def test_non_triangular_flag():
    assert not _D(["x1", "0"], 2).triangular
    assert not _D(["x2", "x1"], 2).triangular


# -- inversion --------------------------------------------------------------------------------


def test_invert_examples():
    F = _F(pmap("H1 = x2^3; H2 = 0"))
    assert invert_keller(F).G == pmap("H1 = x1 - x2^3; H2 = x2")
    H = pmap(EXCEPTIONAL)
    assert invert_keller(_F(H)).G == _x(4) - H


def test_invert_scrambled_triangular():
    rng = random.Random(35)
    for deep in (False, True):
        H = conjugate(triangular_representative(4, rng, linear_in_x2=deep), random_gl(4, rng, entries=(-2, 2)))
        F = _F(H)
        G = invert_keller(F).G
        assert compose_maps(F, G) == _x(4) and compose_maps(G, F) == _x(4)


def test_invert_parametric():
    # F = x + t H with t the trailing inert variable x5
    H = pmap(EXCEPTIONAL)
    t = Polynomial.var(4, 5, QQ)
    comps = [Polynomial.var(i, 5, QQ) + t * h.extend(5) for i, h in enumerate(H)]
    F = PolyMap(comps, 5, QQ)
    res = invert_keller(F, params=1)
    G = res.G
    assert G == PolyMap([Polynomial.var(i, 5, QQ) - t * h.extend(5) for i, h in enumerate(H)], 5, QQ)
    X5 = _x(5)
    assert compose_maps(F.with_identity_tail(5), G.with_identity_tail(5)) == X5


def test_invert_rejects_non_keller():
    with pytest.raises(HypothesisViolation):
        invert_keller(_F(pmap("H1 = x1^3; H2 = 0")))


def test_invert_bound_too_small():
    rng = random.Random(36)
    H = conjugate(triangular_representative(4, rng, linear_in_x2=True), random_gl(4, rng, entries=(-2, 2)))
    with pytest.raises(NonPolynomialInverse):
        invert_keller(_F(H), degree_bound=2)


def test_invert_over_prime_field():
    H = pmap(EXCEPTIONAL, F5)
    F = _F(H)
    assert invert_keller(F).G == _x(4, F5) - H
