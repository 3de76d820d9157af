import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicjac import CASE1, CASE2, CASE3, QQ, PolyMap, PrimeField
from cubicjac.classifier import (
    classify_rank_le2,
    extract_common_linear_factor,
    pairwise_dependence_rank1,
)
from cubicjac.corpus import REPRESENTATIVES, random_gl
from cubicjac.errors import HypothesisViolation
from cubicjac.gcd import gcd, is_unit
from cubicjac.jacobian import find_dependence, jacobian, jacobian_rank
from cubicjac.normalizer import (
    MODE_GENERAL,
    block_identity,
    essential_variables,
    find_witness,
    normalize_rkform,
)
from cubicjac.polymap import compose_linear, conjugate, transform
from cubicjac.polynomial import Polynomial
from helpers import pmap, poly

F5, F7 = PrimeField(5), PrimeField(7)
CASE3_TEXT = "H1 = x3*x1^2; H2 = x3*x1*x2; H3 = x3*x2^2"


# -- gcd -----------------------------------------------------------------------------------


def _sym(f):
    xs = sympy.symbols(f"x1:{f.nvars + 1}")
    e = sympy.Integer(0)
    for m, c in f.terms.items():
        t = sympy.Rational(int(c.numerator), int(c.denominator))
        for x, k in zip(xs, m):
            t *= x**k
        e += t
    return e, xs


small_polys = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)), st.integers(-3, 3), min_size=1, max_size=3).map(
    lambda d: Polynomial(d, 3, QQ)
)


@settings(max_examples=150, deadline=None)
@given(small_polys, small_polys, small_polys)
def test_gcd_matches_sympy(a, b, c):
    f, g = a * c, b * c
    if not f.terms and not g.terms:
        return
    ours, xs = _sym(gcd(f, g))
    ef, _ = _sym(f)
    eg, _ = _sym(g)
    theirs = sympy.gcd(ef, eg)
    if theirs == 0:
        assert ours == 0
        return
    ratio = sympy.cancel(ours / theirs)
    assert ratio.is_number and ratio != 0


def test_gcd_units():
    assert is_unit(gcd(poly("x1^3", 2), poly("x2^3", 2)))
    assert gcd(poly("x1^2*x2", 2), poly("x2^3", 2)) == poly("x2", 2)


# -- witness and normalization ----------------------------------------------------------------


def test_witness_example():
    H = pmap(CASE3_TEXT)
    w, K = find_witness(H, MODE_GENERAL)
    J = jacobian(H.lift(K)).evaluate(w)
    assert sympy.Matrix([[int(x) for x in r] for r in J]).rank() == 2


def test_witness_zero_map():
    H = pmap("H1 = 0; H2 = 0", nvars=3)
    rep = normalize_rkform(H)
    assert rep.rank == 0 and rep.H_tilde.is_zero()


def test_witness_over_small_field():
    H = pmap("H1 = x3*x1^2 + x2^3; H2 = x3*x1*x2; H3 = 0", F5)
    rep = normalize_rkform(H)
    pt = [F5.one if j == rep.base_point_index else F5.zero for j in range(3)]
    assert jacobian(rep.H_tilde).evaluate(pt) == block_identity(3, 3, rep.rank, rep.field)


def test_normalize_fixed_point():
    H = pmap("H1 = x1*x2^2 + x1^3; H2 = x2*x1^2 + x3^3; H3 = 0")
    rep = normalize_rkform(H)
    assert jacobian(rep.H_tilde).evaluate([1, 0, 0]) == block_identity(3, 3, rep.rank, QQ)


def test_normalize_uses_general_mode_for_cubics():
    rep = normalize_rkform(pmap(CASE3_TEXT))
    assert rep.mode == MODE_GENERAL and rep.base_point_index == 0


def test_normalize_random_rank_two():
    rng = random.Random(21)
    for _ in range(8):
        H = REPRESENTATIVES[rng.choice([CASE2, CASE3])](3 + rng.randint(0, 1), rng)
        H = transform(H, random_gl(H.m, rng), random_gl(H.nvars, rng))
        rep = normalize_rkform(H)
        assert rep.H_tilde == transform(H, rep.S, rep.T)
        pt = [QQ(int(j == rep.base_point_index)) for j in range(H.nvars)]
        assert jacobian(rep.H_tilde).evaluate(pt) == block_identity(H.m, H.nvars, rep.rank, QQ)
        assert transform(rep.H_tilde, rep.S.inverse(), rep.T.inverse()) == H
        assert jacobian_rank(rep.H_tilde) == jacobian_rank(H)


# -- essential variables ---------------------------------------------------------------------


def test_essential_variable_examples():
    ev = essential_variables(pmap("H1 = x1^3; H2 = x1^2*x2; H3 = x2^3", nvars=4))
    assert ev.essential_count == 2
    assert sorted(ev.subspace_basis) == sorted(((0, 0, 0, 1), (0, 0, 1, 0)))
    assert essential_variables(pmap(CASE3_TEXT)).essential_count == 3
    assert essential_variables(pmap("H1 = x1^3 + 3*x1^2*x2 + 3*x1*x2^2 + x2^3")).essential_count == 1


def test_essential_variables_compress():
    rng = random.Random(22)
    H = conjugate(pmap("H1 = x1^3 + x1*x2^2; H2 = x2^3; H3 = 0; H4 = 0"), random_gl(4, rng))
    ev = essential_variables(H)
    assert ev.essential_count == 2
    Hc = compose_linear(H, ev.T)
    assert all(v < 2 for v in Hc.variables())
    for v in ev.subspace_basis:
        for h in H:
            assert not sum((h.diff(j).scale(v[j]) for j in range(4)), Polynomial.zero(4, QQ)).terms


def test_essential_variables_equivariant():
    rng = random.Random(23)
    H = pmap("H1 = x1^3 + x2*x3^2; H2 = x1*x2*x3; H3 = 0; H4 = 0")
    e = essential_variables(H).essential_count
    for _ in range(5):
        assert essential_variables(compose_linear(H, random_gl(4, rng))).essential_count == e


def test_essential_variables_small_characteristic():
    with pytest.raises(HypothesisViolation):
        essential_variables(pmap("H1 = x1^3", PrimeField(3)))


# -- rank one and linear factors --------------------------------------------------------------


def test_pairwise_dependence_examples():
    dec = pairwise_dependence_rank1(pmap("H1 = 2*x1^3; H2 = 3*x1^3; H3 = 0"))
    assert dec.common_form == poly("x1^3", 3) and list(dec.coefficients) == [2, 3, 0]
    dec = pairwise_dependence_rank1(pmap("H1 = 0; H2 = 0", nvars=2))
    assert not dec.common_form.terms and list(dec.coefficients) == [0, 0]
    assert pairwise_dependence_rank1(pmap("H1 = x1^3; H2 = x2^3")) is None


def test_linear_factor_examples():
    H = pmap(CASE3_TEXT)
    assert extract_common_linear_factor(list(H)) == poly("x3", 3)
    assert extract_common_linear_factor([poly("x1^2*x2", 2), poly("x2^3", 2)]) == poly("x2", 2)
    assert extract_common_linear_factor([poly("x1^3", 2), poly("x2^3", 2)]) is None


def test_linear_factor_after_scramble():
    rng = random.Random(24)
    H = conjugate(pmap(CASE3_TEXT), random_gl(3, rng))
    L = extract_common_linear_factor(list(H))
    assert L is not None and L.degree() == 1
    assert all(L.divides(h) for h in H)


# -- classification ---------------------------------------------------------------------------


def _check_report(rep, H):
    assert all(rep.verify(H).values())
    assert transform(rep.H_tilde, rep.S.inverse(), rep.T.inverse()) == H


def test_classify_examples():
    H = pmap(CASE3_TEXT)
    rep = classify_rank_le2(H)
    assert rep.case_tag == CASE3 and rep.T.is_identity()
    _check_report(rep, H)
    H = pmap("H1 = x1^3; H2 = x1^2*x2; H3 = x2^3; H4 = x1*x2^2")
    rep = classify_rank_le2(H)
    assert rep.case_tag == CASE2 and rep.essential_count == 2 and rep.span_dim == 4
    _check_report(rep, H)
    H = pmap("H1 = x1^3; H2 = 2*x1^3; H3 = 3*x1^3")
    rep = classify_rank_le2(H)
    assert rep.case_tag == CASE1 and rep.r == 1
    _check_report(rep, H)


def test_classify_rejections():
    with pytest.raises(HypothesisViolation):
        classify_rank_le2(pmap("H1 = x1^3; H2 = x2^3; H3 = x3^3"))
    with pytest.raises(HypothesisViolation):
        classify_rank_le2(pmap("H1 = x1^2"))
    with pytest.raises(HypothesisViolation):
        classify_rank_le2(pmap("H1 = x1^3; H2 = x2^3", PrimeField(3)))
    with pytest.raises(HypothesisViolation):
        classify_rank_le2(pmap("H1 = x1^3; H2 = x2^3", PrimeField(2)))


def test_classify_overlap_is_reported():
    rep = classify_rank_le2(pmap("H1 = x1^3; H2 = x2^3"))
    assert rep.case_tag == CASE1
    assert set(rep.overlapping_cases) == {CASE1, CASE2}


@pytest.mark.parametrize("tag", [CASE1, CASE2, CASE3])
def test_classify_gl_invariance(tag):
    rng = random.Random(f"gl-{tag}")
    for k in range(6):
        n = 3 + k % 2
        H = REPRESENTATIVES[tag](n, rng)
        base = classify_rank_le2(H).case_tag
        S, T = random_gl(n, rng), random_gl(n, rng)
        H2 = transform(H, S, T)
        rep = classify_rank_le2(H2)
        assert rep.case_tag == base == tag
        _check_report(rep, H2)


def test_classify_over_prime_field():
    rng = random.Random(25)
    H = conjugate(pmap(CASE3_TEXT, F7), random_gl(3, rng, F7))
    rep = classify_rank_le2(H)
    assert rep.case_tag == CASE3
    _check_report(rep, H)


def test_classify_rectangular():
    rng = random.Random(26)
    H = REPRESENTATIVES[CASE3](3, rng)
    H = PolyMap(list(H) + [H[0].scale(2)], 3, QQ)
    H = transform(H, random_gl(4, rng), random_gl(3, rng))
    rep = classify_rank_le2(H)
    assert rep.case_tag == CASE3
    _check_report(rep, H)


def test_classification_consistent_with_dependence():
    rng = random.Random(27)
    for tag in (CASE1, CASE2, CASE3):
        H = conjugate(REPRESENTATIVES[tag](3, rng), random_gl(3, rng))
        rep = classify_rank_le2(H)
        expected = rep.r if tag == CASE1 else 2
        assert jacobian_rank(H) == expected
        if H.m > expected:
            assert find_dependence(H, 6) is not None
