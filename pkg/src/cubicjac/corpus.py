"""Seeded random instance generators.

Every generator takes a ``random.Random`` (or a seed) and nothing else that
varies between runs, so a fixed seed always reproduces the same instances.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .classifier import CASE1, CASE2, CASE3, case3_monomials, span_dimension
from .fields import QQ, Field
from .jacobian import jacobian_rank
from .keller import FORM_I, FORM_II, TRIANGULARIZABLE
from .matrices import LinearMap, PolyMatrix
from .polymap import PolyMap, conjugate, transform
from .polynomial import Polynomial, monomials_of_degree

ENTRY_RANGE = (-9, 9)


def _rng(seed_or_rng) -> random.Random:
    if isinstance(seed_or_rng, random.Random):
        return seed_or_rng
    return random.Random(seed_or_rng)


def random_gl(n: int, rng: random.Random, F: Field = QQ, entries=ENTRY_RANGE) -> LinearMap:
    lo, hi = entries
    while True:
        T = LinearMap(tuple(tuple(F(rng.randint(lo, hi)) for _ in range(n)) for _ in range(n)), F)
        if T.is_invertible():
            return T


def random_form(degree: int, nvars: int, variables, rng: random.Random, F: Field = QQ, terms: int | None = None, coeffs=(-5, 5)) -> Polynomial:
    """A nonzero form of the given degree in the listed variables (0-based), with small integer coefficients."""
    variables = list(variables)
    pool = []
    for m in monomials_of_degree(len(variables), degree):
        e = [0] * nvars
        for v, k in zip(variables, m):
            e[v] = k
        pool.append(tuple(e))
    count = len(pool) if terms is None else min(terms, len(pool))
    while True:
        chosen = rng.sample(pool, count)
        f = Polynomial({m: rng.randint(*coeffs) for m in chosen}, nvars, F)
        if f.terms:
            return f


def _combine(basis, k: int, rng: random.Random, F: Field):
    """k random integer combinations of the given polynomials."""
    n = basis[0].nvars
    out = []
    for _ in range(k):
        acc = Polynomial.zero(n, F)
        for b in basis:
            acc = acc + b.scale(rng.randint(-3, 3))
        out.append(acc)
    return out


# -- classification corpus ---------------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    label: str
    H: PolyMap
    note: str = ""


def case1_representative(n: int, rng: random.Random, F: Field = QQ) -> PolyMap:
    """r nonzero components spanning an r-dimensional space, r in {1, 2}, the rest zero."""
    if rng.random() < 0.5:
        f = random_form(3, n, range(n), rng, F, terms=4)
        g = random_form(3, n, range(n), rng, F, terms=4)
        comps = [f, g]
    else:
        comps = [random_form(3, n, range(n), rng, F, terms=4)]
    comps += [Polynomial.zero(n, F)] * (n - len(comps))
    return PolyMap(comps, n, F)


def case2_representative(n: int, rng: random.Random, F: Field = QQ) -> PolyMap:
    """Components in x1, x2 only, spanning at least three dimensions."""
    basis = [Polynomial.monomial(m + (0,) * (n - 2), 1, F) for m in monomials_of_degree(2, 3)]
    while True:
        comps = _combine(basis, n, rng, F)
        H = PolyMap(comps, n, F)
        if span_dimension([c for c in comps if c.terms]) >= 3:
            return H


def case3_representative(n: int, rng: random.Random, F: Field = QQ) -> PolyMap:
    """Components spanning x3 x1^2, x3 x1 x2, x3 x2^2."""
    basis = case3_monomials(n, F)
    while True:
        comps = _combine(basis, n, rng, F)
        if span_dimension([c for c in comps if c.terms]) == 3:
            return PolyMap(comps, n, F)


REPRESENTATIVES = {CASE1: case1_representative, CASE2: case2_representative, CASE3: case3_representative}


def classification_corpus(seed, per_case: int = 200, sizes=(3, 4)):
    """per_case scrambled instances T^-1 H(T x) of each case, T random in GL_n."""
    rng = _rng(seed)
    out = []
    for tag in (CASE1, CASE2, CASE3):
        for k in range(per_case):
            n = sizes[k % len(sizes)]
            H = REPRESENTATIVES[tag](n, rng)
            T = random_gl(n, rng)
            out.append(Instance(tag, conjugate(H, T)))
    return out


def dependence_corpus(seed, count: int = 100):
    """Cubic maps with three components: rank <= 2 instances of each case plus rank-3 controls.

    The label is the expected rank bound ("rank<=2" or "rank=3"); the
    certified rank is recomputed by the consumer.
    """
    rng = _rng(seed)
    out = []
    tags = (CASE1, CASE2, CASE3, "rank=3")
    for k in range(count):
        tag = tags[k % len(tags)]
        n = 3 + (k // len(tags)) % 2
        if tag == "rank=3":
            comps = [random_form(3, n, range(n), rng, terms=3) for _ in range(3)]
            H = PolyMap(comps, n, QQ)
            label = "rank=3"
        else:
            base = REPRESENTATIVES[tag](n, rng)
            H = PolyMap(list(base)[:3], n, QQ)
            label = "rank<=2"
        S = random_gl(3, rng)
        T = random_gl(n, rng)
        out.append(Instance(label, transform(H, S, T), tag))
    return out


# -- Keller corpus ------------------------------------------------------------------------------


def form_ii_representative(n: int, F: Field = QQ) -> PolyMap:
    x = [Polynomial.var(i, n, F) for i in range(4)]
    w = x[2] * x[0] - x[3] * x[1]
    zero = Polynomial.zero(n, F)
    return PolyMap([x[3] * w, x[2] * w] + [zero] * (n - 2), n, F)


def form_ii_scrambles(seed, count: int, n: int):
    rng = _rng(seed)
    H = form_ii_representative(n)
    return [Instance(FORM_II, conjugate(H, random_gl(n, rng))) for _ in range(count)]


def triangular_representative(n: int, rng: random.Random, F: Field = QQ, linear_in_x2: bool = False) -> PolyMap:
    """(h1, h2, 0, ..., 0) with h2 in K[x3, ...] and h1 in K[x3, ...] (or of degree one in x2)."""
    tail = range(2, n)
    while True:
        h2 = random_form(3, n, tail, rng, F, terms=2)
        h1 = random_form(3, n, tail, rng, F, terms=2)
        if linear_in_x2:
            h1 = h1 + Polynomial.var(1, n, F) * random_form(2, n, tail, rng, F, terms=1)
        H = PolyMap([h1, h2] + [Polynomial.zero(n, F)] * (n - 2), n, F)
        if jacobian_rank(H) == 2:
            return H


def triangular_scrambles(seed, count: int, sizes=(4, 5), deep_every: int = 5, entries=(-3, 3)):
    """Conjugates of strictly triangular maps.

    Every ``deep_every``-th instance in dimension 4 has h1 linear in x2 (an
    inverse of degree 5); the others have inverse x - H.
    """
    rng = _rng(seed)
    out = []
    for k in range(count):
        n = sizes[k % len(sizes)]
        deep = n == 4 and k % deep_every == deep_every - 1
        H = triangular_representative(n, rng, linear_in_x2=deep)
        out.append(Instance(TRIANGULARIZABLE, conjugate(H, random_gl(n, rng, entries=entries))))
    return out


def form_i_scrambles(seed, count: int, sizes=(3, 4)):
    """Conjugates of (h(x2, ..., xn), 0, ..., 0)."""
    rng = _rng(seed)
    out = []
    for k in range(count):
        n = sizes[k % len(sizes)]
        h = random_form(3, n, range(1, n), rng, terms=3)
        H = PolyMap([h] + [Polynomial.zero(n, QQ)] * (n - 1), n, QQ)
        out.append(Instance(FORM_I, conjugate(H, random_gl(n, rng))))
    return out


def rank1_corpus(seed, count: int = 100, sizes=(2, 3, 4)):
    """H = (c_1 f, ..., c_n f) for one cubic form f, scrambled.

    Half the instances are built nilpotent (c supported on x1, f free of
    x1), half generic.
    """
    rng = _rng(seed)
    out = []
    for k in range(count):
        n = sizes[k % len(sizes)]
        nilpotent = k % 2 == 0
        if nilpotent:
            f = random_form(3, n, range(1, n), rng, terms=3)
            c = [1] + [0] * (n - 1)
        else:
            f = random_form(3, n, range(n), rng, terms=3)
            c = [rng.randint(-3, 3) for _ in range(n)]
            if not any(c):
                c[0] = 1
        H = PolyMap([f.scale(ci) for ci in c], n, QQ)
        label = "nilpotent" if nilpotent else "generic"
        out.append(Instance(label, conjugate(H, random_gl(n, rng))))
    return out


@dataclass(frozen=True)
class Nilpotent2x2Sample:
    N: PolyMatrix
    a: Polynomial
    b: Polynomial
    c: Polynomial
    dependent: bool


def nilpotent_2x2_corpus(seed, count: int = 500, nvars: int = 3, max_degree: int = 3):
    """N = c [[a b, -b^2], [a^2, -a b]] with random a, b, c of degree <= max_degree."""
    rng = _rng(seed)
    F = QQ
    out = []
    for k in range(count):
        a = _random_poly(nvars, max_degree, rng, F)
        c = _random_poly(nvars, max_degree, rng, F)
        mode = k % 5
        if mode == 0:
            b = a.scale(rng.randint(-3, 3))
        elif mode == 1 and k % 10 == 1:
            a = Polynomial.zero(nvars, F)
            b = _random_poly(nvars, max_degree, rng, F)
        else:
            b = _random_poly(nvars, max_degree, rng, F)
        N = PolyMatrix([[c * a * b, -(c * b * b)], [c * a * a, -(c * a * b)]], nvars, F)
        out.append(Nilpotent2x2Sample(N, a, b, c, span_dimension([a, b]) <= 1))
    return out


def _random_poly(nvars: int, max_degree: int, rng: random.Random, F: Field) -> Polynomial:
    """A nonzero polynomial with a few terms of degree <= max_degree."""
    pool = [m for d in range(max_degree + 1) for m in monomials_of_degree(nvars, d)]
    while True:
        terms = {m: rng.randint(-4, 4) for m in rng.sample(pool, rng.randint(1, 3))}
        p = Polynomial(terms, nvars, F)
        if p.terms:
            return p


__all__ = [
    "ENTRY_RANGE",
    "Instance",
    "random_gl",
    "random_form",
    "case1_representative",
    "case2_representative",
    "case3_representative",
    "classification_corpus",
    "dependence_corpus",
    "form_ii_representative",
    "form_ii_scrambles",
    "triangular_representative",
    "triangular_scrambles",
    "form_i_scrambles",
    "rank1_corpus",
    "Nilpotent2x2Sample",
    "nilpotent_2x2_corpus",
]
