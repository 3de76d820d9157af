"""Multivariate GCD, square parts and linear factors over a field.

The GCD works recursively: view both inputs as univariate in their first
occurring variable with coefficients in the remaining ones, split off the
contents (a GCD one level down), and run a primitive pseudo-remainder
sequence on the primitive parts.  Results are normalized monic in graded lex.
"""

from __future__ import annotations

from functools import reduce

from .errors import StructuralError
from .polynomial import Polynomial


def _main_variable(*polys):
    found = [v for p in polys for v in p.variables()]
    return min(found) if found else None


def content(f: Polynomial, v: int) -> Polynomial:
    """GCD of the coefficients of f viewed as a polynomial in variable v."""
    return reduce(gcd, f.coefficients_in(v).values(), Polynomial.zero(f.nvars, f.field))


def _lead_in(f: Polynomial, v: int):
    coeffs = f.coefficients_in(v)
    d = max(coeffs)
    return d, coeffs[d]


def pseudo_remainder(a: Polynomial, b: Polynomial, v: int) -> Polynomial:
    db, lb = _lead_in(b, v)
    xv = Polynomial.var(v, a.nvars, a.field)
    r = a
    while r.terms:
        dr = r.degree_in(v)
        if dr < db:
            break
        lr = r.coefficients_in(v)[dr]
        r = r * lb - lr * b * xv ** (dr - db)
    return r


def gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    f._check(g)
    if not f.terms:
        return g.monic()
    if not g.terms:
        return f.monic()
    v = _main_variable(f, g)
    if v is None:
        return Polynomial.one(f.nvars, f.field)
    if f.degree_in(v) == 0:
        return gcd(f, content(g, v))
    if g.degree_in(v) == 0:
        return gcd(content(f, v), g)
    cf, cg = content(f, v), content(g, v)
    c = gcd(cf, cg)
    a, b = f.exact_div(cf), g.exact_div(cg)
    if a.degree_in(v) < b.degree_in(v):
        a, b = b, a
    while True:
        r = pseudo_remainder(a, b, v)
        if not r.terms:
            break
        if r.degree_in(v) == 0:
            b = Polynomial.one(f.nvars, f.field)
            break
        a, b = b, r.exact_div(content(r, v))
    if b.degree_in(v) > 0:
        b = b.exact_div(content(b, v))
    return (c * b).monic()


def gcd_many(polys) -> Polynomial:
    polys = list(polys)
    if not polys:
        raise StructuralError("gcd of an empty list")
    return reduce(gcd, polys[1:], polys[0].monic())


def is_unit(f: Polynomial) -> bool:
    return bool(f.terms) and f.is_constant()


def radical(f: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors (char 0, or no p-th power factors)."""
    if f.is_constant():
        return Polynomial.one(f.nvars, f.field)
    g = f
    for i in f.variables():
        g = gcd(g, f.diff(i))
    return f.exact_div(g).monic()


def square_part(f: Polynomial) -> Polynomial:
    """The largest monic b with b^2 dividing f (computed from the radical layers of f)."""
    b = Polynomial.one(f.nvars, f.field)
    rest = f
    k = 1
    while not rest.is_constant():
        if all(not rest.diff(i).terms for i in rest.variables()):
            break
        layer = radical(rest)
        if k % 2 == 0:
            b = b * layer
        rest = rest.exact_div(layer)
        k += 1
    return b.monic()


def _univariate_roots(coeffs, field, limit=None):
    """Roots in the field of sum coeffs[i] t^i (coefficients low degree first)."""
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    if not coeffs:
        return None
    if len(coeffs) == 1:
        return []
    if field.is_finite:
        out = []
        for t in field.elements():
            acc = field.zero
            for c in reversed(coeffs):
                acc = field.reduce(acc * t + c)
            if acc == 0:
                out.append(t)
        return out
    return _rational_roots(coeffs)


def _divisors(n: int):
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _rational_roots(coeffs):
    from math import lcm

    from gmpy2 import mpq

    den = lcm(*(int(mpq(c).denominator) for c in coeffs))
    ints = [int(mpq(c) * den) for c in coeffs]
    roots = []
    while ints and ints[0] == 0:
        roots.append(mpq(0))
        ints = ints[1:]
    if len(ints) <= 1:
        return roots
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            for cand in (mpq(p, q), mpq(-p, q)):
                val = mpq(0)
                for c in reversed(ints):
                    val = val * cand + c
                if val == 0 and cand not in roots:
                    roots.append(cand)
    return roots


def find_linear_factor(g: Polynomial):
    """A monic linear form dividing g, or None.

    For each choice of the first variable k of the factor, write
    L = x_k + sum a_j x_j over the later variables of g.  L divides g exactly
    when g vanishes on L = 0, so each a_j is a root of g restricted to the line
    x_k = -(a_j + already fixed part), x_j = 1; candidates are confirmed by
    exact trial division.
    """
    if g.degree() in (0, float("-inf")):
        return None
    if g.degree() == 1 and g.is_homogeneous(1):
        return g.monic()
    vs = g.variables()
    n, F = g.nvars, g.field
    xs = [Polynomial.var(i, n, F) for i in range(n)]
    for pos, k in enumerate(vs):
        later = vs[pos + 1:]
        candidates = [dict()]
        for j in later:
            nxt = []
            for fixed in candidates:
                for r in _line_roots(g, k, j, fixed):
                    d = dict(fixed)
                    d[j] = r
                    nxt.append(d)
            candidates = nxt
        for cand in candidates:
            L = xs[k]
            for j, a in cand.items():
                if a != 0:
                    L = L + xs[j].scale(a)
            if L.divides(g):
                return L.monic()
    return None


def _line_roots(g: Polynomial, k: int, j: int, fixed: dict):
    """Values a with g = 0 on x_j = 1, x_i = s (i in fixed), x_k = -(a + sum fixed_i s), rest 0.

    Tries s = 0 first (the plane of x_k and x_j alone), then s = 1, 2, ...
    while the restriction vanishes identically; falls back to a = 0.
    """
    F = g.field
    a = Polynomial.var(0, 1, F)
    for s in range(0, 4):
        assign = {}
        shift = F.zero
        for i in range(g.nvars):
            if i == j:
                assign[i] = Polynomial.one(1, F)
            elif i in fixed:
                assign[i] = Polynomial.constant(s, 1, F)
                shift = F.reduce(shift + fixed[i] * s)
            elif i != k:
                assign[i] = Polynomial.zero(1, F)
        assign[k] = -(a + shift)
        h = g.substitute(assign, 1)
        if h.terms:
            coeffs = [h.coefficient((e,)) for e in range(h.degree() + 1)]
            return _univariate_roots(coeffs, F)
        if not fixed:
            break
    return [F.zero]
