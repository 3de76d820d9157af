"""Sparse exact multivariate polynomials.

A polynomial is a map from exponent tuples to nonzero field elements.
Variables are indexed from 0 internally (``x1`` is index 0).  Instances are
never mutated after construction.

Monomials are ordered graded-lexicographically with x1 > x2 > ... > xn; that
order fixes term iteration, leading terms and the printed form.
"""

from __future__ import annotations

from math import lcm
from operator import add

from gmpy2 import mpq

from .errors import StructuralError
from .fields import QQ, Field

NEG_INF = float("-inf")

_SLOT_BITS = 24
_SLOT_LIMIT = 1 << _SLOT_BITS
_SLOT_MASK = _SLOT_LIMIT - 1


def _pack(exps) -> int:
    k = 0
    for e in reversed(exps):
        k = (k << _SLOT_BITS) | e
    return k


def _integer_items(terms: dict):
    """(d, [(packed monomial, d * c)]) with d the lcm of the denominators."""
    d = 1
    for c in terms.values():
        den = c.denominator
        if den != 1:
            d = lcm(d, den)
    return d, [(_pack(m), int(c.numerator) * (d // int(c.denominator))) for m, c in terms.items()]


def _unpack(k: int, n: int):
    out = []
    for _ in range(n):
        out.append(k & _SLOT_MASK)
        k >>= _SLOT_BITS
    return tuple(out)


def grlex_key(exps):
    return (sum(exps), exps)


def monomials_of_degree(nvars: int, degree: int):
    """All exponent tuples of the given total degree, highest in grlex first."""
    if nvars == 0:
        return [()] if degree == 0 else []
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(prefix + (left,))
            return
        for e in range(left, -1, -1):
            rec(prefix + (e,), left - e, slots - 1)

    rec((), degree, nvars)
    return out


class Polynomial:
    __slots__ = ("terms", "nvars", "field")

    def __init__(self, terms=None, nvars: int = 0, field: Field = QQ):
        self.nvars = nvars
        self.field = field
        clean = {}
        if terms:
            for mono, c in terms.items():
                mono = tuple(mono)
                if len(mono) != nvars:
                    raise StructuralError(f"monomial {mono} does not have {nvars} exponents")
                if any(e < 0 for e in mono):
                    raise StructuralError(f"negative exponent in {mono}")
                c = field(c)
                if c != 0:
                    clean[mono] = c
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict, nvars: int, field: Field) -> "Polynomial":
        """Build from a dict already holding reduced, nonzero coefficients."""
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.nvars = nvars
        obj.field = field
        return obj

    @classmethod
    def _from_raw_sums(cls, acc: dict, nvars: int, field: Field) -> "Polynomial":
        red = field.reduce
        terms = {}
        for m, c in acc.items():
            c = red(c)
            if c != 0:
                terms[m] = c
        return cls._raw(terms, nvars, field)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, field: Field = QQ) -> "Polynomial":
        return cls._raw({}, nvars, field)

    @classmethod
    def constant(cls, c, nvars: int, field: Field = QQ) -> "Polynomial":
        c = field(c)
        return cls._raw({(0,) * nvars: c} if c != 0 else {}, nvars, field)

    @classmethod
    def one(cls, nvars: int, field: Field = QQ) -> "Polynomial":
        return cls.constant(1, nvars, field)

    @classmethod
    def var(cls, i: int, nvars: int, field: Field = QQ) -> "Polynomial":
        if not 0 <= i < nvars:
            raise StructuralError(f"variable index {i + 1} out of range 1..{nvars}")
        mono = tuple(1 if j == i else 0 for j in range(nvars))
        return cls._raw({mono: field(1)}, nvars, field)

    @classmethod
    def monomial(cls, exps, coeff=1, field: Field = QQ) -> "Polynomial":
        exps = tuple(exps)
        return cls({exps: coeff}, len(exps), field)

    @classmethod
    def linear_form(cls, coeffs, field: Field = QQ) -> "Polynomial":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            terms[tuple(1 if j == i else 0 for j in range(n))] = c
        return cls(terms, n, field)

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        return self.terms.get((0,) * self.nvars, self.field.zero)

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), self.field.zero)

    def degree(self):
        """Total degree; the zero polynomial has degree ``-inf``."""
        if not self.terms:
            return NEG_INF
        return max(sum(m) for m in self.terms)

    def degree_in(self, i: int):
        if not self.terms:
            return NEG_INF
        return max(m[i] for m in self.terms)

    def homogeneous_degree(self):
        """The common degree of all terms, or None if mixed; None for zero."""
        degs = {sum(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self, d: int | None = None) -> bool:
        if not self.terms:
            return True
        hd = self.homogeneous_degree()
        return hd is not None and (d is None or hd == d)

    def variables(self) -> list[int]:
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return sorted(used)

    def sorted_terms(self):
        """(monomial, coefficient) pairs, highest first in graded lex order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise StructuralError("zero polynomial has no leading term")
        m = max(self.terms, key=grlex_key)
        return m, self.terms[m]

    def leading_coefficient(self):
        return self.leading_term()[1] if self.terms else self.field.zero

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if other.nvars != self.nvars:
            raise StructuralError(f"variable counts differ: {self.nvars} vs {other.nvars}")
        if other.field != self.field:
            raise StructuralError(f"fields differ: {self.field} vs {other.field}")

    def _lift_scalar(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(other, self.nvars, self.field)

    def __add__(self, other):
        other = self._lift_scalar(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc[m] + c if m in acc else c
        return Polynomial._from_raw_sums(acc, self.nvars, self.field)

    __radd__ = __add__

    def __neg__(self):
        red = self.field.reduce
        return Polynomial._raw({m: red(-c) for m, c in self.terms.items()}, self.nvars, self.field)

    def __sub__(self, other):
        other = self._lift_scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return self._lift_scalar(other) - self

    def scale(self, c) -> "Polynomial":
        c = self.field(c)
        if c == 0:
            return Polynomial.zero(self.nvars, self.field)
        red = self.field.reduce
        return Polynomial._raw({m: red(v * c) for m, v in self.terms.items()}, self.nvars, self.field)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        if not self.terms or not other.terms:
            return Polynomial.zero(self.nvars, self.field)
        n = self.nvars
        top = max(sum(m) for m in self.terms) + max(sum(m) for m in other.terms)
        if top >= _SLOT_LIMIT:
            acc: dict = {}
            get = acc.get
            b_items = list(other.terms.items())
            for m1, c1 in self.terms.items():
                for m2, c2 in b_items:
                    m = tuple(map(add, m1, m2))
                    acc[m] = get(m, 0) + c1 * c2
            return Polynomial._from_raw_sums(acc, n, self.field)
        # Exponent vectors packed into one integer: adding keys adds exponents.
        # Over Q the denominators are cleared first so the loop runs on integers.
        rational = self.field.characteristic == 0 and self.field.size is None
        if rational:
            da, a_items = _integer_items(self.terms)
            db, b_items = _integer_items(other.terms)
        else:
            a_items = [(_pack(m), c) for m, c in self.terms.items()]
            b_items = [(_pack(m), c) for m, c in other.terms.items()]
        acc = {}
        get = acc.get
        for k1, c1 in a_items:
            for k2, c2 in b_items:
                k = k1 + k2
                acc[k] = get(k, 0) + c1 * c2
        terms = {}
        if rational:
            den = da * db
            for k, c in acc.items():
                if c:
                    terms[_unpack(k, n)] = mpq(c, den)
        else:
            red = self.field.reduce
            for k, c in acc.items():
                c = red(c)
                if c != 0:
                    terms[_unpack(k, n)] = c
        return Polynomial._raw(terms, n, self.field)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        if e < 0:
            raise StructuralError("negative power of a polynomial")
        result = Polynomial.one(self.nvars, self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.field == other.field and self.terms == other.terms
        try:
            return self == Polynomial.constant(other, self.nvars, self.field)
        except (TypeError, ValueError, ZeroDivisionError):
            return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- calculus and evaluation -------------------------------------------

    def diff(self, i: int) -> "Polynomial":
        """Formal partial derivative with respect to variable index ``i`` (0-based)."""
        if not 0 <= i < self.nvars:
            raise StructuralError(f"variable index {i + 1} out of range 1..{self.nvars}")
        acc = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                acc[m[:i] + (e - 1,) + m[i + 1:]] = c * e
        return Polynomial._from_raw_sums(acc, self.nvars, self.field)

    def evaluate(self, point):
        if len(point) != self.nvars:
            raise StructuralError(f"point has {len(point)} coordinates, expected {self.nvars}")
        F = self.field
        pt = [F(v) for v in point]
        total = F.zero
        for m, c in self.terms.items():
            term = c
            for v, e in zip(pt, m):
                if e:
                    term = term * v**e
            total = total + term
        return F.reduce(total)

    def substitute(self, assignments: dict, nvars: int | None = None) -> "Polynomial":
        """Replace variable ``i`` by ``assignments[i]``; other variables stay put.

        The result lives in the variable context of the assigned polynomials
        (which may be larger than this polynomial's own context).
        """
        if nvars is None:
            nvars = self.nvars
            for p in assignments.values():
                nvars = p.nvars
                break
        images = []
        for i in range(self.nvars):
            img = assignments.get(i)
            if img is None:
                if i >= nvars:
                    raise StructuralError(f"x{i + 1} is unassigned and outside the target context")
                img = Polynomial.var(i, nvars, self.field)
            else:
                if img.nvars != nvars:
                    raise StructuralError("substituted polynomials must share a variable context")
                if img.field != self.field:
                    raise StructuralError("substituted polynomial over a different field")
            images.append(img)
        return _evaluate_at_polys(self, images, nvars)

    def extend(self, nvars: int, offset: int = 0) -> "Polynomial":
        """Embed into a context with ``nvars`` variables, shifting indices by ``offset``."""
        if offset + self.nvars > nvars:
            raise StructuralError("target context too small")
        pre = (0,) * offset
        post = (0,) * (nvars - offset - self.nvars)
        return Polynomial._raw({pre + m + post: c for m, c in self.terms.items()}, nvars, self.field)

    def restrict(self, nvars: int) -> "Polynomial":
        """Drop trailing variables that do not occur."""
        for m in self.terms:
            if any(m[nvars:]):
                raise StructuralError("cannot drop a variable that occurs")
        return Polynomial._raw({m[:nvars]: c for m, c in self.terms.items()}, nvars, self.field)

    def lift(self, field: Field) -> "Polynomial":
        """Coerce the coefficients into another field (e.g. F_p into F_{p^k})."""
        if field == self.field:
            return self
        return Polynomial({m: field(c) for m, c in self.terms.items()}, self.nvars, field)

    def truncate(self, max_degree, ignore=()) -> "Polynomial":
        """Keep terms whose degree, not counting the ``ignore`` variables, is <= max_degree."""
        keep = {}
        for m, c in self.terms.items():
            d = sum(e for i, e in enumerate(m) if i not in ignore)
            if d <= max_degree:
                keep[m] = c
        return Polynomial._raw(keep, self.nvars, self.field)

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.field.inv(self.leading_coefficient()))

    # -- division -----------------------------------------------------------

    def divmod(self, divisor: "Polynomial"):
        """Multivariate division by a single polynomial in graded lex order."""
        self._check(divisor)
        if not divisor.terms:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        red = F.reduce
        lm, lc = divisor.leading_term()
        lc_inv = F.inv(lc)
        div_items = list(divisor.terms.items())
        rem = dict(self.terms)
        quot = {}
        out_rem = {}
        while rem:
            m = max(rem, key=grlex_key)
            c = rem.pop(m)
            shift = tuple(a - b for a, b in zip(m, lm))
            if min(shift) < 0:
                out_rem[m] = c
                continue
            q = red(c * lc_inv)
            quot[shift] = q
            for dm, dc in div_items:
                if dm == lm:
                    continue
                mm = tuple(map(add, dm, shift))
                v = red(rem.get(mm, 0) - q * dc)
                if v != 0:
                    rem[mm] = v
                else:
                    rem.pop(mm, None)
        return (Polynomial._raw(quot, self.nvars, F), Polynomial._raw(out_rem, self.nvars, F))

    def exact_div(self, divisor: "Polynomial") -> "Polynomial":
        q, r = self.divmod(divisor)
        if r.terms:
            raise StructuralError("division is not exact")
        return q

    def divides(self, other: "Polynomial") -> bool:
        if not self.terms:
            return not other.terms
        return not other.divmod(self)[1].terms

    def coefficients_in(self, i: int) -> dict:
        """View as a univariate polynomial in variable ``i``: {degree: coefficient polynomial}."""
        out: dict = {}
        for m, c in self.terms.items():
            e = m[i]
            out.setdefault(e, {})[m[:i] + (0,) + m[i + 1:]] = c
        return {e: Polynomial._raw(t, self.nvars, self.field) for e, t in out.items()}

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial._raw({m: c for m, c in self.terms.items() if sum(m) == d}, self.nvars, self.field)

    # -- display ------------------------------------------------------------

    def to_text(self) -> str:
        from .textio import format_polynomial

        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({self.to_text()!r}, nvars={self.nvars}, field={self.field})"

    def __str__(self):
        return self.to_text()


def _evaluate_at_polys(f: Polynomial, images: list, nvars: int) -> Polynomial:
    """f(images[0], ..., images[n-1]) with cached powers."""
    F = f.field
    if not f.terms:
        return Polynomial.zero(nvars, F)
    powers: list[dict] = [dict() for _ in images]

    def power(i, e):
        cache = powers[i]
        if e not in cache:
            if e == 1:
                cache[e] = images[i]
            else:
                half = power(i, e // 2)
                sq = half * half
                cache[e] = sq * images[i] if e % 2 else sq
        return cache[e]

    acc: dict = {}
    for m, c in f.terms.items():
        term = None
        for i, e in enumerate(m):
            if e:
                p = power(i, e)
                term = p if term is None else term * p
        if term is None:
            key = (0,) * nvars
            acc[key] = acc.get(key, 0) + c
            continue
        for tm, tc in term.terms.items():
            acc[tm] = acc.get(tm, 0) + c * tc
    return Polynomial._from_raw_sums(acc, nvars, F)


def evaluate_many(polys, images: list, nvars: int, field: Field):
    """[f(images) for f in polys] sharing the image of every monomial."""
    one = (0,) * len(images)
    cache = {one: Polynomial.one(nvars, field)}

    def image(m):
        val = cache.get(m)
        if val is None:
            i = max(k for k, e in enumerate(m) if e)
            val = image(m[:i] + (m[i] - 1,) + m[i + 1:]) * images[i]
            cache[m] = val
        return val

    out = []
    for f in polys:
        acc: dict = {}
        get = acc.get
        for m, c in sorted(f.terms.items(), key=lambda t: sum(t[0])):
            for tm, tc in image(m).terms.items():
                acc[tm] = get(tm, 0) + c * tc
        out.append(Polynomial._from_raw_sums(acc, nvars, field))
    return out
