"""Exact coefficient fields: the rationals, prime fields and their small extensions.

Field elements are plain Python values so that polynomial code can use the
ordinary arithmetic operators:

* ``Rationals``       -> ``gmpy2.mpq``
* ``PrimeField(p)``   -> ``int`` in ``range(p)`` (raw results are folded back by ``reduce``)
* ``ExtensionField``  -> ``GFElement`` (self-reducing)

Every field exposes ``reduce`` which turns the raw result of ``+ - *`` on
elements into a canonical element, plus ``inv``/``div`` for division.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction

import gmpy2
from gmpy2 import mpq

from .errors import ParseError, StructuralError


def is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n))


class Field:
    characteristic: int = 0
    size: int | None = None
    name: str = "?"

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    @property
    def is_finite(self) -> bool:
        return self.size is not None

    def reduce(self, x):
        return x

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.reduce(a * self.inv(b))

    def elements(self):
        raise StructuralError(f"{self.name} is infinite")

    def format(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        text = text.strip()
        m = re.fullmatch(r"([+-]?\d+)(?:/(\d+))?", text)
        if not m:
            raise ParseError(f"bad coefficient {text!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ParseError("zero denominator")
        return self.div(self(num), self(den))

    def __repr__(self):
        return self.name


class Rationals(Field):
    characteristic = 0
    size = None
    name = "Q"

    def __call__(self, value):
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, Fraction):
            return mpq(value.numerator, value.denominator)
        return mpq(value)

    def reduce(self, x):
        return x if type(x) is type(_MPQ_ZERO) else mpq(x)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / mpq(a)

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return mpq(a) / b

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")


_MPQ_ZERO = mpq(0)


class PrimeField(Field):
    def __init__(self, p: int):
        if not is_prime(p):
            raise StructuralError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.size = p
        self.name = f"F{p}"

    def __call__(self, value):
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (Fraction, type(_MPQ_ZERO))):
            num, den = int(value.numerator), int(value.denominator)
            if den % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return num * pow(den, -1, self.p) % self.p
        return int(value) % self.p

    def reduce(self, x):
        return x % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def elements(self):
        return range(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))


def _poly_mod_p(coeffs, modulus, p):
    """Reduce a coefficient list (low degree first) modulo a monic polynomial."""
    coeffs = list(coeffs)
    k = len(modulus) - 1
    for i in range(len(coeffs) - 1, k - 1, -1):
        c = coeffs[i] % p
        if c:
            for j in range(k + 1):
                coeffs[i - k + j] = (coeffs[i - k + j] - c * modulus[j]) % p
    out = [c % p for c in coeffs[:k]]
    out += [0] * (k - len(out))
    return tuple(out)


def _is_irreducible(modulus, p):
    """Brute-force irreducibility test for small degree: no monic factor of degree <= k/2."""
    k = len(modulus) - 1
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(tail) + [1]
            rem = _poly_mod_p(modulus, divisor, p)
            if not any(rem):
                return False
    return True


class GFElement:
    __slots__ = ("c", "field")

    def __init__(self, coeffs, field: "ExtensionField"):
        self.c = coeffs
        self.field = field

    def _coerce(self, other):
        if isinstance(other, GFElement):
            return other
        return self.field(other)

    def __add__(self, other):
        o = self._coerce(other)
        p = self.field.p
        return GFElement(tuple((a + b) % p for a, b in zip(self.c, o.c)), self.field)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return GFElement(tuple(-a % p for a in self.c), self.field)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            p = self.field.p
            return GFElement(tuple(a * other % p for a in self.c), self.field)
        o = self._coerce(other)
        k = self.field.k
        prod = [0] * (2 * k - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    prod[i + j] += a * b
        return GFElement(_poly_mod_p(prod, self.field.modulus, self.field.p), self.field)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = self.field.one
        base = self
        if e < 0:
            base = self.field.inv(self)
            e = -e
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, GFElement):
            return self.c == other.c
        if isinstance(other, int):
            return self.c == self.field(other).c
        return NotImplemented

    def __hash__(self):
        if not any(self.c[1:]):
            return hash(self.c[0])
        return hash(self.c)

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        return self.field.format(self)


class ExtensionField(Field):
    """F_{p^k} = F_p[g]/(m(g)) with m the first monic irreducible polynomial in lexicographic order."""

    def __init__(self, p: int, k: int):
        if not is_prime(p):
            raise StructuralError(f"{p} is not prime")
        if k < 1:
            raise StructuralError("extension degree must be positive")
        self.p = p
        self.k = k
        self.characteristic = p
        self.size = p**k
        self.name = f"F{p}^{k}" if k > 1 else f"F{p}"
        self.modulus = self._find_modulus()

    def _find_modulus(self):
        p, k = self.p, self.k
        if k == 1:
            return (0, 1)
        for tail in itertools.product(range(p), repeat=k):
            modulus = tuple(reversed(tail)) + (1,)
            if modulus[0] and _is_irreducible(modulus, p):
                return modulus
        raise StructuralError("no irreducible polynomial found")  # unreachable

    def __call__(self, value):
        if isinstance(value, GFElement):
            if value.field != self:
                raise StructuralError("element of a different extension field")
            return value
        if isinstance(value, str):
            return self.parse(value)
        base = PrimeField(self.p)(value)
        return GFElement((base,) + (0,) * (self.k - 1), self)

    def generator(self):
        return GFElement((0, 1) + (0,) * (self.k - 2), self) if self.k > 1 else self(0)

    def inv(self, a):
        a = self(a)
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return a ** (self.size - 2)

    def elements(self):
        for coeffs in itertools.product(range(self.p), repeat=self.k):
            yield GFElement(tuple(reversed(coeffs)), self)

    def format(self, a) -> str:
        a = self(a)
        if not any(a.c[1:]):
            return str(a.c[0])
        return "[" + ",".join(str(c) for c in a.c) + "]"

    def __eq__(self, other):
        return isinstance(other, ExtensionField) and (other.p, other.k) == (self.p, self.k)

    def __hash__(self):
        return hash(("F", self.p, self.k))


QQ = Rationals()


def field_from_spec(spec: str) -> Field:
    """``"Q"`` -> rationals, ``"F5"`` -> prime field of order 5, ``"F5^2"`` -> extension."""
    text = spec.strip().replace(" ", "")
    if text in ("Q", "QQ"):
        return QQ
    m = re.fullmatch(r"F_?(\d+)(?:\^(\d+))?", text)
    if not m:
        raise ParseError(f"unknown field {spec!r} (expected Q or F<p>)")
    p = int(m.group(1))
    if not is_prime(p):
        raise ParseError(f"field order {p} is not prime")
    if m.group(2) and int(m.group(2)) > 1:
        return ExtensionField(p, int(m.group(2)))
    return PrimeField(p)


def extension_of(field: Field, k: int) -> Field:
    """The degree-k extension of a prime field (identity for k == 1)."""
    if field.characteristic == 0:
        raise StructuralError("Q is not extended")
    p = field.characteristic
    return PrimeField(p) if k == 1 else ExtensionField(p, k)
