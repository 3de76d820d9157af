"""Monomial maps whose Jacobian determinant vanishes only because of the
characteristic, and weighted monomial kernels of diagonal derivations."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb

from .derivations import Derivation
from .errors import HypothesisViolation, ResourceLimitError, StructuralError
from .fields import QQ, Field, PrimeField, is_prime
from .jacobian import integer_det, jacobian
from .polymap import PolyMap
from .polynomial import Polynomial, monomials_of_degree

SEARCH_PRIMES = (2, 3, 5, 7, 11)
DEFAULT_SEARCH_BUDGET = 2_000_000


@dataclass(frozen=True)
class AnomalyRecord:
    name: str
    map: PolyMap
    characteristic: int
    degree_det_Z: int
    homogeneous: bool
    jacobian_det_zero: bool
    homogenization: PolyMap | None = None

    @property
    def criterion_holds(self) -> bool:
        p = self.characteristic
        return self.degree_det_Z != 0 and self.degree_det_Z % p == 0

    @property
    def agree(self) -> bool:
        return self.criterion_holds == self.jacobian_det_zero

    def to_json(self):
        return {
            "name": self.name,
            "map": self.map.to_json(),
            "characteristic": self.characteristic,
            "degree_det_Z": self.degree_det_Z,
            "degree_det_mod_p": self.degree_det_Z % self.characteristic,
            "homogeneous": self.homogeneous,
            "jacobian_det_zero": self.jacobian_det_zero,
            "criterion_holds": self.criterion_holds,
            "agree": self.agree,
            "homogenization": self.homogenization.to_json() if self.homogenization is not None else None,
        }


def monomial_map(rows, F: Field) -> PolyMap:
    """The map whose j-th component is x^rows[j] with coefficient 1."""
    n = len(rows[0])
    return PolyMap([Polynomial._raw({tuple(r): F.one}, n, F) for r in rows], n, F)


def homogenize(H: PolyMap) -> PolyMap:
    """Append a fresh variable z: each term times a power of z up to the top degree, plus z^top."""
    n, F = H.nvars, H.field
    top = H.degree()
    if top == float("-inf"):
        raise StructuralError("cannot homogenize the zero map")
    comps = []
    for h in H:
        comps.append(Polynomial._raw({m + (top - sum(m),): c for m, c in h.terms.items()}, n + 1, F))
    comps.append(Polynomial._raw({(0,) * n + (top,): F.one}, n + 1, F))
    return PolyMap(comps, n + 1, F)


def _exponent_rows(H: PolyMap):
    rows = []
    for j, h in enumerate(H, start=1):
        if len(h.terms) != 1:
            raise StructuralError(f"component {j} is not a single term")
        (m, _), = h.terms.items()
        rows.append(m)
    return rows


def anomaly_record(name: str, rows, p: int, homogenization: PolyMap | None = None) -> AnomalyRecord:
    """Run both checks (degree matrix and Jacobian determinant over F_p) on a monomial map."""
    F = PrimeField(p)
    H = monomial_map(rows, F)
    if H.m != H.nvars:
        raise StructuralError("the degree-matrix criterion needs a square map")
    d = integer_det(rows)
    jac_zero = not jacobian(H).det().terms
    return AnomalyRecord(name, H, p, d, H.is_homogeneous(), jac_zero, homogenization)


def _remark_families():
    return [
        ("(x1^3*x2, x1*x2^2)", [(3, 1), (1, 2)], 5, True),
        ("(x1^2*x2, x1*x3^2, x2*x3)", [(2, 1, 0), (1, 0, 2), (0, 1, 1)], 5, True),
        ("(x1^2*x3^2, x1*x2^3, x2*x3^3)", [(2, 0, 2), (1, 3, 0), (0, 1, 3)], 5, False),
        ("(x4*x1^2, x1*x2^2, x2*x3^2, x3*x4^2)", [(2, 0, 0, 1), (1, 2, 0, 0), (0, 1, 2, 0), (0, 0, 1, 2)], 5, False),
        ("(x3*x1^3, x1*x2^3, x2*x3^3)", [(3, 0, 1), (1, 3, 0), (0, 1, 3)], 7, False),
    ]


def power_family(d: int, p: int):
    """Exponent rows of (x1^d, x1^(d-p) x2^p), for a prime p <= d."""
    if not (is_prime(p) and p <= d):
        raise HypothesisViolation(f"the power family needs a prime p <= d, got d={d}, p={p}")
    return [(d, 0), (d - p, p)]


def verify_remark_examples(power_instances=((3, 3), (5, 5))):
    """Records for the known anomalies, including the homogenizations of the
    two non-homogeneous ones and instances (d, p) of the power family."""
    out = []
    for name, rows, p, needs_hom in _remark_families():
        if needs_hom:
            hom = homogenize(monomial_map(rows, PrimeField(p)))
            rec = anomaly_record(name, rows, p, hom)
            out.append(rec)
            hrows = _exponent_rows(hom)
            out.append(anomaly_record(f"homogenization of {name}", hrows, p))
        else:
            out.append(anomaly_record(name, rows, p))
    for d, p in power_instances:
        rows = power_family(d, p)
        out.append(anomaly_record(_rows_name(rows), rows, p))
    return out


# -- search ---------------------------------------------------------------------------


def canonical_rows(rows):
    """Lexicographically least exponent matrix over all row and column permutations."""
    n = len(rows[0]) if rows else 0
    best = None
    for perm in permutations(range(n)):
        cand = tuple(sorted(tuple(r[j] for j in perm) for r in rows))
        if best is None or cand < best:
            best = cand
    return best


def search_monomial_anomalies(n: int, max_degree: int, p: int, budget: int = DEFAULT_SEARCH_BUDGET, variable_order=None):
    """All square monomial maps (coefficient 1, degrees 1..max_degree) up to
    permutation of variables and components whose degree matrix has a nonzero
    integer determinant divisible by p, each cross-checked by the Jacobian
    determinant over F_p.  ``budget`` caps the number of candidate maps.
    """
    if not 1 <= n <= 4:
        raise HypothesisViolation("the search supports 1 <= n <= 4")
    if not 1 <= max_degree <= 6:
        raise HypothesisViolation("the search supports max_degree in 1..6")
    if p not in SEARCH_PRIMES:
        raise HypothesisViolation(f"the search supports p in {list(SEARCH_PRIMES)}")
    order = tuple(range(n)) if variable_order is None else tuple(variable_order)
    if sorted(order) != list(range(n)):
        raise StructuralError("variable_order must be a permutation of the variables")
    mons = []
    for d in range(1, max_degree + 1):
        for m in monomials_of_degree(n, d):
            mons.append(tuple(m[order[j]] for j in range(n)))
    total = comb(len(mons), n)
    if total > budget:
        raise ResourceLimitError(f"{total} candidate maps exceed the budget of {budget}")
    seen = {}
    for rows in combinations(mons, n):
        d = _small_det(rows)
        if d == 0 or d % p:
            continue
        key = canonical_rows(rows)
        if key not in seen:
            seen[key] = anomaly_record(_rows_name(key), [list(r) for r in key], p)
    return [seen[k] for k in sorted(seen)]


def _small_det(rows):
    if len(rows) == 1:
        return rows[0][0]
    if len(rows) == 2:
        (a, b), (c, d) = rows
        return a * d - b * c
    if len(rows) == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    # Laplace expansion along the first row.
    total = 0
    for j, a in enumerate(rows[0]):
        if a:
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            total += (-a if j % 2 else a) * _small_det(minor)
    return total


def _monomial_text(row) -> str:
    parts = [f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(row) if e]
    return "*".join(parts) if parts else "1"


def _rows_name(rows) -> str:
    return "(" + ", ".join(_monomial_text(r) for r in rows) + ")"


# -- weighted kernels -------------------------------------------------------------------


def weighted_cubic_kernel(weights, field: Field = QQ):
    """Cubic monomials u with sum_i weights[i] * deg_{x_i} u = 0 in the field, highest first."""
    n = len(weights)
    out = []
    for m in monomials_of_degree(n, 3):
        s = field(sum(w * e for w, e in zip(weights, m)))
        if s == 0:
            out.append(Polynomial._raw({m: field.one}, n, field))
    return out


def lemB_derivation(H2: Polynomial, H3: Polynomial) -> Derivation:
    """D(f) = x1 x2 x3 det J(f, H2, H3) / (H2 H3), returned via its values on x1, x2, x3.

    Raises HypothesisViolation when a division is not exact or D is not
    diagonal on monomials.
    """
    n, F = H2.nvars, H2.field
    if n != 3 or H3.nvars != 3:
        raise StructuralError("the determinant derivation is defined in three variables")
    prod = Polynomial.var(0, 3, F) * Polynomial.var(1, 3, F) * Polynomial.var(2, 3, F)
    denom = H2 * H3
    images = []
    for i in range(3):
        xi = Polynomial.var(i, 3, F)
        num = prod * jacobian(PolyMap([xi, H2, H3], 3, F)).det()
        q, r = num.divmod(denom)
        if r.terms:
            raise HypothesisViolation("the determinant formula does not divide exactly for this pair")
        if q.terms and set(q.terms) != {tuple(1 if k == i else 0 for k in range(3))}:
            raise HypothesisViolation("the derivation is not diagonal on monomials")
        images.append(q)
    return Derivation(tuple(images))


__all__ = [
    "AnomalyRecord",
    "anomaly_record",
    "monomial_map",
    "homogenize",
    "power_family",
    "verify_remark_examples",
    "canonical_rows",
    "search_monomial_anomalies",
    "weighted_cubic_kernel",
    "lemB_derivation",
]
