"""Jacobian matrices, rank over the rational function field, nilpotency and
algebraic dependence among the components of a map."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .errors import StructuralError
from .fields import QQ
from .matrices import PolyMatrix, bareiss_eliminate, det as scalar_det
from .polymap import PolyMap
from .polynomial import Polynomial, grlex_key, monomials_of_degree


def jacobian(H: PolyMap, variables=None) -> PolyMatrix:
    """Entry (i, j) is the derivative of H_i by the j-th listed variable (all by default)."""
    cols = range(H.nvars) if variables is None else list(variables)
    return PolyMatrix([[h.diff(j) for j in cols] for h in H], H.nvars, H.field)


@dataclass(frozen=True)
class RankCertificate:
    rank: int
    minor_rows: tuple
    minor_cols: tuple
    minor_value: Polynomial

    def to_json(self):
        return {
            "rank": self.rank,
            "minor_rows": [i + 1 for i in self.minor_rows],
            "minor_cols": [j + 1 for j in self.minor_cols],
            "minor_value": self.minor_value.to_text(),
        }


def rank_over_function_field(M: PolyMatrix) -> RankCertificate:
    """Rank of M over K(x) with a nonzero maximal minor as witness."""
    r, rows, cols, _, _ = bareiss_eliminate(M)
    mr = tuple(sorted(rows[:r]))
    mc = tuple(sorted(cols[:r]))
    if r == 0:
        value = Polynomial.one(M.nvars, M.field)
    else:
        value = M.submatrix(mr, mc).det()
    if not value.terms:
        raise StructuralError("rank witness minor vanished on recomputation")
    return RankCertificate(r, mr, mc, value)


def jacobian_rank(H: PolyMap) -> int:
    return rank_over_function_field(jacobian(H)).rank


def matrix_power_sequence(M: PolyMatrix, k: int):
    P = M
    yield 1, P
    for e in range(2, k + 1):
        P = P @ M
        yield e, P


def is_nilpotent(M: PolyMatrix):
    """(nilpotent, k) where k is the least power with M^k = 0 (None if not nilpotent).

    Powers are taken one at a time so the index is exact; for an n x n
    matrix M^n = 0 decides nilpotency.
    """
    if not M.is_square():
        raise StructuralError("nilpotency needs a square matrix")
    n = M.shape[0]
    if n == 0 or M.is_zero():
        return True, (1 if n else 0)
    if M.trace().terms:
        return False, None
    for e, P in matrix_power_sequence(M, n):
        if P.is_zero():
            return True, e
    return False, None


# -- algebraic dependence --------------------------------------------------------


@dataclass(frozen=True)
class DependenceRelation:
    """relation(t_1, ..., t_m) vanishes when t_i is replaced by H_i."""

    relation: Polynomial
    degree_bound_used: int

    def to_json(self):
        text = self.relation.to_text().replace("x", "t")
        return {"relation": text, "degree": self.degree_bound_used}


def _t_monomials(m: int, degree: int):
    """Exponent tuples of the given degree in ascending grlex."""
    return list(reversed(monomials_of_degree(m, degree)))


class _PowerCache:
    def __init__(self, H: PolyMap):
        self.H = H
        self.cache = {(0,) * H.m: Polynomial.one(H.nvars, H.field)}

    def get(self, alpha):
        if alpha in self.cache:
            return self.cache[alpha]
        i = max(k for k, e in enumerate(alpha) if e)
        lower = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
        val = self.get(lower) * self.H[i]
        self.cache[alpha] = val
        return val


def find_dependence(H: PolyMap, degree_cap: int = 6):
    """Smallest relation among the components, searched degree by degree.

    Monomials in t are added in ascending graded lex order; the first one whose
    image H^alpha lies in the span of the earlier images yields the relation,
    scaled so that this monomial has coefficient 1.  When all components are
    homogeneous of one degree only the single layer of each degree is searched,
    since every homogeneous part of a relation is again a relation.
    Returns None when nothing is found up to ``degree_cap`` (inconclusive).
    """
    if degree_cap < 1:
        raise StructuralError("degree cap must be at least 1")
    m, F = H.m, H.field
    if m == 0:
        return None
    for i, h in enumerate(H):
        if not h.terms:
            alpha = tuple(1 if k == i else 0 for k in range(m))
            return DependenceRelation(Polynomial({alpha: 1}, m, F), 1)
    degs = {h.homogeneous_degree() for h in H}
    layered = len(degs) == 1 and None not in degs
    powers = _PowerCache(H)
    red = F.reduce
    basis = {}  # pivot monomial in x -> (vector, combination over t-monomials)
    for D in range(1, degree_cap + 1):
        if layered:
            basis = {}
            mons = _t_monomials(m, D)
        else:
            mons = _t_monomials(m, D)
            if D == 1:
                mons = [(0,) * m] + mons
        for alpha in mons:
            vec = dict(powers.get(alpha).terms)
            combo = {alpha: F.one}
            while vec:
                piv = max(vec, key=grlex_key)
                if piv not in basis:
                    break
                bvec, bcombo = basis[piv]
                f = vec[piv]
                for k, v in bvec.items():
                    nv = red(vec.get(k, 0) - f * v)
                    if nv != 0:
                        vec[k] = nv
                    else:
                        vec.pop(k, None)
                for k, v in bcombo.items():
                    nv = red(combo.get(k, 0) - f * v)
                    if nv != 0:
                        combo[k] = nv
                    else:
                        combo.pop(k, None)
            if not vec:
                return DependenceRelation(Polynomial(combo, m, F), D)
            piv = max(vec, key=grlex_key)
            inv = F.inv(vec[piv])
            basis[piv] = ({k: red(v * inv) for k, v in vec.items()}, {k: red(v * inv) for k, v in combo.items()})
    return None


def check_relation(H: PolyMap, rel: DependenceRelation) -> bool:
    if not rel.relation.terms:
        return False
    return not rel.relation.substitute(dict(enumerate(H.components)), H.nvars).terms


# -- degree matrix ---------------------------------------------------------------


@dataclass(frozen=True)
class DegreeMatrixReport:
    matrix: tuple
    det_over_Z: int
    det_mod_p: int | None
    anomalous: bool

    def to_json(self):
        return {
            "matrix": [list(r) for r in self.matrix],
            "det_over_Z": self.det_over_Z,
            "det_mod_p": self.det_mod_p,
            "anomalous": self.anomalous,
        }


def exponent_matrix(H: PolyMap):
    """Row j holds the exponents of the single monomial H_j (coefficient 1 required)."""
    rows = []
    for j, h in enumerate(H, start=1):
        if len(h.terms) != 1:
            raise StructuralError(f"component {j} is not a single term")
        (mono, c), = h.terms.items()
        if c != 1:
            raise StructuralError(f"component {j} has coefficient {h.field.format(c)}, expected 1")
        rows.append(tuple(mono))
    return tuple(rows)


def integer_det(A) -> int:
    n = len(A)
    if n == 0:
        return 1
    d = scalar_det([list(r) for r in A], QQ)
    return int(d)


def degree_matrix_criterion(H: PolyMap, characteristic: int | None = None) -> DegreeMatrixReport:
    """Entry (j, i) is the exponent of x_i in H_j; anomalous when det != 0 over Z but = 0 in K."""
    A = exponent_matrix(H)
    if H.m != H.nvars:
        raise StructuralError(f"degree matrix is {H.m}x{H.nvars}, not square")
    p = H.field.characteristic if characteristic is None else characteristic
    d = integer_det(A)
    mod = d % p if p else None
    in_K_zero = (d == 0) if not p else (d % p == 0)
    return DegreeMatrixReport(A, d, mod, d != 0 and in_K_zero)


# -- substitution gadget -----------------------------------------------------------


def detdep_reduce(H: PolyMap, s: int) -> PolyMap:
    """H(x_1, ..., x_s, x_1 x_{s+1}, ..., x_1 x_n)."""
    n = H.nvars
    if not 1 <= s <= n:
        raise StructuralError(f"s must lie in 1..{n}")
    x1 = Polynomial.var(0, n, H.field)
    assign = {j: x1 * Polynomial.var(j, n, H.field) for j in range(s, n)}
    if not assign:
        return H
    return PolyMap([h.substitute(assign, n) for h in H], n, H.field)


# -- rank one equivalences ---------------------------------------------------------


@dataclass(frozen=True)
class Trdeg1Report:
    rank: int
    pair_relations_found: bool
    hypothesis_met: bool
    detJF_is_1: bool
    JH_nilpotent: bool
    split_product_zero: bool
    all_equivalent: bool
    diagnostic: str | None = None
    notes: tuple = dc_field(default=())

    def to_json(self):
        return {
            "rank": self.rank,
            "pair_relations_found": self.pair_relations_found,
            "hypothesis_met": self.hypothesis_met,
            "detJF_is_1": self.detJF_is_1,
            "JH_nilpotent": self.JH_nilpotent,
            "split_product_zero": self.split_product_zero,
            "all_equivalent": self.all_equivalent,
            "diagnostic": self.diagnostic,
            "notes": list(self.notes),
        }


def split_product(JH: PolyMatrix) -> PolyMatrix:
    """(JH)(x) . (JH)(y) in 2n variables, y_i stored as x_{n+i}."""
    n = JH.nvars
    left = PolyMatrix([[e.extend(2 * n) for e in r] for r in JH.rows], 2 * n, JH.field)
    right = PolyMatrix([[e.extend(2 * n, offset=n) for e in r] for r in JH.rows], 2 * n, JH.field)
    return left @ right


def trdeg1_equivalences(F: PolyMap, degree_cap: int = 6) -> Trdeg1Report:
    """Check det JF = 1, nilpotency of JH and (JH)(JH)|_{x=y} = 0 for F = x + H.

    The hypothesis (transcendence degree one) is approximated by rank JH <= 1
    together with a relation found for each pair of nonzero components.
    """
    if F.m != F.nvars:
        raise StructuralError("F must be a square map")
    n = F.nvars
    H = F - PolyMap.identity(n, F.field)
    JH = jacobian(H)
    r = rank_over_function_field(JH).rank
    nonzero = [h for h in H if h.terms]
    pairs_ok = True
    for a, b in combinations(nonzero, 2):
        if find_dependence(PolyMap([a, b], n, F.field), degree_cap) is None:
            pairs_ok = False
            break
    hyp = r <= 1 and pairs_ok
    JF = jacobian(F)
    det_one = JF.det() == Polynomial.one(n, F.field)
    nil, _ = is_nilpotent(JH)
    split_zero = split_product(JH).is_zero()
    agree = det_one == nil == split_zero
    diag = None
    notes = []
    if not hyp:
        notes.append("hypothesis not met: rank > 1 or a component pair without a found relation")
    if hyp and not agree:
        diag = "THEOREM-VIOLATION: the three conditions disagree on a rank <= 1 input"
    return Trdeg1Report(r, pairs_ok, hyp, det_one, nil, split_zero, agree, diag, tuple(notes))


__all__ = [
    "jacobian",
    "RankCertificate",
    "rank_over_function_field",
    "jacobian_rank",
    "is_nilpotent",
    "DependenceRelation",
    "find_dependence",
    "check_relation",
    "DegreeMatrixReport",
    "degree_matrix_criterion",
    "exponent_matrix",
    "integer_det",
    "detdep_reduce",
    "Trdeg1Report",
    "trdeg1_equivalences",
    "split_product",
]
