"""Classification of cubic homogeneous maps whose Jacobian has rank at most two.

Three normal shapes are recognized, for H~ = S H(Tx):

* CASE1_ZERO_TAIL: components r+1..m of H~ vanish;
* CASE2_TWO_VARIABLES: r = 2 and H~ only involves x1, x2;
* CASE3_X3_QUADRIC: r = 2 and the components of H~ span x3*x1^2, x3*x1*x2, x3*x2^2.

The case is decided from the rank r, the dimension d0 of the span of the
components and the number e of essential variables; the resulting predicate
is then checked on H~ directly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import HypothesisViolation, TheoremViolation
from .fields import Field
from .gcd import find_linear_factor, gcd_many
from .jacobian import jacobian, rank_over_function_field
from .matrices import LinearMap, complete_basis, nullspace, rank as scalar_rank, rref, row_reduction_transform
from .normalizer import check_characteristic, directional_kernel
from .polymap import PolyMap, transform
from .polynomial import Polynomial, grlex_key

CASE1 = "CASE1_ZERO_TAIL"
CASE2 = "CASE2_TWO_VARIABLES"
CASE3 = "CASE3_X3_QUADRIC"


# -- spans of forms --------------------------------------------------------------


def coefficient_matrix(polys):
    """Rows of coefficients over the union of monomials (descending grlex)."""
    mons = sorted({m for p in polys for m in p.terms}, key=grlex_key, reverse=True)
    F = polys[0].field if polys else None
    return mons, [[p.terms.get(m, F.zero) for m in mons] for p in polys]


def span_basis(polys):
    """A basis of the K-span (reduced echelon form), as polynomials."""
    polys = [p for p in polys]
    if not polys or all(not p.terms for p in polys):
        return []
    p0 = polys[0]
    mons, A = coefficient_matrix(polys)
    R, piv = rref(A, p0.field)
    return [Polynomial(dict(zip(mons, R[i])), p0.nvars, p0.field) for i in range(len(piv))]


def span_dimension(polys) -> int:
    polys = [p for p in polys if p.terms]
    if not polys:
        return 0
    mons, A = coefficient_matrix(polys)
    return scalar_rank(A, polys[0].field)


def in_span(f: Polynomial, basis) -> bool:
    if not f.terms:
        return True
    return span_dimension(list(basis) + [f]) == span_dimension(basis)


# -- rank one ------------------------------------------------------------------------


@dataclass(frozen=True)
class Rank1Decomposition:
    common_form: Polynomial
    coefficients: tuple

    def to_json(self):
        F = self.common_form.field
        return {"common_form": self.common_form.to_text(), "coefficients": [F.format(c) for c in self.coefficients]}


def pairwise_dependence_rank1(H: PolyMap):
    """H_i = c_i f for one form f when rank JH <= 1; None when the rank is larger."""
    check_characteristic(H.field, max(H.degree(), 3), "the rank one decomposition")
    F = H.field
    r = rank_over_function_field(jacobian(H)).rank
    if r > 1:
        return None
    nonzero = [h for h in H if h.terms]
    if not nonzero:
        return Rank1Decomposition(Polynomial.zero(H.nvars, F), tuple(F.zero for _ in H))
    f = nonzero[0].monic()
    m, c = f.leading_term()
    coeffs = []
    for h in H:
        lam = h.coefficient(m)
        if h != f.scale(lam):
            raise TheoremViolation("rank one map with components that are not proportional")
        coeffs.append(lam)
    return Rank1Decomposition(f, tuple(coeffs))


def extract_common_linear_factor(basis):
    """A monic linear form dividing every polynomial of ``basis``, or None."""
    basis = [b for b in basis if b.terms]
    if not basis:
        return None
    g = gcd_many(basis)
    if g.degree() == float("-inf") or g.degree() < 1:
        return None
    return find_linear_factor(g)


# -- case predicates ---------------------------------------------------------------


def is_case1(H: PolyMap, r: int) -> bool:
    return all(not h.terms for h in H.components[r:])


def is_case2(H: PolyMap, r: int) -> bool:
    return r == 2 and all(v < 2 for v in H.variables())


def case3_monomials(n: int, F: Field):
    return [Polynomial.monomial(e, 1, F) for e in ((2, 0, 1) + (0,) * (n - 3), (1, 1, 1) + (0,) * (n - 3), (0, 2, 1) + (0,) * (n - 3))]


def is_case3(H: PolyMap, r: int) -> bool:
    if r != 2 or H.nvars < 3:
        return False
    target = case3_monomials(H.nvars, H.field)
    comps = [h for h in H if h.terms]
    return span_dimension(comps) == 3 and all(in_span(h, target) for h in comps)


PREDICATES = {CASE1: is_case1, CASE2: is_case2, CASE3: is_case3}


@dataclass(frozen=True)
class ClassificationReport:
    case_tag: str
    r: int
    S: LinearMap
    T: LinearMap
    H_tilde: PolyMap
    span_dim: int
    essential_count: int
    overlapping_cases: tuple
    linear_factor: Polynomial | None = None

    def verify(self, H: PolyMap) -> dict:
        checks = {}
        checks["H_tilde = S H(Tx)"] = transform(H, self.S, self.T) == self.H_tilde
        checks[f"{self.case_tag} predicate"] = PREDICATES[self.case_tag](self.H_tilde, self.r)
        if H.m == H.nvars:
            checks["S T = I"] = (self.S @ self.T).is_identity()
        return checks

    def to_json(self):
        out = {
            "case_tag": self.case_tag,
            "rank": self.r,
            "span_dim": self.span_dim,
            "essential_count": self.essential_count,
            "overlapping_cases": list(self.overlapping_cases),
            "S": self.S.to_json(),
            "T": self.T.to_json(),
            "H_tilde": self.H_tilde.to_json(),
        }
        if self.linear_factor is not None:
            out["linear_factor"] = self.linear_factor.to_text()
        return out


def _row_transform_for_span(H: PolyMap):
    """S with S.H in reduced echelon form: a basis of the span first, then zeros."""
    F = H.field
    mons, A = coefficient_matrix(list(H))
    if not mons:
        return LinearMap.identity(H.m, F)
    return LinearMap(tuple(map(tuple, row_reduction_transform(A, F))), F)


def classify_rank_le2(H: PolyMap) -> ClassificationReport:
    """Find S, T putting H into one of the three shapes (S = T^-1 when m = n)."""
    F = H.field
    if not H.is_cubic_homogeneous():
        raise HypothesisViolation("classification needs a cubic homogeneous map")
    check_characteristic(F, 3, "classification")
    m, n = H.m, H.nvars
    r = rank_over_function_field(jacobian(H)).rank
    if r > 2:
        raise HypothesisViolation(f"PRECONDITION_RANK: Jacobian rank is {r} > 2")
    comps = [h for h in H if h.terms]
    d0 = span_dimension(comps)
    N = directional_kernel(comps, n, F)
    e = n - len(N)
    overlaps = []
    if d0 <= r:
        overlaps.append(CASE1)
    if r == 2 and e <= 2:
        overlaps.append(CASE2)
    if r == 2 and e == 3 and d0 == 3:
        overlaps.append(CASE3)
    square = m == n
    I_m, I_n = LinearMap.identity(m, F), LinearMap.identity(n, F)
    L = None

    if d0 <= r:
        tag = CASE1
        if is_case1(H, r):
            S, T = I_m, I_n
        else:
            S = _row_transform_for_span(H)
            T = S.inverse() if square else I_n
    elif e <= 2:
        tag = CASE2
        if is_case2(H, r):
            S, T = I_m, I_n
        else:
            front = complete_basis(N, n, F)
            T = LinearMap.from_columns(front + N, F)
            S = T.inverse() if square else I_m
    elif e == 3 and d0 == 3:
        tag = CASE3
        basis = span_basis(comps)
        L = extract_common_linear_factor(basis)
        if L is None or L.degree() != 1:
            raise TheoremViolation("no common linear factor in a span of dimension 3 with 3 essential variables")
        if is_case3(H, r):
            S, T = I_m, I_n
        else:
            quads = [b.exact_div(L) for b in basis]
            Nq = directional_kernel(quads, n, F)
            if n - len(Nq) != 2:
                raise TheoremViolation("quotient quadrics do not live in two linear forms")
            W = _annihilator(Nq, n, F)
            lvec = [L.coefficient(tuple(1 if i == j else 0 for i in range(n))) for j in range(n)]
            if scalar_rank(W + [lvec], F) != 3:
                raise TheoremViolation("the common linear factor lies in the span of the quadric variables")
            rows = W + [lvec]
            rows = rows + complete_basis(rows, n, F)
            A = LinearMap(tuple(map(tuple, rows)), F)
            T = A.inverse()
            S = A if square else I_m
    else:
        raise TheoremViolation(f"no case applies (rank {r}, span dimension {d0}, essential variables {e})")

    Ht = transform(H, S, T)
    report = ClassificationReport(tag, r, S, T, Ht, d0, e, tuple(overlaps), L)
    if not PREDICATES[tag](Ht, r):
        raise TheoremViolation(f"{tag} predicate fails on the transformed map")
    if square and not (S @ T).is_identity():
        raise TheoremViolation("S T != I for a square map")
    return report


def _annihilator(vectors, n: int, F: Field):
    """Basis of the linear forms vanishing on every vector (as coefficient rows)."""
    if not vectors:
        return [[F.one if i == j else F.zero for i in range(n)] for j in range(n)]
    return nullspace([list(v) for v in vectors], F, n)


__all__ = [
    "CASE1",
    "CASE2",
    "CASE3",
    "Rank1Decomposition",
    "pairwise_dependence_rank1",
    "extract_common_linear_factor",
    "ClassificationReport",
    "classify_rank_le2",
    "span_basis",
    "span_dimension",
    "in_span",
    "is_case1",
    "is_case2",
    "is_case3",
    "PREDICATES",
]
