"""Keller maps x + H with H cubic homogeneous and rank JH <= 2: detection,
nilpotent 2x2 blocks, normal forms and exact inverses."""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, log2

from .classifier import classify_rank_le2, span_dimension
from .errors import HypothesisViolation, NonPolynomialInverse, StructuralError, TheoremViolation
from .gcd import gcd, square_part
from .jacobian import is_nilpotent, jacobian, rank_over_function_field
from .matrices import LinearMap, PolyMatrix, complete_basis, nullspace, rank as scalar_rank
from .normalizer import check_characteristic
from .polymap import PolyMap, compose_linear, compose_maps, conjugate
from .polynomial import Polynomial

FORM_I = "FORM_I_RANK1"
TRIANGULARIZABLE = "TRIANGULARIZABLE"
FORM_II = "FORM_II_EXCEPTIONAL"

TRIANGULAR = "TRIANGULAR"
CASE2_CONSTANT = "CASE2_CONSTANT_JACOBIAN_AB"
CASE3_CHAR3 = "CASE3_CHAR3_REJECT"


def _minus_identity(F: PolyMap) -> PolyMap:
    if F.m != F.nvars:
        raise StructuralError(f"F = x + H needs as many components as variables ({F.m} vs {F.nvars})")
    return F - PolyMap.identity(F.nvars, F.field)


def is_keller(F: PolyMap) -> bool:
    """det JF is a nonzero constant; for homogeneous H of degree >= 2 this is nilpotency of JH."""
    H = _minus_identity(F)
    if H.is_zero():
        return True
    degs = {h.homogeneous_degree() for h in H if h.terms}
    if len(degs) == 1 and None not in degs and degs.pop() >= 2:
        return is_nilpotent(jacobian(H))[0]
    d = jacobian(F).det()
    return d.is_constant() and bool(d.terms)


# -- 2x2 nilpotent blocks ---------------------------------------------------------


@dataclass(frozen=True)
class Nilpotent2x2Factorization:
    """N = c [[a b, -b^2], [a^2, -a b]]."""

    a: Polynomial
    b: Polynomial
    c: Polynomial
    triangularizable: bool

    def rebuild(self) -> PolyMatrix:
        a, b, c = self.a, self.b, self.c
        return PolyMatrix([[c * a * b, -(c * b * b)], [c * a * a, -(c * a * b)]], a.nvars, a.field)

    def to_json(self):
        return {"a": self.a.to_text(), "b": self.b.to_text(), "c": self.c.to_text(), "triangularizable": self.triangularizable}


def _check_nilpotent_2x2(N: PolyMatrix):
    if N.shape != (2, 2):
        raise StructuralError("expected a 2x2 matrix")
    if N.trace().terms or N.det().terms:
        raise HypothesisViolation("NOT_NILPOTENT: trace or determinant is nonzero")


def factor_nilpotent_2x2(N: PolyMatrix) -> Nilpotent2x2Factorization:
    """Factor a nilpotent 2x2 polynomial matrix.

    With g = gcd(n11, n21): b = n11/g, a = n21/g, c = g/a; then a is made
    monic and the scale moved into c.  When the first column vanishes,
    N = [[0, n12], [0, 0]] and the convention a = 0, b = the largest square
    root dividing n12, c = -n12/b^2 is used.
    """
    _check_nilpotent_2x2(N)
    n, F = N.nvars, N.field
    zero = Polynomial.zero(n, F)
    if N.is_zero():
        return Nilpotent2x2Factorization(zero, zero, zero, True)
    n11, n12 = N.rows[0]
    n21 = N.rows[1][0]
    if n21.terms:
        g = gcd(n11, n21)
        a = n21.exact_div(g)
        b = n11.exact_div(g)
        q, rem = g.divmod(a)
        if rem.terms:
            raise TheoremViolation("gcd of the first column is not divisible by a")
        c = q
        lam = a.leading_coefficient()
        inv = F.inv(lam)
        a, b, c = a.scale(inv), b.scale(inv), c.scale(F.reduce(lam * lam))
    else:
        a = zero
        b = square_part(n12)
        c = -(n12.exact_div(b * b))
    fac = Nilpotent2x2Factorization(a, b, c, span_dimension([a, b]) <= 1)
    if fac.rebuild() != N:
        raise TheoremViolation("factorization does not rebuild the matrix")
    return fac


def constant_kernel(M: PolyMatrix):
    """Basis of {v in K^n : M v = 0 identically}."""
    rows = {}
    m, ncols = M.shape
    F = M.field
    for i in range(m):
        for j in range(ncols):
            for mono, c in M.rows[i][j].terms.items():
                rows.setdefault((i, mono), [F.zero] * ncols)[j] = c
    A = list(rows.values())
    if not A:
        return [[F.one if k == j else F.zero for k in range(ncols)] for j in range(ncols)]
    return nullspace(A, F, ncols)


def _linear_coefficient(f: Polynomial, i: int):
    mono = tuple(1 if k == i else 0 for k in range(f.nvars))
    return f.coefficient(mono)


@dataclass(frozen=True)
class Nilpotent2x2Normalization:
    outcome: str
    T: LinearMap
    a: Polynomial
    b: Polynomial
    H_tilde: PolyMap

    def to_json(self):
        return {
            "outcome": self.outcome,
            "T": self.T.to_json(),
            "a": self.a.to_text(),
            "b": self.b.to_text(),
            "H_tilde": self.H_tilde.to_json(),
        }


def _conj_pair(H: PolyMap, T2: LinearMap) -> PolyMap:
    """T2^-1 (H1, H2)(T2 (x1, x2), x3, ..., xn) for a map with exactly two components."""
    n = H.nvars
    T = T2.block_diag(LinearMap.identity(n - 2, H.field)) if n > 2 else T2
    inner = compose_linear(H, T, "right")
    return compose_linear(inner, T2.inverse(), "left")


def normalize_nilpotent_2x2_cubic(H: PolyMap) -> Nilpotent2x2Normalization:
    """Normalize the block J_{x1,x2}(H1, H2) of a cubic homogeneous map.

    Only the first two components are used.  Outcomes: TRIANGULAR (the block
    becomes strictly upper triangular), CASE2_CONSTANT_JACOBIAN_AB (block
    [[ab, -b^2], [a^2, -ab]] with a, b free of x1, x2) and, in characteristic
    3 only, CASE3_CHAR3_REJECT.
    """
    if H.m < 2 or H.nvars < 2:
        raise StructuralError("need at least two components and two variables")
    F = H.field
    p = F.characteristic
    if p == 2:
        raise HypothesisViolation("characteristic 2 is not supported")
    pair = PolyMap(H.components[:2], H.nvars, F)
    if not pair.is_homogeneous(3):
        raise HypothesisViolation("the tracked components must be cubic homogeneous")
    N = jacobian(pair, [0, 1])
    fac = factor_nilpotent_2x2(N)
    if fac.triangularizable:
        ker = constant_kernel(N)
        if len(ker) == 2:
            T2 = LinearMap.identity(2, F)
        else:
            v = ker[0]
            T2 = LinearMap.from_columns([v] + complete_basis([v], 2, F), F)
        Ht = _conj_pair(pair, T2)
        blk = jacobian(Ht, [0, 1])
        if blk.rows[1][0].terms or blk.rows[0][0].terms or blk.rows[1][1].terms:
            raise TheoremViolation("triangularizing the 2x2 block failed")
        return Nilpotent2x2Normalization(TRIANGULAR, T2, fac.a, fac.b, Ht)
    if not fac.c.is_constant():
        raise HypothesisViolation("c is not constant: the block is not cubic homogeneous")
    c = fac.c.constant_value()
    T2 = LinearMap(((c, 0), (0, 1)), F)
    Ht = _conj_pair(pair, T2)
    n = H.nvars
    sub = {0: Polynomial.var(0, n, F).scale(c)}
    at = fac.a.scale(c).substitute(sub, n)
    bt = fac.b.substitute(sub, n)
    expected = PolyMatrix([[at * bt, -(bt * bt)], [at * at, -(at * bt)]], n, F)
    if jacobian(Ht, [0, 1]) != expected:
        raise TheoremViolation("scaled block does not have the expected product form")
    if _linear_coefficient(bt, 1) != 0 or _linear_coefficient(at, 0) != 0:
        raise TheoremViolation("unexpected diagonal coefficient in the scaled linear forms")
    lam = _linear_coefficient(at, 1)
    mu = _linear_coefficient(bt, 0)
    if lam == 0 and mu == 0:
        return Nilpotent2x2Normalization(CASE2_CONSTANT, T2, at, bt, Ht)
    if p == 3 and lam == mu:
        return Nilpotent2x2Normalization(CASE3_CHAR3, T2, at, bt, Ht)
    raise TheoremViolation("mixed linear forms outside characteristic 3")


# -- normal forms --------------------------------------------------------------------


def is_strictly_upper(M: PolyMatrix) -> bool:
    m, n = M.shape
    return all(not M.rows[i][j].terms for i in range(m) for j in range(min(i + 1, n)))


def is_triangular_map(H: PolyMap) -> bool:
    """H_i only involves x_{i+1}, ..., x_n."""
    return all(all(v > i for v in h.variables()) for i, h in enumerate(H))


def is_form_i(H: PolyMap) -> bool:
    return H.m >= 1 and 0 not in H[0].variables() and all(not h.terms for h in H.components[1:])


def form_ii_core(n: int, F):
    x = [Polynomial.var(i, n, F) for i in range(4)]
    w = x[0] * x[2] - x[1] * x[3]
    return x[3] * w, x[2] * w


def form_ii_residual(H: PolyMap):
    """(R1, R2) if H is in the exceptional normal form, else None."""
    n = H.nvars
    if n < 4 or H.m != n:
        return None
    c1, c2 = form_ii_core(n, H.field)
    R1, R2 = H[0] - c1, H[1] - c2
    if any(v < 2 for v in R1.variables() + R2.variables()):
        return None
    if any(h.terms for h in H.components[2:]):
        return None
    return R1, R2


@dataclass(frozen=True)
class KellerNormalForm:
    variant: str
    T: LinearMap
    H_tilde: PolyMap
    residual: PolyMap | None
    rank: int

    def verify(self, H: PolyMap) -> dict:
        checks = {"H_tilde = T^-1 H(Tx)": conjugate(H, self.T) == self.H_tilde}
        if self.variant == FORM_I:
            checks["FORM_I shape"] = is_form_i(self.H_tilde)
        elif self.variant == FORM_II:
            checks["FORM_II shape"] = form_ii_residual(self.H_tilde) is not None
        else:
            checks["strictly upper triangular Jacobian"] = is_strictly_upper(jacobian(self.H_tilde))
        return checks

    def to_json(self):
        return {
            "variant": self.variant,
            "rank": self.rank,
            "T": self.T.to_json(),
            "H_tilde": self.H_tilde.to_json(),
            "residual": self.residual.to_json() if self.residual is not None else None,
        }


def triangularize(H: PolyMap):
    """T with J(T^-1 H(Tx)) strictly upper triangular, or None if no such T exists.

    Builds the flag V_1 < V_2 < ... where V_k = {v : JH v has values in V_{k-1}}.
    """
    J = jacobian(H)
    n, F = H.nvars, H.field
    basis = []
    while len(basis) < n:
        if basis:
            P = nullspace(basis, F, n)
        else:
            P = [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]
        rows = []
        for p in P:
            row = []
            for j in range(n):
                s = Polynomial.zero(n, F)
                for i, pi in enumerate(p):
                    if pi != 0 and J.rows[i][j].terms:
                        s = s + J.rows[i][j].scale(pi)
                row.append(s)
            rows.append(row)
        nxt = constant_kernel(PolyMatrix(rows, n, F)) if rows else []
        grown = False
        for v in nxt:
            if scalar_rank(basis + [v], F) > len(basis):
                basis.append(v)
                grown = True
        if not grown:
            return None
    return LinearMap.from_columns(basis, F)


def _require_keller_cubic(H: PolyMap):
    if H.m != H.nvars:
        raise StructuralError("H must have as many components as variables")
    if not H.is_cubic_homogeneous():
        raise HypothesisViolation("H must be cubic homogeneous")
    check_characteristic(H.field, 3, "the Keller normal form")
    J = jacobian(H)
    if not is_nilpotent(J)[0]:
        raise HypothesisViolation("x + H is not a Keller map: JH is not nilpotent")
    r = rank_over_function_field(J).rank
    if r > 2:
        raise HypothesisViolation(f"PRECONDITION_RANK: Jacobian rank is {r} > 2")
    return J, r


def keller_normal_form(H: PolyMap) -> KellerNormalForm:
    J, r = _require_keller_cubic(H)
    n, F = H.nvars, H.field
    I = LinearMap.identity(n, F)
    if r <= 1:
        if is_form_i(H):
            nf = KellerNormalForm(FORM_I, I, H, None, r)
        else:
            cls = classify_rank_le2(H)
            nf = KellerNormalForm(FORM_I, cls.T, cls.H_tilde, None, r)
        return _checked(nf, H)
    if is_strictly_upper(J):
        return _checked(KellerNormalForm(TRIANGULARIZABLE, I, H, None, r), H)
    res = form_ii_residual(H)
    if res is not None:
        return _checked(KellerNormalForm(FORM_II, I, H, PolyMap(res, n, F), r), H)
    cls = classify_rank_le2(H)
    H1 = cls.H_tilde
    blk = normalize_nilpotent_2x2_cubic(H1)
    if blk.outcome == TRIANGULAR:
        T = triangularize(H)
        if T is None:
            raise TheoremViolation("the 2x2 block is triangularizable but the map is not")
        return _checked(KellerNormalForm(TRIANGULARIZABLE, T, conjugate(H, T), None, r), H)
    if blk.outcome != CASE2_CONSTANT:
        raise TheoremViolation(f"unexpected block outcome {blk.outcome}")
    T12 = cls.T @ blk.T.block_diag(LinearMap.identity(n - 2, F))
    H2 = conjugate(H, T12)
    if any(h.terms for h in H2.components[2:]):
        raise TheoremViolation("exceptional block with a nonzero tail")
    a, b = blk.a, blk.b
    rows = [[F.one if j == i else F.zero for j in range(n)] for i in range(2)]
    rows.append([_linear_coefficient(a, j) for j in range(n)])
    rows.append([_linear_coefficient(b, j) for j in range(n)])
    rows = rows + complete_basis(rows, n, F)
    A = LinearMap(tuple(map(tuple, rows)), F)
    T = T12 @ A.inverse()
    Ht = conjugate(H, T)
    res = form_ii_residual(Ht)
    if res is None:
        raise TheoremViolation("exceptional normal form not reached")
    return _checked(KellerNormalForm(FORM_II, T, Ht, PolyMap(res, n, F), r), H)


def _checked(nf: KellerNormalForm, H: PolyMap) -> KellerNormalForm:
    failed = [k for k, ok in nf.verify(H).items() if not ok]
    if failed:
        raise TheoremViolation("normal form check failed: " + ", ".join(failed))
    return nf


# -- inversion ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InverseResult:
    G: PolyMap
    iterations: int
    degree_bound: int

    def to_json(self):
        return {"inverse": self.G.to_json(), "iterations": self.iterations, "degree_bound": self.degree_bound}


def invert_keller(F: PolyMap, degree_bound: int | None = None, params: int = 0) -> InverseResult:
    """Inverse of F = x + H by the fixed point iteration G <- x - H(G).

    The last ``params`` variables are inert parameters (like t in x + tH):
    F has nvars - params components, the parameters are never substituted
    and do not count towards the degree truncation.  The result is returned
    only after F(G) = G(F) = x has been checked exactly.
    """
    n = F.m
    N = F.nvars
    if N != n + params:
        raise StructuralError(f"F has {F.m} components and {N} variables, expected {params} parameters")
    Fe = F.with_identity_tail(N)
    if params == 0 and not is_keller(Fe):
        raise HypothesisViolation("not a Keller map")
    ignore = frozenset(range(n, N))
    X = PolyMap.identity(N, F.field)
    H = Fe - X
    dx = max((_x_degree(h, ignore) for h in Fe), default=1)
    if degree_bound is None:
        degree_bound = max(dx, 1) ** max(n - 1, 1)
    cap = max(ceil(log2(max(degree_bound, 2))) + 2, n + 2)
    G = X
    for it in range(1, cap + 1):
        U = X - compose_maps(H, G)
        Gn = U.truncate(degree_bound, ignore)
        if Gn == G:
            break
        G = Gn
    else:
        raise NonPolynomialInverse(f"iteration did not stabilize within {cap} steps at degree bound {degree_bound}")
    # G = x - H(G) with nothing truncated is exactly F(G) = x.
    right_ok = U == G or compose_maps(Fe, G) == X
    if not right_ok or compose_maps(G, Fe) != X:
        raise NonPolynomialInverse("stabilized iterate is not a two-sided inverse")
    return InverseResult(PolyMap(G.components[:n], N, F.field), it, degree_bound)


def _x_degree(h: Polynomial, ignore) -> int:
    if not h.terms:
        return 0
    return max(sum(e for i, e in enumerate(m) if i not in ignore) for m in h.terms)


__all__ = [
    "FORM_I",
    "FORM_II",
    "TRIANGULARIZABLE",
    "TRIANGULAR",
    "CASE2_CONSTANT",
    "CASE3_CHAR3",
    "is_keller",
    "Nilpotent2x2Factorization",
    "factor_nilpotent_2x2",
    "Nilpotent2x2Normalization",
    "normalize_nilpotent_2x2_cubic",
    "constant_kernel",
    "KellerNormalForm",
    "keller_normal_form",
    "triangularize",
    "is_triangular_map",
    "is_strictly_upper",
    "is_form_i",
    "form_ii_residual",
    "form_ii_core",
    "InverseResult",
    "invert_keller",
]
