"""Linear normalization of a map at a point of maximal Jacobian rank, and the
essential variables of a set of forms."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import FieldTooSmall, HypothesisViolation, TheoremViolation
from .fields import Field, extension_of
from .jacobian import jacobian, rank_over_function_field
from .matrices import LinearMap, PolyMatrix, complete_basis, matmul, nullspace, rank, row_reduction_transform
from .polymap import PolyMap, transform
from .polynomial import Polynomial

MODE_KERNEL = "kernel_contains_x"
MODE_GENERAL = "general"


def euler_vector(H: PolyMap):
    """The column JH . x, one polynomial per component."""
    xs = [Polynomial.var(j, H.nvars, H.field) for j in range(H.nvars)]
    out = []
    for h in H:
        s = Polynomial.zero(H.nvars, H.field)
        for j, x in enumerate(xs):
            d = h.diff(j)
            if d.terms:
                s = s + d * x
        out.append(s)
    return out


def _sweep_values(F: Field, bound: int):
    if F.is_finite:
        elems = list(F.elements())
        nonzero = [e for e in elems if e != 0]
        return nonzero + [F.zero]
    return [F(v) for v in range(1, bound + 1)]


def _points(n: int, values):
    """All points over ``values`` ordered so that smaller value indices come first."""
    k = len(values)
    for top in range(k):
        for idx in product(range(top + 1), repeat=n):
            if max(idx, default=0) == top:
                yield [values[i] for i in idx]


def _witness_ok(J: PolyMatrix, ex, r: int, point, check_euler: bool) -> bool:
    M = J.evaluate(point)
    if rank(M, J.field) != r:
        return False
    if check_euler and all(e.evaluate(point) == 0 for e in ex):
        return False
    return True


def find_witness(H: PolyMap, mode: str | None = None, max_value: int = 64, extension_degrees=(2, 3)):
    """A point w where the Jacobian attains its generic rank.

    In the general mode w must also satisfy (JH . x)(w) != 0.  Over Q the
    sweep uses coordinates 1..B with B doubling up to ``max_value``; over a
    finite field every point is tried, then the extensions of the given
    degrees.  Returns (w, field) since the witness may live in an extension.
    """
    J = jacobian(H)
    r = rank_over_function_field(J).rank
    ex = euler_vector(H)
    euler_zero = all(not e.terms for e in ex)
    if mode is None:
        mode = MODE_KERNEL if euler_zero else MODE_GENERAL
    if mode == MODE_KERNEL and not euler_zero:
        raise HypothesisViolation("kernel mode needs JH . x = 0")
    check_euler = mode == MODE_GENERAL and not euler_zero
    n = H.nvars
    F = H.field
    if F.is_finite:
        fields = [F] + [extension_of(F, k) for k in extension_degrees]
        for K in fields:
            HK = H.lift(K)
            JK = jacobian(HK)
            exK = euler_vector(HK)
            for pt in _points(n, _sweep_values(K, 0)):
                if _witness_ok(JK, exK, r, pt, check_euler):
                    return pt, K
        raise FieldTooSmall(f"no witness point over {F} or its extensions of degree {list(extension_degrees)}")
    B = 1
    seen = 0
    while B <= max_value:
        vals = _sweep_values(F, B)
        for count, pt in enumerate(_points(n, vals)):
            if count < seen:
                continue
            if _witness_ok(J, ex, r, pt, check_euler):
                return pt, F
        seen = B ** n
        B *= 2
    raise FieldTooSmall(f"no witness point with coordinates up to {max_value}")


@dataclass(frozen=True)
class NormalizationResult:
    S: LinearMap
    T: LinearMap
    H_tilde: PolyMap
    base_point_index: int  # 0-based index i of the base point e_{i+1}
    witness: tuple
    rank: int
    mode: str
    field: Field

    def to_json(self):
        F = self.field
        return {
            "rank": self.rank,
            "mode": self.mode,
            "base_point": f"e{self.base_point_index + 1}",
            "witness": [F.format(v) for v in self.witness],
            "S": self.S.to_json(),
            "T": self.T.to_json(),
            "H_tilde": self.H_tilde.to_json(),
            "field": F.name,
        }


def block_identity(m: int, n: int, r: int, F: Field):
    return [[F.one if (i == j and i < r) else F.zero for j in range(n)] for i in range(m)]


def _is_block_identity(H: PolyMap, base: int, r: int) -> bool:
    pt = [H.field.one if j == base else H.field.zero for j in range(H.nvars)]
    return jacobian(H).evaluate(pt) == block_identity(H.m, H.nvars, r, H.field)


def normalize_rkform(H: PolyMap) -> NormalizationResult:
    """S, T with (J S H(Tx)) at the base point equal to [[I_r, 0], [0, 0]].

    Base point e_{r+1} when JH . x = 0 (then w itself spans part of the
    kernel), e_1 otherwise.
    """
    J = jacobian(H)
    r = rank_over_function_field(J).rank
    ex = euler_vector(H)
    mode = MODE_KERNEL if all(not e.terms for e in ex) else MODE_GENERAL
    base = r if mode == MODE_KERNEL else 0
    m, n = H.m, H.nvars
    F = H.field
    if base < n and _is_block_identity(H, base, r):
        pt = tuple(F.one if j == base else F.zero for j in range(n))
        return NormalizationResult(LinearMap.identity(m, F), LinearMap.identity(n, F), H, base, pt, r, mode, F)
    w, K = find_witness(H, mode)
    HK = H.lift(K)
    Jw = jacobian(HK).evaluate(w)
    null = nullspace(Jw, K, n)
    if mode == MODE_GENERAL:
        others = complete_basis([list(w)] + null, n, K)
        cols = [list(w)] + others + null
    else:
        kernel = [list(w)]
        for v in null:
            if rank(kernel + [v], K) > len(kernel):
                kernel.append(v)
        front = complete_basis(kernel, n, K)
        cols = front + kernel
    T = LinearMap.from_columns(cols, K)
    JT = matmul(Jw, T.rows(), K)
    lead = [row[:r] for row in JT]
    S = LinearMap(tuple(map(tuple, row_reduction_transform(lead, K))), K) if m else LinearMap.identity(0, K)
    Ht = transform(HK, S, T)
    if base < n and not _is_block_identity(Ht, base, r):
        raise TheoremViolation("normalization failed to reach the block identity at the base point")
    return NormalizationResult(S, T, Ht, base, tuple(w), r, mode, K)


# -- essential variables -------------------------------------------------------------


@dataclass(frozen=True)
class EssentialVariables:
    subspace_basis: tuple
    essential_count: int
    T: LinearMap

    def to_json(self):
        F = self.T.field
        return {
            "essential_count": self.essential_count,
            "kernel_basis": [[F.format(v) for v in vec] for vec in self.subspace_basis],
            "T": self.T.to_json(),
        }


def check_characteristic(F: Field, degree, what: str = "this operation"):
    p = F.characteristic
    if p and degree is not None and degree != float("-inf") and p <= max(degree, 3):
        raise HypothesisViolation(f"{what} needs characteristic 0 or > {max(int(degree), 3)}, got {p}")


def directional_kernel(polys, nvars: int, F: Field):
    """Basis of {v in K^n : sum_j v_j df/dx_j = 0 for every f in polys}."""
    rows = {}
    for f in polys:
        for j in range(nvars):
            for mono, c in f.diff(j).terms.items():
                key = (id(f), mono)
                rows.setdefault(key, [F.zero] * nvars)[j] = c
    A = list(rows.values())
    if not A:
        return [[F.one if i == j else F.zero for i in range(nvars)] for j in range(nvars)]
    return nullspace(A, F, nvars)


def essential_variables(H: PolyMap) -> EssentialVariables:
    """The kernel N of all directional derivatives and a T compressing H.

    H(Tx) depends only on x_1..x_e with e = n - dim N: the last dim N columns
    of T span N.  Needs char 0 or char > deg H so that vanishing derivatives
    force independence of a variable.
    """
    F = H.field
    check_characteristic(F, H.degree(), "essential variables")
    n = H.nvars
    N = directional_kernel(list(H), n, F)
    front = complete_basis(N, n, F)
    T = LinearMap.from_columns(front + N, F)
    return EssentialVariables(tuple(tuple(v) for v in N), n - len(N), T)


__all__ = [
    "MODE_KERNEL",
    "MODE_GENERAL",
    "euler_vector",
    "find_witness",
    "NormalizationResult",
    "normalize_rkform",
    "EssentialVariables",
    "essential_variables",
    "directional_kernel",
    "check_characteristic",
    "block_identity",
]
