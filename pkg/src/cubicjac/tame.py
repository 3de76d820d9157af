"""Decomposition of Keller maps into elementary automorphisms.

A list of steps [s_0, s_1, ..., s_k] stands for the composition
s_0 o s_1 o ... o s_k, so s_k acts first on the input point.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import HypothesisViolation, StructuralError, TheoremViolation
from .keller import FORM_II, form_ii_residual, is_keller, is_triangular_map, keller_normal_form
from .matrices import LinearMap
from .polymap import PolyMap
from .polynomial import Polynomial


@dataclass(frozen=True)
class ElementaryStep:
    """x_i -> scale * x_i + shift, all other coordinates fixed (index is 0-based)."""

    index: int
    scale: object
    shift: Polynomial

    def __post_init__(self):
        if not 0 <= self.index < self.shift.nvars:
            raise StructuralError(f"step index {self.index + 1} out of range")
        if self.scale == 0:
            raise StructuralError("an elementary step needs a nonzero scale")
        if self.index in self.shift.variables():
            raise StructuralError(f"the shift of an elementary step on x{self.index + 1} involves x{self.index + 1}")

    @property
    def nvars(self) -> int:
        return self.shift.nvars

    @property
    def field(self):
        return self.shift.field

    def to_map(self) -> PolyMap:
        n, F = self.nvars, self.field
        comps = [Polynomial.var(j, n, F) for j in range(n)]
        comps[self.index] = comps[self.index].scale(self.scale) + self.shift
        return PolyMap(comps, n, F)

    def apply(self, G: PolyMap) -> PolyMap:
        """self o G, computed by touching a single component."""
        F = self.field
        comps = list(G.components)
        shift = self.shift.substitute(dict(enumerate(G.components)), G.nvars) if self.shift.terms else self.shift
        comps[self.index] = G[self.index].scale(self.scale) + shift
        return PolyMap(comps, G.nvars, F)

    def inverse(self) -> "ElementaryStep":
        F = self.field
        inv = F.inv(self.scale)
        return ElementaryStep(self.index, inv, self.shift.scale(F.reduce(-inv)))

    def touched_variables(self):
        return sorted({self.index} | set(self.shift.variables()))

    def extend(self, nvars: int) -> "ElementaryStep":
        return ElementaryStep(self.index, self.scale, self.shift.extend(nvars))

    def to_json(self):
        return {"index": self.index + 1, "scale": self.field.format(self.scale), "shift": self.shift.to_text()}


def compose_steps(steps, nvars: int, F) -> PolyMap:
    G = PolyMap.identity(nvars, F)
    for s in reversed(steps):
        G = s.apply(G)
    return G


def _row_step(index: int, row, F) -> ElementaryStep:
    """The step whose matrix is the identity with row ``index`` replaced by ``row``."""
    n = len(row)
    shift = Polynomial._raw(
        {tuple(1 if k == j else 0 for k in range(n)): row[j] for j in range(n) if j != index and row[j] != 0}, n, F
    )
    return ElementaryStep(index, row[index], shift)


def linear_steps(T: LinearMap):
    """Steps composing to x -> T x, from Gauss-Jordan reduction of T by single-row operations."""
    F = T.field
    n = T.size
    if not T.is_invertible():
        raise StructuralError("a linear step decomposition needs an invertible matrix")
    A = [list(r) for r in T.rows()]
    ops = []  # each op replaces row i by sum_j op[j] * row j; op matrices M with M_k ... M_1 T = I

    def do(i, coeffs):
        ops.append((i, coeffs))
        new = [F.reduce(sum(coeffs[j] * A[j][c] for j in range(n) if coeffs[j] != 0)) for c in range(n)]
        A[i] = new

    for j in range(n):
        if A[j][j] == 0:
            r = next(r for r in range(j + 1, n) if A[r][j] != 0)
            do(j, [F.one if k in (j, r) else F.zero for k in range(n)])
        inv = F.inv(A[j][j])
        if inv != 1:
            do(j, [inv if k == j else F.zero for k in range(n)])
        for i in range(n):
            if i != j and A[i][j] != 0:
                do(i, [F.one if k == i else (F.reduce(-A[i][j]) if k == j else F.zero) for k in range(n)])
    # T = M_1^-1 M_2^-1 ... M_k^-1, and x -> (AB) x is the map A o B.
    return [_row_step(i, coeffs, F).inverse() for i, coeffs in ops]


def triangular_steps(F_map: PolyMap):
    """x + H with H_i in K[x_{i+1}, ..., x_n]: one step per nonzero H_i, last index innermost."""
    n = F_map.nvars
    H = F_map - PolyMap.identity(n, F_map.field)
    if not is_triangular_map(H):
        raise StructuralError("the map is not triangular")
    return [ElementaryStep(i, F_map.field.one, H[i]) for i in reversed(range(n)) if H[i].terms]


def form_ii_steps(F_map: PolyMap, allow_extra_variable: bool = False):
    """Steps for x + H with H in the exceptional normal form.

    x + H = E o exp(wD) with w = x1 x3 - x2 x4, D = x4 d/dx1 + x3 d/dx2 and E
    adding the residual parts.  With a spare variable z (x5 when n >= 5, a
    fresh x_{n+1} otherwise) and tau: z -> z + w, psi = exp(zD):
    (exp(wD), z) = psi^-1 o tau^-1 o psi o tau.
    Returns (steps, nvars used).
    """
    n, F = F_map.nvars, F_map.field
    H = F_map - PolyMap.identity(n, F)
    res = form_ii_residual(H)
    if res is None:
        raise StructuralError("the map is not in the exceptional normal form")
    if n == 4 and not allow_extra_variable:
        raise HypothesisViolation(
            "OPEN: tameness of the exceptional form in dimension 4 is not known; rerun with --extra-variable for a decomposition of (F, x5)"
        )
    N = n if n >= 5 else n + 1
    R1, R2 = (r.extend(N) for r in res)
    x = [Polynomial.var(i, N, F) for i in range(N)]
    z = x[4]
    w = x[0] * x[2] - x[1] * x[3]
    one = F.one
    psi = [ElementaryStep(0, one, z * x[3]), ElementaryStep(1, one, z * x[2])]
    psi_inv = [s.inverse() for s in psi]
    tau = ElementaryStep(4, one, w)
    steps = []
    if R1.terms:
        steps.append(ElementaryStep(0, one, R1))
    if R2.terms:
        steps.append(ElementaryStep(1, one, R2))
    steps += psi_inv + [tau.inverse()] + psi + [tau]
    return steps, N


@dataclass(frozen=True)
class TameDecomposition:
    steps: tuple
    nvars: int
    extra_variable: bool
    variant: str

    def to_json(self):
        return {
            "variant": self.variant,
            "nvars": self.nvars,
            "extra_variable": self.extra_variable,
            "steps": [s.to_json() for s in self.steps],
            "touched_variables": sorted({v + 1 for s in self.steps for v in s.touched_variables()}),
        }


def tame_decompose(F_map: PolyMap, allow_extra_variable: bool = False) -> TameDecomposition:
    """Elementary steps composing to F (or to (F, x_{n+1}) when a fresh variable is needed).

    Triangular and exceptional normal forms are decomposed directly; any other
    cubic homogeneous Keller map of Jacobian rank <= 2 is brought to a normal
    form first, F = T o F~ o T^-1, with T split into linear steps.  The
    composition is checked exactly before returning.
    """
    n, F = F_map.nvars, F_map.field
    if F_map.m != n:
        raise StructuralError("F must have as many components as variables")
    X = PolyMap.identity(n, F)
    H = F_map - X
    if H.is_zero():
        return _verified(TameDecomposition((), n, False, "IDENTITY"), F_map)
    if is_triangular_map(H):
        return _verified(TameDecomposition(tuple(triangular_steps(F_map)), n, False, "TRIANGULAR"), F_map)
    if form_ii_residual(H) is not None:
        steps, N = form_ii_steps(F_map, allow_extra_variable)
        return _verified(TameDecomposition(tuple(steps), N, N > n, FORM_II), F_map)
    if not is_keller(F_map):
        raise HypothesisViolation("not a Keller map")
    nf = keller_normal_form(H)
    Ft = nf.H_tilde + X
    if nf.variant == FORM_II:
        inner, N = form_ii_steps(Ft, allow_extra_variable)
    else:
        inner, N = triangular_steps(Ft), n
    T = nf.T
    if N > n:
        T = T.block_diag(LinearMap.identity(N - n, F))
    outer = linear_steps(T)
    back = linear_steps(T.inverse())
    steps = [s.extend(N) for s in outer] + [s.extend(N) for s in inner] + [s.extend(N) for s in back]
    return _verified(TameDecomposition(tuple(steps), N, N > n, nf.variant), F_map)


def _verified(dec: TameDecomposition, F_map: PolyMap) -> TameDecomposition:
    target = F_map.with_identity_tail(dec.nvars) if dec.nvars > F_map.nvars else F_map
    if compose_steps(dec.steps, dec.nvars, F_map.field) != target:
        raise TheoremViolation("emitted steps do not recompose to the map")
    return dec


__all__ = [
    "ElementaryStep",
    "compose_steps",
    "linear_steps",
    "triangular_steps",
    "form_ii_steps",
    "TameDecomposition",
    "tame_decompose",
]
