"""Polynomial maps H = (H_1, ..., H_m) and their compositions."""

from __future__ import annotations

from .errors import StructuralError
from .fields import Field
from .matrices import LinearMap
from .polynomial import NEG_INF, Polynomial, evaluate_many


class PolyMap:
    __slots__ = ("components", "nvars", "field")

    def __init__(self, components, nvars: int | None = None, field: Field | None = None):
        components = tuple(components)
        if components:
            nvars = components[0].nvars if nvars is None else nvars
            field = components[0].field if field is None else field
        if nvars is None or field is None:
            raise StructuralError("an empty map needs explicit nvars and field")
        for c in components:
            if c.nvars != nvars:
                raise StructuralError(f"component has {c.nvars} variables, expected {nvars}")
            if c.field != field:
                raise StructuralError("components over different fields")
        self.components = components
        self.nvars = nvars
        self.field = field

    @classmethod
    def identity(cls, n: int, F: Field) -> "PolyMap":
        return cls([Polynomial.var(i, n, F) for i in range(n)], n, F)

    @classmethod
    def zero(cls, m: int, n: int, F: Field) -> "PolyMap":
        return cls([Polynomial.zero(n, F)] * m, n, F)

    @classmethod
    def linear(cls, T: LinearMap, nvars: int | None = None) -> "PolyMap":
        """The map x -> T x."""
        n = T.shape[1] if nvars is None else nvars
        xs = [Polynomial.var(j, n, T.field) for j in range(T.shape[1])]
        comps = []
        for row in T.matrix:
            s = Polynomial.zero(n, T.field)
            for a, x in zip(row, xs):
                if a != 0:
                    s = s + x.scale(a)
            comps.append(s)
        return cls(comps, n, T.field)

    @property
    def m(self) -> int:
        return len(self.components)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __eq__(self, other):
        return isinstance(other, PolyMap) and self.nvars == other.nvars and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __add__(self, other: "PolyMap") -> "PolyMap":
        self._check_same_shape(other)
        return PolyMap([a + b for a, b in zip(self, other)], self.nvars, self.field)

    def __sub__(self, other: "PolyMap") -> "PolyMap":
        self._check_same_shape(other)
        return PolyMap([a - b for a, b in zip(self, other)], self.nvars, self.field)

    def __neg__(self):
        return PolyMap([-a for a in self], self.nvars, self.field)

    def scale(self, c) -> "PolyMap":
        return PolyMap([a.scale(c) for a in self], self.nvars, self.field)

    def _check_same_shape(self, other):
        if self.m != other.m or self.nvars != other.nvars or self.field != other.field:
            raise StructuralError("maps of different shape")

    def degree(self):
        return max((c.degree() for c in self), default=NEG_INF)

    def is_homogeneous(self, d: int | None = None) -> bool:
        return all(c.is_homogeneous(d) for c in self)

    def is_cubic_homogeneous(self) -> bool:
        return self.is_homogeneous(3)

    def is_zero(self) -> bool:
        return all(not c.terms for c in self)

    def variables(self) -> list[int]:
        used = set()
        for c in self:
            used.update(c.variables())
        return sorted(used)

    def extend(self, nvars: int) -> "PolyMap":
        """Same components in a larger variable context."""
        return PolyMap([c.extend(nvars) for c in self], nvars, self.field)

    def with_identity_tail(self, nvars: int) -> "PolyMap":
        """(F, x_{m+1}, ..., x_nvars): extend F by identity components."""
        base = self.extend(nvars)
        tail = [Polynomial.var(i, nvars, self.field) for i in range(self.m, nvars)]
        return PolyMap(list(base) + tail, nvars, self.field)

    def lift(self, F: Field) -> "PolyMap":
        return PolyMap([c.lift(F) for c in self], self.nvars, F)

    def truncate(self, max_degree, ignore=()) -> "PolyMap":
        return PolyMap([c.truncate(max_degree, ignore) for c in self], self.nvars, self.field)

    def compose(self, G: "PolyMap") -> "PolyMap":
        return compose_maps(self, G)

    def to_text(self, name: str = "H") -> str:
        from .textio import format_map

        return format_map(self, name)

    def to_json(self):
        return [c.to_text() for c in self]

    def __repr__(self):
        return f"PolyMap({self.to_json()}, nvars={self.nvars}, field={self.field})"


def compose_maps(F: PolyMap, G: PolyMap) -> PolyMap:
    """F(G): substitute x_j -> G_j into every component of F."""
    if F.nvars != G.m:
        raise StructuralError(f"cannot compose: F has {F.nvars} variables but G has {G.m} components")
    if F.field != G.field:
        raise StructuralError("maps over different fields")
    return PolyMap(evaluate_many(F.components, list(G.components), G.nvars, F.field), G.nvars, F.field)


def compose_linear(H: PolyMap, T: LinearMap, side: str = "right") -> PolyMap:
    """``side="right"``: H(Tx).  ``side="left"``: S.H with S = T."""
    if side == "right":
        if T.shape != (H.nvars, H.nvars):
            raise StructuralError(f"T must be {H.nvars}x{H.nvars}")
        if T.is_identity():
            return H
        return compose_maps(H, PolyMap.linear(T))
    if side == "left":
        if T.shape != (H.m, H.m):
            raise StructuralError(f"S must be {H.m}x{H.m}")
        comps = []
        for row in T.matrix:
            s = Polynomial.zero(H.nvars, H.field)
            for a, h in zip(row, H):
                if a != 0 and h.terms:
                    s = s + h.scale(a)
            comps.append(s)
        return PolyMap(comps, H.nvars, H.field)
    raise StructuralError(f"unknown side {side!r}")


def transform(H: PolyMap, S: LinearMap, T: LinearMap) -> PolyMap:
    """S H(T x)."""
    return compose_linear(compose_linear(H, T, "right"), S, "left")


def conjugate(H: PolyMap, T: LinearMap) -> PolyMap:
    """T^{-1} H(T x)."""
    return transform(H, T.inverse(), T)
