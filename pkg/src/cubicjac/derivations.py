"""K-derivations of a polynomial ring and their exponentials."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import HypothesisViolation, ResourceLimitError, StructuralError
from .polymap import PolyMap
from .polynomial import Polynomial

DEFAULT_NILPOTENCY_BOUND = 64


@dataclass(frozen=True)
class Derivation:
    """D is determined by the images D(x_i)."""

    images: tuple

    def __post_init__(self):
        imgs = tuple(self.images)
        if not imgs:
            raise StructuralError("a derivation needs at least one variable")
        n, F = imgs[0].nvars, imgs[0].field
        if len(imgs) != n or any(p.nvars != n or p.field != F for p in imgs):
            raise StructuralError("a derivation needs one image per variable in a common context")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def from_map(cls, images: PolyMap) -> "Derivation":
        return cls(images.components)

    @property
    def nvars(self) -> int:
        return len(self.images)

    @property
    def field(self):
        return self.images[0].field

    def __call__(self, f: Polynomial) -> Polynomial:
        return derivation_apply(self, f)

    def scale_by(self, w: Polynomial) -> "Derivation":
        """The derivation wD."""
        return Derivation(tuple(w * d for d in self.images))

    @property
    def triangular(self) -> bool:
        n = self.nvars
        for i, d in enumerate(self.images):
            if i == n - 1:
                if not d.is_constant():
                    return False
            elif any(v <= i for v in d.variables()):
                return False
        return True

    def nilpotency_orders(self, bound: int = DEFAULT_NILPOTENCY_BOUND):
        """For each x_i the least k with D^k(x_i) = 0, or None if not reached within ``bound``."""
        out = []
        for i in range(self.nvars):
            f = Polynomial.var(i, self.nvars, self.field)
            k = 0
            while f.terms and k < bound:
                f = self(f)
                k += 1
            out.append(k if not f.terms else None)
        return out

    def is_locally_nilpotent(self, bound: int = DEFAULT_NILPOTENCY_BOUND) -> bool:
        """Certified when every generator is killed within ``bound`` applications.

        A False answer only means the certificate was not found within the bound.
        """
        return all(k is not None for k in self.nilpotency_orders(bound))

    def to_text(self) -> str:
        parts = []
        for i, d in enumerate(self.images, start=1):
            if d.terms:
                parts.append(f"({d.to_text()})*d/dx{i}")
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return [d.to_text() for d in self.images]


def derivation_apply(D: Derivation, f: Polynomial) -> Polynomial:
    """sum_i D(x_i) * df/dx_i."""
    if f.nvars != D.nvars or f.field != D.field:
        raise StructuralError("polynomial and derivation live in different contexts")
    acc = Polynomial.zero(f.nvars, f.field)
    for i, d in enumerate(D.images):
        if d.terms:
            fi = f.diff(i)
            if fi.terms:
                acc = acc + d * fi
    return acc


def exp_derivation(D: Derivation, w: Polynomial | None = None, bound: int = DEFAULT_NILPOTENCY_BOUND) -> PolyMap:
    """exp(wD) as the map x_i -> sum_k (wD)^k(x_i) / k!.

    Needs D(w) = 0 (so that wD is again locally nilpotent) and, in
    characteristic p, every series to stop before order p.
    """
    n, F = D.nvars, D.field
    if w is None:
        w = Polynomial.one(n, F)
    if derivation_apply(D, w).terms:
        raise HypothesisViolation("the multiplier is not in the kernel of D")
    E = D.scale_by(w)
    p = F.characteristic
    comps = []
    for i in range(n):
        term = Polynomial.var(i, n, F)
        total = term
        k = 0
        fact = F.one
        while True:
            term = E(term)
            k += 1
            if not term.terms:
                break
            if k >= bound:
                raise ResourceLimitError(f"D^k(x{i + 1}) still nonzero after {bound} steps")
            if p and k >= p:
                raise HypothesisViolation(f"{k}! is not invertible in characteristic {p}")
            fact = F.reduce(fact * k)
            total = total + term.scale(F.inv(fact))
        comps.append(total)
    return PolyMap(comps, n, F)


__all__ = ["Derivation", "derivation_apply", "exp_derivation", "DEFAULT_NILPOTENCY_BOUND"]
