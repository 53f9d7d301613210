"""Projections, transvections, multiplication operators and the canonical kernel.

Operators are materialised as value arrays so equality is exact.  Pointwise
sums ``f + g - h`` are evaluated left to right in the (possibly non-abelian)
group, exactly in the written order.

Projection naming: for ``l ⊤ r`` every ω splits uniquely as ``λ + ρ``.
``P(a, x)`` is ``P^a_x`` (needs ``a ⊤ x``, returns the x-part) and
``P_check(x, a)`` is ``P̌^x_a`` (needs ``a ⊤ x``, returns the a-part).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .groups import FiniteGroup
from .subsets import Subset, TransversalityError, _same, is_left_transversal, negate

__all__ = [
    "ElementMap",
    "PartialMapError",
    "proj",
    "P",
    "P_check",
    "transvection",
    "mult_operator",
    "canonical_kernel",
    "KernelMaps",
]


class PartialMapError(ValueError):
    """Composition or sum of partial maps with mismatched domains."""


@dataclass(frozen=True, eq=False)
class ElementMap:
    """A partial map Ω → Ω; ``values[i] == -1`` marks ``i`` outside the domain."""

    group: FiniteGroup
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.int64).copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def identity(cls, g: FiniteGroup, on: Subset | None = None) -> "ElementMap":
        v = np.arange(g.order)
        if on is not None:
            v = np.where(on.to_array(), v, -1)
        return cls(g, v)

    @classmethod
    def constant(cls, g: FiniteGroup, e: int, on: Subset | None = None) -> "ElementMap":
        v = np.full(g.order, e)
        if on is not None:
            v = np.where(on.to_array(), v, -1)
        return cls(g, v)

    @property
    def domain(self) -> Subset:
        return Subset.of(self.group, np.flatnonzero(self.values >= 0))

    @property
    def is_total(self) -> bool:
        return bool((self.values >= 0).all())

    def image(self, s: Subset | None = None) -> Subset:
        if s is None:
            s = self.domain
        if not s <= self.domain:
            raise PartialMapError(f"{s} is not inside the domain {self.domain}")
        return Subset.of(self.group, self.values[list(s.elements)])

    def __call__(self, e: int) -> int:
        v = int(self.values[e])
        if v < 0:
            raise PartialMapError(f"{e} is outside the domain")
        return v

    def _check_same_domain(self, other: "ElementMap") -> None:
        if other.group is not self.group and other.group != self.group:
            raise PartialMapError("maps live on different groups")
        if not np.array_equal(self.values >= 0, other.values >= 0):
            raise PartialMapError("pointwise operation on maps with different domains")

    def __add__(self, other: "ElementMap") -> "ElementMap":
        self._check_same_domain(other)
        ok = self.values >= 0
        out = np.full(self.group.order, -1)
        out[ok] = self.group.table[self.values[ok], other.values[ok]]
        return ElementMap(self.group, out)

    def __neg__(self) -> "ElementMap":
        ok = self.values >= 0
        out = np.full(self.group.order, -1)
        out[ok] = self.group.inv[self.values[ok]]
        return ElementMap(self.group, out)

    def __sub__(self, other: "ElementMap") -> "ElementMap":
        return self + (-other)

    def compose(self, inner: "ElementMap") -> "ElementMap":
        """``self ∘ inner``; the image of ``inner`` must lie in the domain of ``self``."""
        ok = inner.values >= 0
        if (self.values[inner.values[ok]] < 0).any():
            raise PartialMapError("image of the inner map escapes the outer domain")
        out = np.full(self.group.order, -1)
        out[ok] = self.values[inner.values[ok]]
        return ElementMap(self.group, out)

    def __matmul__(self, inner: "ElementMap") -> "ElementMap":
        return self.compose(inner)

    def restrict(self, s: Subset) -> "ElementMap":
        if not s <= self.domain:
            raise PartialMapError(f"{s} is not inside the domain {self.domain}")
        return ElementMap(self.group, np.where(s.to_array(), self.values, -1))

    def is_bijective_onto(self, target: Subset) -> bool:
        img = self.values[self.values >= 0]
        return len(np.unique(img)) == len(img) == len(target) and Subset.of(self.group, img) == target

    def inverse(self) -> "ElementMap":
        ok = np.flatnonzero(self.values >= 0)
        img = self.values[ok]
        if len(np.unique(img)) != len(img):
            raise PartialMapError("map is not injective")
        out = np.full(self.group.order, -1)
        out[img] = ok
        return ElementMap(self.group, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ElementMap):
            return NotImplemented
        return self.group == other.group and np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash(self.values.tobytes())

    def __repr__(self) -> str:
        return "ElementMap[" + ",".join("-" if v < 0 else str(v) for v in self.values) + "]"


def _need(l: Subset, r: Subset, names: str) -> None:
    if not is_left_transversal(l, r):
        raise TransversalityError(f"{names} fails for {l}, {r}")


def proj(a: Subset, x: Subset, side: str = "left") -> ElementMap:
    """Projection for ``a ⊤ x``: ``left`` gives the x-component, ``right`` the a-component."""
    g = _same(a, x)
    _need(a, x, "a ⊤ x")
    out = np.empty(g.order, dtype=np.int64)
    for alpha in a.elements:
        row = g._rows[alpha]
        for xi in x.elements:
            out[row[xi]] = xi if side == "left" else alpha
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return ElementMap(g, out)


def P(upper: Subset, lower: Subset) -> ElementMap:
    """``P^upper_lower``: needs ``upper ⊤ lower``, returns the lower-part."""
    return proj(upper, lower, "left")


def P_check(upper: Subset, lower: Subset) -> ElementMap:
    """``P̌^upper_lower``: needs ``lower ⊤ upper``, returns the lower-part."""
    return proj(lower, upper, "right")


def transvection(c: Subset, x: Subset, y: Subset, side: str = "b") -> ElementMap:
    """``T^b_{x,y} = P̌^b_x - P̌^b_y + id`` (side ``b``) or
    ``Ť^a_{x,y} = P̌^y_a - P̌^x_a + id`` (side ``a``)."""
    g = _same(c, x, y)
    ident = ElementMap.identity(g)
    if side == "b":
        return P_check(c, x) - P_check(c, y) + ident
    if side == "a":
        return P_check(y, c) - P_check(x, c) + ident
    raise ValueError(f"side must be 'a' or 'b', got {side!r}")


def mult_operator(kind: str, x: Subset | None = None, a: Subset | None = None, y: Subset | None = None,
                  b: Subset | None = None, z: Subset | None = None) -> ElementMap:
    """Multiplication operators.

    * ``M``: ``M_{xabz} = P^a_x - id + P̌^b_z`` (needs ``a ⊤ x``, ``z ⊤ b``)
    * ``L``: ``L_{xayb} = -(P̌^x_a ∘ P̌^b_y) + id`` (needs ``a ⊤ x``, ``y ⊤ b``)
    * ``R``: ``R_{aybz} = id - P^z_b ∘ P^{-a}_y`` (needs ``(-a) ⊤ y``, ``z ⊤ b``)
    """
    kind = kind.upper()
    if kind == "M":
        g = _same(x, a, b, z)
        _need(a, x, "a ⊤ x")
        _need(z, b, "z ⊤ b")
        return P(a, x) - ElementMap.identity(g) + P_check(b, z)
    if kind == "L":
        g = _same(x, a, y, b)
        _need(a, x, "a ⊤ x")
        _need(y, b, "y ⊤ b")
        return -(P_check(x, a) @ P_check(b, y)) + ElementMap.identity(g)
    if kind == "R":
        g = _same(a, y, b, z)
        na = negate(a)
        _need(na, y, "(-a) ⊤ y")
        _need(z, b, "z ⊤ b")
        return ElementMap.identity(g) - (P(z, b) @ P(na, y))
    raise ValueError(f"kind must be L, M or R, got {kind!r}")


class KernelMaps(NamedTuple):
    K: ElementMap | None  # K^a_{x,y} = P^a_x|_y, when a ⊤ x
    K_check: ElementMap | None  # Ǩ^b_{x,y} = P̌^b_x|_y, when x ⊤ b
    B: ElementMap | None  # B^{a,x,b}_y = P^a_y ∘ P̌^b_x|_y, when a ⊤ y and x ⊤ b


def canonical_kernel(a: Subset, x: Subset, y: Subset, b: Subset) -> KernelMaps:
    """Kernel maps for the given data; each is ``None`` when its hypothesis fails.

    Raises :class:`TransversalityError` if none of them is defined.
    """
    _same(a, x, y, b)
    ax = is_left_transversal(a, x)
    xb = is_left_transversal(x, b)
    ay = is_left_transversal(a, y)
    K = P(a, x).restrict(y) if ax else None
    Kc = P_check(b, x).restrict(y) if xb else None
    B = (P(a, y) @ P_check(b, x)).restrict(y) if (ay and xb) else None
    if K is None and Kc is None:
        raise TransversalityError(f"neither a ⊤ x nor x ⊤ b holds for a={a}, x={x}, b={b}")
    return KernelMaps(K, Kc, B)
