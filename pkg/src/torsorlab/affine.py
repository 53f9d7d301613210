"""Affine picture of U_ab, the near-ring ``(Map(V,W), ·_A)`` and distributivity.

Maps are :class:`FiniteMap` value tables.  ``+`` on maps is pointwise in
the target group, in the written order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from . import structure as sm
from . import subsets as ss
from .groups import FiniteGroup, GroupError
from .operators import canonical_kernel
from .subsets import MapGraph, Subset, TransversalityError, _same
from .torsors import carrier_U_ab, carrier_U_b, rng_for
from .verdict import Verdict

__all__ = [
    "FiniteMap",
    "NotHomomorphismError",
    "NotInvertibleError",
    "graph",
    "affine_product",
    "near_ring_product",
    "invertible_in_G_A",
    "quasi_inverse",
    "kernel_map",
    "check_left_distributive",
    "find_right_distributive_witness",
    "check_homomorphism_property",
    "all_maps",
    "MAP_ENUM_LIMIT",
]

MAP_ENUM_LIMIT = 4096


class NotHomomorphismError(GroupError):
    pass


class NotInvertibleError(GroupError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteMap:
    """A total map from ``domain`` to ``codomain`` (subsets of possibly different groups)."""

    domain: Subset
    codomain: Subset
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if len(vals) != len(self.domain):
            raise ValueError("one value per domain element is required")
        if any(v not in self.codomain for v in vals):
            raise ValueError("values must lie in the codomain")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "_lookup", dict(zip(self.domain.elements, vals)))

    @classmethod
    def from_function(cls, domain: Subset, codomain: Subset, f: Callable[[int], int]) -> "FiniteMap":
        return cls(domain, codomain, tuple(f(e) for e in domain.elements))

    @classmethod
    def zero(cls, domain: Subset, codomain: Subset) -> "FiniteMap":
        return cls(domain, codomain, (codomain.group.identity,) * len(domain))

    @classmethod
    def identity(cls, s: Subset) -> "FiniteMap":
        return cls(s, s, s.elements)

    @classmethod
    def from_graph(cls, m: MapGraph) -> "FiniteMap":
        return cls.from_function(m.domain, m.codomain, m)

    def to_graph(self) -> MapGraph:
        return MapGraph(self.domain, self.codomain, dict(self._lookup))

    @property
    def src(self) -> FiniteGroup:
        return self.domain.group

    @property
    def dst(self) -> FiniteGroup:
        return self.codomain.group

    def __call__(self, e: int) -> int:
        return self._lookup[e]

    def __add__(self, other: "FiniteMap") -> "FiniteMap":
        if other.domain != self.domain:
            raise ValueError("pointwise sum needs equal domains")
        g = self.dst
        cod = self.codomain if self.codomain == other.codomain else Subset.full(g)
        return FiniteMap(self.domain, cod, tuple(g.add(p, q) for p, q in zip(self.values, other.values)))

    def __neg__(self) -> "FiniteMap":
        g = self.dst
        vals = tuple(g.neg(v) for v in self.values)
        cod = self.codomain if all(v in self.codomain for v in vals) else Subset.full(g)
        return FiniteMap(self.domain, cod, vals)

    def __sub__(self, other: "FiniteMap") -> "FiniteMap":
        return self + (-other)

    def compose(self, inner: "FiniteMap") -> "FiniteMap":
        """``self ∘ inner``."""
        if any(v not in self.domain for v in inner.values):
            raise ValueError("image of the inner map escapes the outer domain")
        return FiniteMap(inner.domain, self.codomain, tuple(self._lookup[v] for v in inner.values))

    def __matmul__(self, inner: "FiniteMap") -> "FiniteMap":
        return self.compose(inner)

    def with_codomain(self, codomain: Subset) -> "FiniteMap":
        return FiniteMap(self.domain, codomain, self.values)

    @property
    def is_bijective(self) -> bool:
        """Bijective onto the codomain."""
        return len(set(self.values)) == len(self.values) == len(self.codomain)

    def inverse(self) -> "FiniteMap":
        if not self.is_bijective:
            raise ValueError("map is not bijective")
        inv = {v: e for e, v in self._lookup.items()}
        return FiniteMap(self.codomain, self.domain, tuple(inv[c] for c in self.codomain.elements))

    def is_homomorphism(self) -> bool:
        s, t = self.src, self.dst
        dom = self.domain.elements
        return all(self(s.add(p, q)) == t.add(self(p), self(q)) for p in dom for q in dom)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteMap):
            return NotImplemented
        return self.domain == other.domain and self.values == other.values

    def __hash__(self) -> int:
        return hash((self.domain, self.values))

    def __repr__(self) -> str:
        return "FiniteMap{" + ", ".join(f"{e}->{v}" for e, v in self._lookup.items()) + "}"


def graph(f: FiniteMap) -> Subset:
    """Left graph ``G_F = {η + F(η)}`` (domain and codomain in one group)."""
    return ss.graph_of_map(f.to_graph(), "left")


def all_maps(domain: Subset, codomain: Subset, limit: int = MAP_ENUM_LIMIT) -> Iterator[FiniteMap]:
    count = len(codomain) ** len(domain)
    if count > limit:
        raise ValueError(f"{count} maps exceed the enumeration limit {limit}")
    for vals in itertools.product(codomain.elements, repeat=len(domain)):
        yield FiniteMap(domain, codomain, vals)


def random_map(domain: Subset, codomain: Subset, rng: np.random.Generator) -> FiniteMap:
    c = codomain.elements
    return FiniteMap(domain, codomain, tuple(c[i] for i in rng.integers(0, len(c), len(domain))))


def kernel_map(x_map: FiniteMap, a: Subset, b: Subset) -> FiniteMap:
    """``B^{a,x,b}_y`` for ``x = G_X`` as a map ``y -> y``."""
    y = x_map.domain
    B = canonical_kernel(a, graph(x_map), y, b).B
    if B is None:
        raise TransversalityError(f"kernel needs a ⊤ y and x ⊤ b (a={a}, y={y}, b={b})")
    return FiniteMap.from_function(y, y, B)


def affine_product(x_map: FiniteMap, z_map: FiniteMap, a: Subset, y: Subset, b: Subset) -> FiniteMap:
    """The map ``X + Z ∘ B^{a,x,b}_y : y -> b`` whose graph is ``Γ(G_X, a, y, b, G_Z)``."""
    _same(a, y, b)
    for f, name in ((x_map, "X"), (z_map, "Z")):
        if f.domain != y or f.codomain != b:
            raise ValueError(f"{name} must map y to b")
    ss._require_subgroup(b)
    if not ss.is_left_transversal(y, b):
        raise TransversalityError(f"y ⊤ b fails for y={y}, b={b}")
    if not ss.is_left_transversal(a, y):
        raise TransversalityError(f"a ⊤ y fails for a={a}, y={y}")
    B = kernel_map(x_map, a, b)
    return (x_map + z_map @ B).with_codomain(b)


def _require_hom(a_hom: FiniteMap) -> None:
    if not a_hom.is_homomorphism():
        raise NotHomomorphismError(f"{a_hom} is not a group homomorphism")


def near_ring_product(x_map: FiniteMap, y_map: FiniteMap, a_hom: FiniteMap, check: bool = True) -> FiniteMap:
    """``X ·_A Y = Y + X ∘ (id_V + A ∘ Y)`` for ``X, Y: V -> W`` and ``A: W -> V``."""
    if check:
        _require_hom(a_hom)
    V = x_map.domain
    shift = FiniteMap.identity(V) + (a_hom @ y_map).with_codomain(V)
    return (y_map + x_map @ shift.with_codomain(V)).with_codomain(x_map.codomain)


def _b_of(x_map: FiniteMap, a_hom: FiniteMap) -> FiniteMap:
    V = x_map.domain
    return (FiniteMap.identity(V) + (a_hom @ x_map).with_codomain(V)).with_codomain(V)


def invertible_in_G_A(x_map: FiniteMap, a_hom: FiniteMap) -> bool:
    """Membership in ``G_A``: ``id_V + A ∘ X`` is bijective."""
    _require_hom(a_hom)
    return _b_of(x_map, a_hom).is_bijective


def quasi_inverse(x_map: FiniteMap, a_hom: FiniteMap) -> FiniteMap:
    """``X^{-1} = -X ∘ (B^X)^{-1}`` with ``B^X = id_V + A ∘ X``."""
    _require_hom(a_hom)
    B = _b_of(x_map, a_hom)
    if not B.is_bijective:
        raise NotInvertibleError(f"{x_map} is not in G_A")
    return ((-x_map) @ B.inverse()).with_codomain(x_map.codomain)


# --- distributivity ------------------------------------------------------------

def check_left_distributive(a: Subset, b: Subset, mode: str = "auto", seed: int = 0, k: int = 2000,
                            limit: int = 1 << 16, check_id: str = "affine.left-distributive") -> Verdict:
    """``(x y (uvw)_b)_ab = ((xyu)_ab (xyv)_ab (xyw)_ab)_b`` for ``x,y ∈ U_ab``, ``u,v,w ∈ U_b``."""
    uab = carrier_U_ab(a, b, verify=False)
    ub = carrier_U_b(b, verify=False)
    if uab.is_empty:
        return Verdict.ok(0, "U_ab is empty", skipped=True)
    n = a.group.order
    total = len(uab) ** 2 * len(ub) ** 3
    if mode == "auto":
        mode = "exhaustive" if total <= limit else "random"
    DA = sm.to_bool(uab.elements, n)
    DB = sm.to_bool(ub.elements, n)
    if mode == "exhaustive":
        idx = np.indices((len(uab), len(uab), len(ub), len(ub), len(ub))).reshape(5, -1)
        label = "exhaustive"
    else:
        rng = rng_for(seed, check_id)
        idx = np.stack([rng.integers(0, len(uab), k), rng.integers(0, len(uab), k)]
                       + [rng.integers(0, len(ub), k) for _ in range(3)])
        label = f"random(seed={seed},k={k})"
    X, Y = DA[idx[0]], DA[idx[1]]
    U, V, W = DB[idx[2]], DB[idx[3]], DB[idx[4]]
    bal, unb = uab.law, ub.law
    lhs = bal.evaluate_rows(X, Y, unb.evaluate_rows(U, V, W))
    rhs = unb.evaluate_rows(bal.evaluate_rows(X, Y, U), bal.evaluate_rows(X, Y, V), bal.evaluate_rows(X, Y, W))
    bad = (lhs != rhs).any(axis=1)
    if bad.any():
        i = int(np.argmax(bad))
        w = tuple(ss.format_subset(s) for s in sm.from_bool(a.group, np.stack([X[i], Y[i], U[i], V[i], W[i]])))
        return Verdict.fail(w, "left distributive law fails", len(bad), mode=label)
    return Verdict.ok(len(bad), "left distributive", mode=label)


def find_right_distributive_witness(a: Subset, b: Subset, limit: int = 1 << 16, seed: int = 0, k: int = 20_000,
                                    check_id: str = "affine.right-distributive"):
    """Search ``((uvw)_b x y)_ab`` against ``((uxy)_ab (vxy)_ab (wxy)_ab)_b``.

    ``x, y ∈ U_ab`` and ``u, v, w ∈ U_b``.  Exhaustive up to ``limit`` cases,
    otherwise ``k`` seeded samples.  Returns the first disagreeing
    ``(u, v, w, x, y)`` found, or ``None``.
    """
    uab = carrier_U_ab(a, b, verify=False)
    ub = carrier_U_b(b, verify=False)
    if uab.is_empty:
        return None
    n = a.group.order
    DA = sm.to_bool(uab.elements, n)
    DB = sm.to_bool(ub.elements, n)
    if len(uab) ** 2 * len(ub) ** 3 <= limit:
        idx = np.indices((len(ub), len(ub), len(ub), len(uab), len(uab))).reshape(5, -1)
    else:
        rng = rng_for(seed, check_id)
        idx = np.stack([rng.integers(0, len(ub), k) for _ in range(3)]
                       + [rng.integers(0, len(uab), k) for _ in range(2)])
    bal, unb = uab.law, ub.law
    for lo in range(0, idx.shape[1], 4096):
        part = idx[:, lo:lo + 4096]
        U, V, W = DB[part[0]], DB[part[1]], DB[part[2]]
        X, Y = DA[part[3]], DA[part[4]]
        lhs = bal.evaluate_rows(unb.evaluate_rows(U, V, W), X, Y)
        rhs = unb.evaluate_rows(bal.evaluate_rows(U, X, Y), bal.evaluate_rows(V, X, Y), bal.evaluate_rows(W, X, Y))
        bad = (lhs != rhs).any(axis=1)
        if bad.any():
            i = int(np.argmax(bad))
            rows = np.stack([U[i], V[i], W[i], X[i], Y[i]])
            return tuple(ss.format_subset(s) for s in sm.from_bool(a.group, rows))
    return None


def check_homomorphism_property(y: Subset, b: Subset, a_hom: FiniteMap, mode: str = "auto", seed: int = 0,
                                k: int = 500, check_id: str = "affine.kernel-homomorphism") -> Verdict:
    """Kernel composition law in the direct-product setting ``Ω = y × b``.

    ``a = G_A`` is the graph of the homomorphism ``A: b -> y`` and ``B^X =
    id_y - A ∘ X``.  For ``X, Z: y -> b`` with both kernels bijective, the
    product ``X·Z := X + Z ∘ B^X`` satisfies ``B^{X·Z} = B^Z ∘ B^X``
    (ordinary composition).  So ``X ↦ B^X`` is a homomorphism into
    ``Bij(y)`` with the opposite composition.  Also checked: the canonical
    kernel equals ``id_y - A ∘ X`` and the graph of ``X·Z`` is ``Γ(G_X, a, y, b, G_Z)``.
    """
    g = _same(y, b)
    _require_hom(a_hom)
    if a_hom.domain != b or a_hom.codomain != y:
        raise ValueError("A must map b to y")
    if not (ss.is_subgroup(y) and ss.is_subgroup(b) and ss.is_left_transversal(y, b)):
        raise ValueError("need subgroups y, b with y ⊤ b")
    if any(g.add(p, q) != g.add(q, p) for p in y.elements for q in b.elements):
        raise ValueError("y and b must commute elementwise")
    a = ss.graph_of_map(a_hom.to_graph(), "left")

    def bx(X: FiniteMap) -> FiniteMap:
        return (FiniteMap.identity(y) - (a_hom @ X).with_codomain(y)).with_codomain(y)

    count = len(b) ** len(y)
    if mode == "auto":
        mode = "exhaustive" if count ** 2 <= MAP_ENUM_LIMIT * 4 else "random"
    if mode == "exhaustive":
        maps = list(all_maps(y, b, limit=count))
        pairs = itertools.product(maps, repeat=2)
        label = "exhaustive"
    else:
        rng = rng_for(seed, check_id)
        pairs = ((random_map(y, b, rng), random_map(y, b, rng)) for _ in range(k))
        label = f"random(seed={seed},k={k})"
    checked = 0
    for X, Z in pairs:
        BX, BZ = bx(X), bx(Z)
        if kernel_map(X, a, b) != BX:
            return Verdict.fail((repr(X),), "canonical kernel differs from id - A∘X", checked, mode=label)
        if not (BX.is_bijective and BZ.is_bijective):
            continue
        XZ = (X + Z @ BX).with_codomain(b)
        if graph(XZ) != sm.gamma(graph(X), a, y, b, graph(Z)):
            return Verdict.fail((repr(X), repr(Z)), "graph of X + Z∘B^X differs from Γ", checked, mode=label)
        if bx(XZ) != BZ @ BX:
            return Verdict.fail((repr(X), repr(Z)), "B^{X·Z} differs from B^Z ∘ B^X", checked, mode=label)
        checked += 1
    return Verdict.ok(checked, "X ↦ B^X is a homomorphism into Bij(y)^op", mode=label)
