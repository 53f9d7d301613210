"""Subsets of a finite group as bitsets, and the set-level algebra on them.

A :class:`Subset` stores membership in an ``int`` bitmask (bit ``i`` set iff
element ``i`` belongs).  The empty set is a legal subset everywhere.

Transversality follows the left convention: ``is_left_transversal(x, y)``
(``x ⊤ y``) holds when every element factors uniquely as ``ξ + η`` with
``ξ ∈ x``, ``η ∈ y``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

from .groups import CorpusLimitError, FiniteGroup, GroupError, left_cosets, right_cosets

__all__ = [
    "Subset",
    "MapGraph",
    "GroupMismatchError",
    "TransversalityError",
    "parse_subset",
    "format_subset",
    "all_subsets",
    "sumset",
    "sumset_rows",
    "negate",
    "meet",
    "is_left_transversal",
    "in_left_complements",
    "in_right_complements",
    "is_subgroup",
    "generated_subgroup",
    "grassmannian",
    "grassmannian_bruteforce",
    "left_transversal_set",
    "right_transversal_set",
    "graph_of_map",
    "map_from_transversal",
    "maps_between",
    "GRASSMANNIAN_MAX_ORDER",
    "SECTION_LIMIT",
]

GRASSMANNIAN_MAX_ORDER = 120
SECTION_LIMIT = 1 << 16


class GroupMismatchError(ValueError):
    pass


class TransversalityError(ValueError):
    """A transversality hypothesis failed; the message names the pair."""


@dataclass(frozen=True, eq=False)
class Subset:
    group: FiniteGroup
    bits: int

    @classmethod
    def of(cls, group: FiniteGroup, elements: Iterable[int]) -> "Subset":
        bits = 0
        for e in elements:
            e = int(e)
            if not 0 <= e < group.order:
                raise ValueError(f"element {e} out of range for {group.name} (order {group.order})")
            bits |= 1 << e
        return cls(group, bits)

    @classmethod
    def full(cls, group: FiniteGroup) -> "Subset":
        return cls(group, (1 << group.order) - 1)

    @classmethod
    def empty(cls, group: FiniteGroup) -> "Subset":
        return cls(group, 0)

    @classmethod
    def singleton(cls, group: FiniteGroup, e: int) -> "Subset":
        return cls.of(group, [e])

    @classmethod
    def identity(cls, group: FiniteGroup) -> "Subset":
        return cls(group, 1 << group.identity)

    @property
    def elements(self) -> tuple[int, ...]:
        b, out, i = self.bits, [], 0
        while b:
            if b & 1:
                out.append(i)
            b >>= 1
            i += 1
        return tuple(out)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __len__(self) -> int:
        return self.bits.bit_count() if hasattr(int, "bit_count") else bin(self.bits).count("1")

    def __contains__(self, e: object) -> bool:
        return isinstance(e, (int, np.integer)) and 0 <= e < self.group.order and bool(self.bits >> int(e) & 1)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subset):
            return NotImplemented
        return self.bits == other.bits and (self.group is other.group or self.group == other.group)

    def __hash__(self) -> int:
        return hash(self.bits)

    def __and__(self, other: "Subset") -> "Subset":
        _same(self, other)
        return Subset(self.group, self.bits & other.bits)

    def __or__(self, other: "Subset") -> "Subset":
        _same(self, other)
        return Subset(self.group, self.bits | other.bits)

    def __le__(self, other: "Subset") -> bool:
        _same(self, other)
        return self.bits & ~other.bits == 0

    def __add__(self, other: "Subset") -> "Subset":
        return sumset(self, other)

    def __neg__(self) -> "Subset":
        return negate(self)

    @property
    def sort_key(self) -> tuple[int, int]:
        return (len(self), self.bits)

    def to_array(self) -> np.ndarray:
        return np.array([bool(self.bits >> i & 1) for i in range(self.group.order)])

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self.elements)) + "}"


def _same(*subsets: Subset) -> FiniteGroup:
    g = subsets[0].group
    for s in subsets[1:]:
        if s.group is not g and s.group != g:
            raise GroupMismatchError(f"subsets belong to different groups: {g.name} vs {s.group.name}")
    return g


def parse_subset(group: FiniteGroup, text: str) -> Subset:
    """Parse ``"0,2,4"`` (empty string or ``"{}"`` gives the empty set)."""
    text = text.strip().strip("{}").strip()
    if not text:
        return Subset.empty(group)
    try:
        elems = [int(tok) for tok in text.split(",")]
    except ValueError:
        raise ValueError(f"malformed subset literal {text!r}") from None
    return Subset.of(group, elems)


def format_subset(s: Subset) -> str:
    return ",".join(map(str, s.elements))


def all_subsets(group: FiniteGroup) -> list[Subset]:
    """Every subset, in bit-pattern order; 2^n of them."""
    if group.order > 20:
        raise CorpusLimitError(f"refusing to enumerate 2^{group.order} subsets")
    return [Subset(group, b) for b in range(1 << group.order)]


def _cache(group: FiniteGroup, name: str) -> dict:
    d = group.__dict__.get(name)
    if d is None:
        d = group.__dict__[name] = {}
    return d


def _left_translate_mask(group: FiniteGroup, g: int, bits: int) -> int:
    row = group._rows[g]
    out, i = 0, 0
    while bits:
        if bits & 1:
            out |= 1 << row[i]
        bits >>= 1
        i += 1
    return out


def sumset(x: Subset, y: Subset) -> Subset:
    """``x + y = {ξ + η}``; empty if either operand is empty."""
    g = _same(x, y)
    cache = _cache(g, "_sumset_cache")
    key = (x.bits, y.bits)
    hit = cache.get(key)
    if hit is None:
        hit = 0
        for xi in x.elements:
            hit |= _left_translate_mask(g, xi, y.bits)
        if len(cache) < 1 << 18:
            cache[key] = hit
    return Subset(g, hit)


def sumset_rows(group: FiniteGroup, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Row-wise sumsets of membership matrices ``(k, n)``."""
    X = np.atleast_2d(X)
    Y = np.atleast_2d(Y)
    t = group.table
    # (x + y)[ω] iff some ξ ∈ x has -ξ + ω ∈ y
    shift = t[np.asarray(group.inv)]  # shift[ξ, ω] = -ξ + ω
    k = max(X.shape[0], Y.shape[0])
    n = group.order
    out = np.empty((k, n), dtype=bool)
    step = max(1, (1 << 22) // (n * n))
    for lo in range(0, k, step):
        xs = X if X.shape[0] == 1 else X[lo:lo + step]
        ys = Y if Y.shape[0] == 1 else Y[lo:lo + step]
        res = (xs[:, :, None] & ys[:, shift]).any(axis=1)
        out[lo:lo + step] = res
    return out


def negate(x: Subset) -> Subset:
    g = x.group
    return Subset.of(g, (g.neg(e) for e in x.elements))


def meet(x: Subset, y: Subset) -> Subset:
    return x & y


def is_left_transversal(x: Subset, y: Subset) -> bool:
    """``x ⊤ y``: ``(ξ, η) -> ξ + η`` is a bijection ``x × y -> Ω``."""
    g = _same(x, y)
    if len(x) * len(y) != g.order:
        return False
    return sumset(x, y).bits == (1 << g.order) - 1


def in_left_complements(x: Subset, b: Subset) -> bool:
    """Membership ``x ∈ ^⊤b``, i.e. ``x ⊤ b``."""
    return is_left_transversal(x, b)


def in_right_complements(x: Subset, a: Subset) -> bool:
    """Membership ``x ∈ a^⊤``, i.e. ``a ⊤ x``."""
    return is_left_transversal(a, x)


def is_subgroup(x: Subset) -> bool:
    g = x.group
    if not x.bits >> g.identity & 1:
        return False
    elems = x.elements
    bits = x.bits
    for p in elems:
        if not bits >> g.neg(p) & 1:
            return False
        row = g._rows[p]
        for q in elems:
            if not bits >> row[q] & 1:
                return False
    return True


def generated_subgroup(group: FiniteGroup, gens: Iterable[int]) -> Subset:
    gens = list(gens)
    closure = {group.identity}
    frontier = [group.identity]
    while frontier:
        new = []
        for p in frontier:
            for s in gens:
                q = group.add(p, s)
                if q not in closure:
                    closure.add(q)
                    new.append(q)
        frontier = new
    return Subset.of(group, closure)


def grassmannian(group: FiniteGroup, max_order: int = GRASSMANNIAN_MAX_ORDER) -> list[Subset]:
    """All subgroups, sorted by (size, bit pattern).

    Built by closure: start from the cyclic subgroups and add joins of pairs
    until nothing new appears.
    """
    if group.order > max_order:
        raise CorpusLimitError(f"{group.name} has order {group.order} > {max_order}")
    cache = _cache(group, "_grassmannian")
    if "all" in cache:
        return list(cache["all"])
    found: dict[int, Subset] = {}
    for e in group.elements:
        s = generated_subgroup(group, [e])
        found[s.bits] = s
    frontier = list(found.values())
    cyclic = list(found.values())
    while frontier:
        new = []
        for h in frontier:
            for c in cyclic:
                if c.bits & ~h.bits == 0:
                    continue
                j = generated_subgroup(group, h.elements + c.elements)
                if j.bits not in found:
                    found[j.bits] = j
                    new.append(j)
        frontier = new
    out = sorted(found.values(), key=lambda s: s.sort_key)
    cache["all"] = tuple(out)
    return out


def grassmannian_bruteforce(group: FiniteGroup) -> list[Subset]:
    """Reference implementation: filter all 2^n subsets."""
    return sorted((s for s in all_subsets(group) if is_subgroup(s)), key=lambda s: s.sort_key)


def _require_subgroup(b: Subset, what: str = "b") -> None:
    if not is_subgroup(b):
        raise GroupError(f"{what} = {b} is not a subgroup of {b.group.name}")


def _sections(cosets: list[frozenset[int]], group: FiniteGroup, limit: int) -> list[Subset]:
    count = 1
    for c in cosets:
        count *= len(c)
    if count > limit:
        raise CorpusLimitError(f"{count} sections exceed the enumeration limit {limit}")
    choices = [sorted(c) for c in cosets]
    out = []
    for pick in itertools.product(*choices):
        bits = 0
        for e in pick:
            bits |= 1 << e
        out.append(Subset(group, bits))
    out.sort(key=lambda s: s.bits)
    return out


def left_transversal_set(b: Subset, limit: int = SECTION_LIMIT) -> list[Subset]:
    """``^⊤b``: all ``x`` with ``x ⊤ b``, one representative per left coset ``ω + b``.

    Exactly ``|b| ** [Ω:b]`` subsets, sorted by bit pattern.
    """
    _require_subgroup(b)
    return _sections(left_cosets(b.group, b.elements), b.group, limit)


def right_transversal_set(a: Subset, limit: int = SECTION_LIMIT) -> list[Subset]:
    """``a^⊤``: all ``x`` with ``a ⊤ x``, one representative per right coset ``a + ω``."""
    _require_subgroup(a, "a")
    return _sections(right_cosets(a.group, a.elements), a.group, limit)


@dataclass(frozen=True)
class MapGraph:
    """A map ``F: domain -> codomain`` between subsets of one group."""

    domain: Subset
    codomain: Subset
    assignment: Mapping[int, int]

    def __post_init__(self):
        if set(self.assignment) != set(self.domain.elements):
            raise ValueError("assignment must be defined exactly on the domain")
        if any(v not in self.codomain for v in self.assignment.values()):
            raise ValueError("assignment values must lie in the codomain")

    def __call__(self, e: int) -> int:
        return self.assignment[e]

    @classmethod
    def zero(cls, domain: Subset, codomain: Subset) -> "MapGraph":
        o = domain.group.identity
        return cls(domain, codomain, {e: o for e in domain.elements})


def graph_of_map(f: MapGraph, side: str = "left") -> Subset:
    """Left graph ``{η + F(η)}`` or right graph ``{F(η) + η}``."""
    g = f.domain.group
    if side == "left":
        return Subset.of(g, (g.add(e, f(e)) for e in f.domain.elements))
    if side == "right":
        return Subset.of(g, (g.add(f(e), e) for e in f.domain.elements))
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def map_from_transversal(x: Subset, y: Subset, b: Subset) -> MapGraph:
    """The unique ``F: y -> b`` whose left graph is ``x`` (needs ``x, y ⊤ b``)."""
    g = _same(x, y, b)
    _require_subgroup(b)
    if not is_left_transversal(y, b):
        raise TransversalityError(f"y ⊤ b fails for y={y}, b={b}")
    if not is_left_transversal(x, b):
        raise TransversalityError(f"x ⊤ b fails for x={x}, b={b}")
    rep = {}
    for xi in x.elements:
        for beta in b.elements:
            rep[g.add(xi, beta)] = xi
    assignment = {}
    for eta in y.elements:
        assignment[eta] = g.add(g.neg(eta), rep[eta])
    return MapGraph(y, b, assignment)


def maps_between(domain: Subset, codomain: Subset) -> Iterator[MapGraph]:
    """Every map ``domain -> codomain`` (``|codomain| ** |domain|`` of them)."""
    dom = domain.elements
    for values in itertools.product(codomain.elements, repeat=len(dom)):
        yield MapGraph(domain, codomain, dict(zip(dom, values)))
