"""Finite groups given by Cayley tables.

Group law is written additively throughout: ``g.add(x, y)`` is ``x + y`` and
``g.neg(x)`` is ``-x``.  Elements are the integers ``0 .. order-1``.
"""

from __future__ import annotations

import itertools
import json
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FiniteGroup",
    "GroupError",
    "InvalidOrderError",
    "CorpusLimitError",
    "GroupValidationError",
    "NotSquareError",
    "NotClosedError",
    "NoIdentityError",
    "MissingInverseError",
    "NonAssociativeError",
    "make_cyclic",
    "make_direct_product",
    "make_symmetric",
    "make_dihedral",
    "make_quaternion",
    "from_cayley_table",
    "opposite",
    "left_cosets",
    "right_cosets",
    "is_isomorphic",
    "find_isomorphism",
    "automorphisms",
    "load_group",
    "save_group",
    "builtin_group",
    "CORPUS",
    "corpus",
    "SYMMETRIC_MAX_DEGREE",
]

SYMMETRIC_MAX_DEGREE = 5


class GroupError(ValueError):
    """Base class for group construction errors."""


class InvalidOrderError(GroupError):
    pass


class CorpusLimitError(GroupError):
    """Raised when an input exceeds the enumeration limits of the library."""


class GroupValidationError(GroupError):
    """A Cayley table failed validation.

    ``coords`` carries the (row, col) cell or element triple that failed first.
    """

    def __init__(self, message: str, coords: tuple[int, ...] | None = None):
        super().__init__(message)
        self.coords = coords


class NotSquareError(GroupValidationError):
    pass


class NotClosedError(GroupValidationError):
    pass


class NoIdentityError(GroupValidationError):
    pass


class MissingInverseError(GroupValidationError):
    pass


class NonAssociativeError(GroupValidationError):
    pass


class FiniteGroup:
    """An immutable finite group on ``0 .. order-1``.

    ``table[g, h]`` is ``g + h``.  Instances are normally built by the
    ``make_*`` constructors or :func:`from_cayley_table`, which validate the
    table; the plain constructor trusts its input.
    """

    def __init__(self, table: np.ndarray, identity: int, inv: Sequence[int], name: str = ""):
        table = np.array(table, dtype=np.int64)
        table.setflags(write=False)
        inv_arr = np.array(inv, dtype=np.int64)
        inv_arr.setflags(write=False)
        self.order = int(table.shape[0])
        self.table = table
        self.identity = int(identity)
        self.inv = inv_arr
        self.name = name
        # plain-list copies: indexing lists is much faster than numpy scalars
        self._rows = table.tolist()
        self._inv = inv_arr.tolist()

    def add(self, g: int, h: int) -> int:
        return self._rows[g][h]

    def neg(self, g: int) -> int:
        return self._inv[g]

    def sub(self, g: int, h: int) -> int:
        """``g - h``, i.e. ``g + (-h)``."""
        return self._rows[g][self._inv[h]]

    def sum(self, *terms: int) -> int:
        """Left-to-right sum of the given elements (identity for no terms)."""
        acc = self.identity
        for t in terms:
            acc = self._rows[acc][t]
        return acc

    @property
    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def center(self) -> frozenset[int]:
        t = self.table
        return frozenset(g for g in self.elements if np.array_equal(t[g, :], t[:, g]))

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce([self.element_order(g) for g in self.elements]))

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self._rows[x][g]
            k += 1
        return k

    def validate(self) -> None:
        """Re-run full table validation; raises GroupValidationError."""
        _validate_table(self.table)

    def __len__(self) -> int:
        return self.order

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.order == other.order and bool(np.array_equal(self.table, other.table))

    def __hash__(self) -> int:
        return hash((self.order, self.table.tobytes()))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"


def _locate_identity(t: np.ndarray) -> int | None:
    n = t.shape[0]
    ar = np.arange(n)
    for e in range(n):
        if np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar):
            return e
    return None


def _validate_table(raw) -> tuple[np.ndarray, int, list[int]]:
    try:
        t = np.array(raw, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise NotSquareError(f"table is not a rectangular integer array: {exc}") from None
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotSquareError(f"table must be a non-empty square array, got shape {t.shape}")
    n = t.shape[0]
    bad = np.argwhere((t < 0) | (t >= n))
    if len(bad):
        r, c = (int(v) for v in bad[0])
        raise NotClosedError(f"entry at (row {r}, col {c}) is {t[r, c]}, outside 0..{n - 1}", (r, c))
    e = _locate_identity(t)
    if e is None:
        raise NoIdentityError("no two-sided identity element")
    inv = []
    for g in range(n):
        hs = np.flatnonzero((t[g] == e) & (t[:, g] == e))
        if len(hs) == 0:
            raise MissingInverseError(f"element {g} has no inverse", (g,))
        inv.append(int(hs[0]))
    # (g+h)+k vs g+(h+k) over all triples, first failure in lexicographic order
    lhs = t[t]  # lhs[g, h, k] = t[t[g, h], k]
    rhs = t[:, t]  # rhs[g, h, k] = t[g, t[h, k]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        g, h, k = (int(v) for v in bad[0])
        raise NonAssociativeError(
            f"associativity fails for ({g}, {h}, {k}): ({g}+{h})+{k} = {lhs[g, h, k]} "
            f"but {g}+({h}+{k}) = {rhs[g, h, k]}",
            (g, h, k),
        )
    return t, e, inv


def from_cayley_table(raw, name: str = "") -> FiniteGroup:
    """Validate a square table and build the group; identity and inverses are located."""
    t, e, inv = _validate_table(raw)
    return FiniteGroup(t, e, inv, name)


def make_cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise InvalidOrderError(f"cyclic group order must be >= 1, got {n}")
    ar = np.arange(n)
    table = (ar[:, None] + ar[None, :]) % n
    return FiniteGroup(table, 0, (-ar) % n, f"Z{n}")


def make_direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """``g x h`` with ``(u, v)`` encoded as ``u * |h| + v``."""
    m = h.order
    u = np.arange(g.order * m) // m
    v = np.arange(g.order * m) % m
    table = g.table[u[:, None], u[None, :]] * m + h.table[v[:, None], v[None, :]]
    inv = g.inv[u] * m + h.inv[v]
    return FiniteGroup(table, g.identity * m + h.identity, inv, f"{g.name}x{h.name}")


def make_symmetric(n: int) -> FiniteGroup:
    """S_n on ``{0..n-1}``, elements in lexicographic order of their image tuples.

    The product is composition with the right factor applied first:
    ``(s + t)(i) = s(t(i))``.
    """
    if n < 1:
        raise InvalidOrderError(f"symmetric group degree must be >= 1, got {n}")
    if n > SYMMETRIC_MAX_DEGREE:
        raise CorpusLimitError(f"S_{n} exceeds the corpus limit S_{SYMMETRIC_MAX_DEGREE}")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    size = len(perms)
    table = np.empty((size, size), dtype=np.int64)
    for i, s in enumerate(perms):
        for j, t in enumerate(perms):
            table[i, j] = index[tuple(s[t[k]] for k in range(n))]
    inv = [0] * size
    for i, s in enumerate(perms):
        r = [0] * n
        for k, sk in enumerate(s):
            r[sk] = k
        inv[i] = index[tuple(r)]
    return FiniteGroup(table, 0, inv, f"S{n}")


def make_dihedral(n: int) -> FiniteGroup:
    """D_n of order 2n: index ``i`` is r^i, index ``n + i`` is s r^i."""
    if n < 1:
        raise InvalidOrderError(f"dihedral parameter must be >= 1, got {n}")
    size = 2 * n
    table = np.empty((size, size), dtype=np.int64)
    for p in range(size):
        fp, ip = divmod(p, n)
        for q in range(size):
            fq, iq = divmod(q, n)
            # r^i s = s r^-i
            if fq == 0:
                k = (ip + iq) % n
            else:
                k = (iq - ip) % n
            table[p, q] = ((fp + fq) % 2) * n + k
    inv = [(-i) % n if i < n else i for i in range(size)]
    return FiniteGroup(table, 0, inv, f"D{n}")


def make_quaternion() -> FiniteGroup:
    """Q8 with elements 1, i, j, k, -1, -i, -j, -k (indices 0..7)."""
    # unit products: (unit, sign) for 1, i, j, k
    unit = {
        (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
        (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
        (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
        (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
    }
    table = np.empty((8, 8), dtype=np.int64)
    for p in range(8):
        for q in range(8):
            u, s = unit[(p % 4, q % 4)]
            sign = s * (-1 if p >= 4 else 1) * (-1 if q >= 4 else 1)
            table[p, q] = u + (4 if sign < 0 else 0)
    return from_cayley_table(table, "Q8")


def opposite(g: FiniteGroup) -> FiniteGroup:
    """Same elements, law ``x +' y = y + x``."""
    name = g.name[:-3] if g.name.endswith("^op") else g.name + "^op"
    return FiniteGroup(g.table.T, g.identity, g.inv, name)


def _subgroup_elements(g: FiniteGroup, b) -> list[int]:
    # accepts a Subset or any iterable of element indices
    elems = sorted(set(int(v) for v in b))
    es = set(elems)
    if g.identity not in es or any(g.add(p, q) not in es for p in elems for q in elems):
        raise GroupError(f"{elems} is not a subgroup of {g.name}")
    return elems


def left_cosets(g: FiniteGroup, b) -> list[frozenset[int]]:
    """Cosets ``w + b`` ordered by minimal element."""
    elems = _subgroup_elements(g, b)
    seen: set[int] = set()
    out = []
    for w in g.elements:
        if w in seen:
            continue
        c = frozenset(g.add(w, beta) for beta in elems)
        seen |= c
        out.append(c)
    return out


def right_cosets(g: FiniteGroup, b) -> list[frozenset[int]]:
    """Cosets ``b + w`` ordered by minimal element."""
    elems = _subgroup_elements(g, b)
    seen: set[int] = set()
    out = []
    for w in g.elements:
        if w in seen:
            continue
        c = frozenset(g.add(beta, w) for beta in elems)
        seen |= c
        out.append(c)
    return out


def _generators(g: FiniteGroup) -> list[int]:
    gens: list[int] = []
    closure = {g.identity}
    # prefer high-order elements to keep the generating set short
    for x in sorted(g.elements, key=lambda e: -g.element_order(e)):
        if x in closure:
            continue
        gens.append(x)
        frontier = list(closure)
        while frontier:
            new = []
            for p in frontier:
                for s in gens:
                    q = g.add(p, s)
                    if q not in closure:
                        closure.add(q)
                        new.append(q)
            frontier = new
        if len(closure) == g.order:
            break
    return gens


def _homomorphisms_from_generators(g: FiniteGroup, h: FiniteGroup, injective: bool) -> Iterable[list[int]]:
    gens = _generators(g)
    orders = [g.element_order(s) for s in gens]
    candidates = [[t for t in h.elements if h.element_order(t) == o] if injective
                  else [t for t in h.elements if o % h.element_order(t) == 0] for o in orders]
    for images in itertools.product(*candidates):
        phi = [-1] * g.order
        phi[g.identity] = h.identity
        queue = [g.identity]
        ok = True
        while queue and ok:
            p = queue.pop()
            for s, t in zip(gens, images):
                q = g.add(p, s)
                val = h.add(phi[p], t)
                if phi[q] == -1:
                    phi[q] = val
                    queue.append(q)
                elif phi[q] != val:
                    ok = False
                    break
        if not ok:
            continue
        if any(phi[g.add(p, q)] != h.add(phi[p], phi[q]) for p in g.elements for q in g.elements):
            continue
        if injective and len(set(phi)) != g.order:
            continue
        yield phi


def find_isomorphism(g: FiniteGroup, h: FiniteGroup) -> list[int] | None:
    """Brute-force search over generator images; exponential, fine for small groups."""
    if g.order != h.order or g.is_abelian != h.is_abelian:
        return None
    if sorted(map(g.element_order, g.elements)) != sorted(map(h.element_order, h.elements)):
        return None
    return next(iter(_homomorphisms_from_generators(g, h, injective=True)), None)


def is_isomorphic(g: FiniteGroup, h: FiniteGroup) -> bool:
    return find_isomorphism(g, h) is not None


def automorphisms(g: FiniteGroup) -> list[tuple[int, ...]]:
    """All automorphisms of ``g`` as image tuples, sorted."""
    return sorted({tuple(phi) for phi in _homomorphisms_from_generators(g, g, injective=True)})


def builtin_group(name: str) -> FiniteGroup:
    """Resolve ``z<n>``, ``s<n>``, ``d<n>``, ``q8``, ``k4`` and products like ``z2xz4``."""
    key = name.strip().lower()
    if "x" in key:
        parts = key.split("x")
        out = builtin_group(parts[0])
        for p in parts[1:]:
            out = make_direct_product(out, builtin_group(p))
        return out
    if key == "q8":
        return make_quaternion()
    if key == "k4":
        k = make_direct_product(make_cyclic(2), make_cyclic(2))
        k.name = "K4"
        return k
    if len(key) >= 2 and key[0] in "zsd" and key[1:].isdigit():
        n = int(key[1:])
        return {"z": make_cyclic, "s": make_symmetric, "d": make_dihedral}[key[0]](n)
    raise KeyError(f"unknown builtin group {name!r}")


def load_group(path: str | Path) -> FiniteGroup:
    """Read ``{"name": ..., "table": [[...]]}``; validation errors carry coordinates."""
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict) or "table" not in data:
        raise GroupValidationError(f"{path}: expected an object with a 'table' field")
    return from_cayley_table(data["table"], str(data.get("name", Path(path).stem)))


def save_group(g: FiniteGroup, path: str | Path) -> None:
    Path(path).write_text(json.dumps({"name": g.name, "table": g.table.tolist()}))


# Small groups used by the test and acceptance suites.
CORPUS = ("z2", "z3", "z4", "z5", "z6", "z7", "z8", "k4", "z2xz4", "z2xz2xz2", "s3", "d4", "q8",
          "z9", "z3xz3", "d5", "z2xs3", "z4xz4")


def corpus(max_order: int | None = None) -> list[FiniteGroup]:
    gs = [builtin_group(n) for n in CORPUS]
    return [g for g in gs if max_order is None or g.order <= max_order]
