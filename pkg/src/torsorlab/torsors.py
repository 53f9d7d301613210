"""Ternary laws on subsets, torsor/semitorsor checks and the carriers U_ab, U_b."""

from __future__ import annotations

import itertools
import zlib
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import structure as sm
from . import subsets as ss
from .groups import FiniteGroup, GroupError, GroupValidationError, automorphisms, from_cayley_table, is_isomorphic
from .subsets import Subset, TransversalityError, _same
from .verdict import Verdict

__all__ = [
    "TernaryLaw",
    "TorsorCarrier",
    "PowerSet",
    "CarrierError",
    "TorsorLawError",
    "balanced_law",
    "balanced_check_law",
    "unbalanced_law",
    "unbalanced_check_law",
    "opposite_law",
    "pointwise_law",
    "check_para_associativity",
    "check_idempotent",
    "carrier_U_ab",
    "carrier_U_ba_check",
    "carrier_U_b",
    "group_torsor",
    "group_from_basepoint",
    "compose_relations",
    "subgroup_as_group",
    "automorphism_group",
    "check_transversal_triple",
    "find_transversal_triples",
    "torsor_graph",
    "rng_for",
    "EXHAUSTIVE_LIMIT",
]

# 5-tuple scans are exhaustive when |domain|**5 stays below this
EXHAUSTIVE_LIMIT = 1 << 20


class CarrierError(GroupError):
    pass


class TorsorLawError(GroupError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def rng_for(seed: int, check_id: str) -> np.random.Generator:
    """Independent stream per (master seed, check id)."""
    return np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), zlib.crc32(check_id.encode())]))


@dataclass(frozen=True)
class TernaryLaw:
    """A named ternary operation on subsets of one group.

    ``batch`` (optional) evaluates the law on membership matrices and is
    used for bulk checks; it must agree with ``fn``.
    """

    label: str
    group: FiniteGroup
    fn: Callable[[Subset, Subset, Subset], Subset]
    flavor: str = "custom"
    batch: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray] | None = None

    def __call__(self, x: Subset, y: Subset, z: Subset) -> Subset:
        return self.fn(x, y, z)

    def evaluate_rows(self, X: np.ndarray, Y: np.ndarray, Z: np.ndarray) -> np.ndarray:
        if self.batch is not None:
            return self.batch(X, Y, Z)
        g = self.group
        xs, ys, zs = (sm.from_bool(g, M) for M in (X, Y, Z))
        return sm.to_bool([self.fn(x, y, z) for x, y, z in zip(xs, ys, zs)], g.order)


def balanced_law(a: Subset, b: Subset) -> TernaryLaw:
    """``(xyz)_ab = Γ(x,a,y,b,z)``."""
    g = _same(a, b)
    A, B = a.to_array(), b.to_array()
    return TernaryLaw(
        f"(xyz)_ab a={a} b={b}", g,
        lambda x, y, z: sm.gamma(x, a, y, b, z),
        "balanced",
        lambda X, Y, Z: sm.gamma_batch(g, X, A, Y, B, Z),
    )


def balanced_check_law(a: Subset, b: Subset) -> TernaryLaw:
    """``Γ̌(x,a,y,b,z)``."""
    g = _same(a, b)
    A, B = a.to_array(), b.to_array()
    return TernaryLaw(
        f"(xyz)^_ab a={a} b={b}", g,
        lambda x, y, z: sm.gamma_check(x, a, y, b, z),
        "balanced-check",
        lambda X, Y, Z: sm.gamma_check_batch(g, X, A, Y, B, Z),
    )


def unbalanced_law(b: Subset) -> TernaryLaw:
    """``(xyz)_b = Σ(b,x,y,z)``."""
    g = b.group
    B = b.to_array()
    return TernaryLaw(
        f"(xyz)_b b={b}", g,
        lambda x, y, z: sm.sigma(b, x, y, z),
        "unbalanced",
        lambda X, Y, Z: sm.sigma_batch(g, B, X, Y, Z),
    )


def unbalanced_check_law(b: Subset) -> TernaryLaw:
    g = b.group
    B = b.to_array()
    return TernaryLaw(
        f"(xyz)^_b b={b}", g,
        lambda x, y, z: sm.sigma_check(b, x, y, z),
        "unbalanced-check",
        lambda X, Y, Z: sm.sigma_check_batch(g, B, X, Y, Z),
    )


def opposite_law(law: TernaryLaw) -> TernaryLaw:
    """``(xyz)^opp = (zyx)``."""
    batch = None if law.batch is None else (lambda X, Y, Z: law.batch(Z, Y, X))
    return TernaryLaw(f"opp({law.label})", law.group, lambda x, y, z: law.fn(z, y, x),
                      f"opposite-of({law.label})", batch)


def pointwise_law(group: FiniteGroup) -> TernaryLaw:
    """``x - y + z`` by sumsets; on singletons this is the group torsor."""
    return TernaryLaw("x-y+z", group, lambda x, y, z: ss.sumset(ss.sumset(x, ss.negate(y)), z), "pointwise")


class PowerSet:
    """Stand-in domain for all of 𝒫(Ω), sampled without materialising it."""

    def __init__(self, group: FiniteGroup):
        self.group = group

    def __len__(self) -> int:
        return 1 << self.group.order

    def materialise(self) -> list[Subset]:
        return ss.all_subsets(self.group)


Domain = Sequence[Subset] | PowerSet


def _fmt(*subsets: Subset) -> tuple[str, ...]:
    return tuple(ss.format_subset(s) for s in subsets)


def _law_table(law: TernaryLaw, dom: Sequence[Subset]) -> tuple[np.ndarray, bool]:
    """Indices into ``dom`` of law(d_i, d_j, d_k); -1 where the value leaves ``dom``."""
    g = law.group
    m = len(dom)
    D = sm.to_bool(list(dom), g.order)
    I, J, K = (a.ravel() for a in np.indices((m, m, m)))
    vals = law.evaluate_rows(D[I], D[J], D[K])
    if g.order <= 62:
        lookup = {int(b): i for i, b in enumerate(sm.masks_of(D))}
        codes = sm.masks_of(vals)
        idx = np.fromiter((lookup.get(int(c), -1) for c in codes), dtype=np.int64, count=len(codes))
    else:
        lookup = {s.bits: i for i, s in enumerate(dom)}
        idx = np.array([lookup.get(s.bits, -1) for s in sm.from_bool(g, vals)], dtype=np.int64)
    idx = idx.reshape(m, m, m)
    return idx, bool((idx >= 0).all())


def check_para_associativity(law: TernaryLaw, domain: Domain, mode: str = "auto", seed: int = 0,
                             k: int = 10_000, check_id: str = "para-associativity") -> Verdict:
    """Check ``(xy(zuv)) = (x(uzy)v) = ((xyz)uv)`` on ``domain``.

    ``mode`` is ``exhaustive``, ``random`` (``k`` seeded 5-tuples) or ``auto``
    (exhaustive when ``|domain|**5 <= EXHAUSTIVE_LIMIT``).  Exhaustive mode
    needs the domain to be closed under the law.
    """
    size = len(domain)
    if size == 0:
        raise ValueError("domain must be nonempty")
    if mode == "auto":
        mode = "exhaustive" if size ** 5 <= EXHAUSTIVE_LIMIT else "random"
    if mode == "exhaustive":
        dom = domain.materialise() if isinstance(domain, PowerSet) else list(domain)
        T, closed = _law_table(law, dom)
        if closed:
            return _para_from_table(T, dom)
        return _para_rows(law, dom, np.indices((size,) * 5).reshape(5, -1).T, "exhaustive")
    if mode != "random":
        raise ValueError(f"unknown mode {mode!r}")
    rng = rng_for(seed, check_id)
    if isinstance(domain, PowerSet):
        n = law.group.order
        rows = rng.random((5, k, n)) < 0.5
        return _para_bool(law, rows, f"random(seed={seed},k={k})")
    dom = list(domain)
    idx = rng.integers(0, size, size=(k, 5))
    return _para_rows(law, dom, idx, f"random(seed={seed},k={k})")


def _para_from_table(T: np.ndarray, dom: Sequence[Subset]) -> Verdict:
    m = T.shape[0]
    Y, Z, U, V = np.indices((m,) * 4)
    inner1 = T[Z, U, V]
    inner2 = T[U, Z, Y]
    checked = 0
    for x in range(m):
        p = T[x, Y, inner1]
        q = T[x, inner2, V]
        r = T[T[x, Y, Z], U, V]
        bad = (p != q) | (p != r)
        checked += bad.size
        if bad.any():
            y, z, u, v = np.unravel_index(int(np.argmax(bad)), bad.shape)
            w = (x, int(y), int(z), int(u), int(v))
            sides = tuple(ss.format_subset(dom[int(s[y, z, u, v])]) for s in (p, q, r))
            return Verdict.fail(_fmt(*(dom[i] for i in w)), "para-associativity fails", checked,
                                sides=sides, mode="exhaustive")
    return Verdict.ok(checked, "para-associative", mode="exhaustive")


def _para_bool(law: TernaryLaw, rows: np.ndarray, mode: str) -> Verdict:
    X, Y, Z, U, V = rows
    p = law.evaluate_rows(X, Y, law.evaluate_rows(Z, U, V))
    q = law.evaluate_rows(X, law.evaluate_rows(U, Z, Y), V)
    r = law.evaluate_rows(law.evaluate_rows(X, Y, Z), U, V)
    bad = (p != q).any(axis=1) | (p != r).any(axis=1)
    if bad.any():
        g = law.group
        # lexicographically first failing tuple among the sampled ones
        cand = np.flatnonzero(bad)
        keys = [tuple(sm.masks_of(rows[:, i]).tolist()) if g.order <= 62 else i for i in cand]
        i = int(cand[min(range(len(cand)), key=lambda j: keys[j])])
        w = sm.from_bool(g, rows[:, i])
        sides = tuple(ss.format_subset(s) for s in sm.from_bool(g, np.stack([p[i], q[i], r[i]])))
        return Verdict.fail(_fmt(*w), "para-associativity fails", len(bad), sides=sides, mode=mode)
    return Verdict.ok(len(bad), "para-associative", mode=mode)


def _para_rows(law: TernaryLaw, dom: Sequence[Subset], idx: np.ndarray, mode: str) -> Verdict:
    D = sm.to_bool(list(dom), law.group.order)
    order = np.lexsort(idx.T[::-1])
    idx = idx[order]
    best = None
    total = 0
    for lo in range(0, len(idx), 4096):
        chunk = idx[lo:lo + 4096]
        v = _para_bool(law, D[chunk.T], mode)
        total += v.checked
        if not v.passed and best is None:
            best = v
            break
    if best is not None:
        best.checked = total
        return best
    return Verdict.ok(total, "para-associative", mode=mode)


def check_idempotent(law: TernaryLaw, domain: Sequence[Subset]) -> Verdict:
    """Check ``(xxy) = y = (yxx)`` for all pairs of the domain."""
    dom = domain.materialise() if isinstance(domain, PowerSet) else list(domain)
    if not dom:
        raise ValueError("domain must be nonempty")
    g = law.group
    D = sm.to_bool(dom, g.order)
    I, J = (a.ravel() for a in np.indices((len(dom), len(dom))))
    left = law.evaluate_rows(D[I], D[I], D[J])
    right = law.evaluate_rows(D[J], D[I], D[I])
    target = D[J]
    bad = (left != target).any(axis=1) | (right != target).any(axis=1)
    if bad.any():
        i = int(np.argmax(bad))
        x, y = dom[I[i]], dom[J[i]]
        return Verdict.fail(_fmt(x, y), "idempotency fails", len(bad),
                            sides=_fmt(law(x, x, y), y, law(y, x, x)))
    return Verdict.ok(len(bad), "idempotent")


@dataclass
class TorsorCarrier:
    elements: list[Subset]
    law: TernaryLaw
    label: str
    params: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def is_empty(self) -> bool:
        return not self.elements

    def index(self, x: Subset) -> int:
        return self.elements.index(x)


def _check_closed(law: TernaryLaw, elements: list[Subset], label: str) -> None:
    if not elements:
        return
    T, closed = _law_table(law, elements)
    if not closed:
        i, j, k = (int(v) for v in np.argwhere(T < 0)[0])
        raise CarrierError(f"{label} is not closed: law{_fmt(elements[i], elements[j], elements[k])} leaves it")


def carrier_U_ab(a: Subset, b: Subset, verify: bool = True) -> TorsorCarrier:
    """``U_ab = a^⊤ ∩ ^⊤b`` with the balanced law (possibly empty)."""
    _same(a, b)
    ss._require_subgroup(a, "a")
    ss._require_subgroup(b, "b")
    elems = [x for x in ss.left_transversal_set(b) if ss.in_right_complements(x, a)]
    c = TorsorCarrier(elems, balanced_law(a, b), f"U_ab a={a} b={b}", {"a": a, "b": b})
    if verify:
        _check_closed(c.law, elems, c.label)
    return c


def carrier_U_ba_check(a: Subset, b: Subset) -> TorsorCarrier:
    """The same set as U_ab carrying ``(x,y,z) -> Γ̌(x,b,y,a,z)``."""
    u = carrier_U_ab(a, b, verify=False)
    law = balanced_check_law(b, a)
    return TorsorCarrier(u.elements, law, f"U^_ba a={a} b={b}", {"a": a, "b": b})


def carrier_U_b(b: Subset, verify: bool = True) -> TorsorCarrier:
    """``U_b = ^⊤b`` with the unbalanced law."""
    elems = ss.left_transversal_set(b)
    c = TorsorCarrier(elems, unbalanced_law(b), f"U_b b={b}", {"b": b})
    if verify:
        _check_closed(c.law, elems, c.label)
    return c


def group_torsor(g: FiniteGroup) -> TorsorCarrier:
    """Ω itself as a torsor, carried by the singletons with ``x - y + z``."""
    return TorsorCarrier([Subset.singleton(g, e) for e in g.elements], pointwise_law(g), f"torsor {g.name}")


def group_from_basepoint(c: TorsorCarrier, y: Subset) -> FiniteGroup:
    """Group on ``c.elements`` with ``x * z = (x y z)`` and neutral ``y``."""
    if y not in c.elements:
        raise ValueError(f"basepoint {y} is not in {c.label}")
    T, closed = _law_table(c.law, c.elements)
    if not closed:
        raise TorsorLawError(f"{c.label} is not closed under its law")
    j = c.index(y)
    table = T[:, j, :]
    try:
        grp = from_cayley_table(table, name=f"({c.label}, {y})")
    except GroupValidationError as exc:
        coords = exc.coords
        witness = None if coords is None else tuple(ss.format_subset(c.elements[i]) for i in coords)
        raise TorsorLawError(f"basepointed law is not a group: {exc}", witness) from exc
    if grp.identity != j:
        raise TorsorLawError(f"basepoint {y} is not neutral", (ss.format_subset(y),))
    return grp


# --- relations -----------------------------------------------------------

def _pair_coords(a: Subset, b: Subset) -> tuple[np.ndarray, np.ndarray]:
    """For ``a ⊤ b``: index of α and β in ``ω = α + β``, per ω."""
    g = _same(a, b)
    if not ss.is_left_transversal(a, b):
        raise TransversalityError(f"a ⊤ b fails for a={a}, b={b}")
    ai = np.empty(g.order, dtype=np.int64)
    bi = np.empty(g.order, dtype=np.int64)
    for i, alpha in enumerate(a.elements):
        for j, beta in enumerate(b.elements):
            w = g.add(alpha, beta)
            ai[w], bi[w] = i, j
    return ai, bi


def compose_relations(x: Subset, y: Subset, z: Subset, a: Subset, b: Subset) -> Subset:
    """``z ∘ y⁻¹ ∘ x`` for relations from ``a`` to ``b``, read through ``ω = α + β``."""
    g = _same(x, y, z, a, b)
    ai, bi = _pair_coords(a, b)
    p, q = len(a), len(b)

    def rel(s: Subset) -> np.ndarray:
        m = np.zeros((p, q), dtype=np.int64)
        for w in s.elements:
            m[ai[w], bi[w]] = 1
        return m

    comp = (rel(x) @ rel(y).T @ rel(z)) > 0
    al, be = a.elements, b.elements
    return Subset.of(g, (g.add(al[i], be[j]) for i, j in zip(*np.nonzero(comp))))


# --- transversal triples ---------------------------------------------------

def subgroup_as_group(a: Subset) -> tuple[FiniteGroup, tuple[int, ...]]:
    """The subgroup ``a`` as a standalone group plus the embedding of its indices."""
    ss._require_subgroup(a, "a")
    g = a.group
    elems = a.elements
    pos = {e: i for i, e in enumerate(elems)}
    table = [[pos[g.add(p, q)] for q in elems] for p in elems]
    return from_cayley_table(table, name=f"<{a}>"), elems


def automorphism_group(h: FiniteGroup) -> FiniteGroup:
    """Aut(h) under composition ``(f g)(e) = f(g(e))``."""
    autos = automorphisms(h)
    pos = {f: i for i, f in enumerate(autos)}
    table = [[pos[tuple(f[e] for e in g_)] for g_ in autos] for f in autos]
    return from_cayley_table(table, name=f"Aut({h.name})")


def _commute_elementwise(a: Subset, b: Subset) -> bool:
    g = a.group
    return all(g.add(p, q) == g.add(q, p) for p in a.elements for q in b.elements)


def check_transversal_triple(a: Subset, b: Subset, c: Subset) -> tuple[Verdict, FiniteGroup | None]:
    """Test the transversal-triple hypotheses and, when they hold, the Aut(a) model.

    Returns ``(verdict, group)`` where ``group`` is the basepointed group on
    ``U'_ab = U_ab ∩ Gras(Ω)`` (basepoint ``c``) or ``None``.
    """
    _same(a, b, c)
    for s, name in ((a, "a"), (b, "b"), (c, "c")):
        if not ss.is_subgroup(s):
            return Verdict.fail(_fmt(a, b, c), f"{name} is not a subgroup"), None
    if not _commute_elementwise(a, b):
        return Verdict.fail(_fmt(a, b, c), "a and b do not commute elementwise"), None
    for l, r, name in ((a, b, "a ⊤ b"), (b, c, "b ⊤ c"), (c, a, "c ⊤ a")):
        if not ss.is_left_transversal(l, r):
            return Verdict.fail(_fmt(a, b, c), f"{name} fails"), None
    u = carrier_U_ab(a, b, verify=False)
    prime = TorsorCarrier([x for x in u.elements if ss.is_subgroup(x)], u.law, f"U'_ab a={a} b={b}")
    if c not in prime.elements:
        return Verdict.fail(_fmt(a, b, c), "c is not in U'_ab"), None
    try:
        grp = group_from_basepoint(prime, c)
    except TorsorLawError as exc:
        return Verdict.fail(exc.witness, str(exc)), None
    aut = automorphism_group(subgroup_as_group(a)[0])
    if not is_isomorphic(grp, aut):
        return Verdict.fail(_fmt(a, b, c), f"U'_ab has order {grp.order}, Aut(a) has order {aut.order}"), grp
    return Verdict.ok(len(prime), f"U'_ab ≅ Aut(a), order {grp.order}"), grp


def find_transversal_triples(g: FiniteGroup, nontrivial: bool = True) -> list[tuple[Subset, Subset, Subset]]:
    """All subgroup triples satisfying the transversal-triple hypotheses."""
    gras = ss.grassmannian(g)
    out = []
    for a, b in itertools.product(gras, repeat=2):
        if nontrivial and (len(a) == 1 or len(b) == 1):
            continue
        if not ss.is_left_transversal(a, b) or not _commute_elementwise(a, b):
            continue
        for c in gras:
            if ss.is_left_transversal(b, c) and ss.is_left_transversal(c, a):
                out.append((a, b, c))
    return out


def torsor_graph(c: TorsorCarrier) -> frozenset[tuple[Subset, Subset, Subset, Subset]]:
    """``{(x, y, z, w) | w = (xyz)}``."""
    if c.is_empty:
        return frozenset()
    T, closed = _law_table(c.law, c.elements)
    if not closed:
        raise TorsorLawError(f"{c.label} is not closed under its law")
    e = c.elements
    m = len(e)
    return frozenset((e[i], e[j], e[k], e[int(T[i, j, k])])
                     for i, j, k in itertools.product(range(m), repeat=3))
