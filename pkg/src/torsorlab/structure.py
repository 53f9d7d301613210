"""Structure maps Γ, Γ̌, Σ, Σ̌ and the structure space.

Scalar entry points (``gamma``, ``sigma`` ...) take :class:`Subset` arguments.
The ``*_batch`` kernels evaluate many argument tuples at once on boolean
membership matrices of shape ``(k, n)``; a 1-D row broadcasts over ``k``.

The structure-space functions (``structure_space``, ``gamma_oracle``) are
written independently of the evaluation kernels and serve as their oracle.
"""

from __future__ import annotations

import itertools
import re
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .groups import FiniteGroup, opposite
from .subsets import Subset, _same
from .verdict import Verdict

__all__ = [
    "LETTERS",
    "StructureTuple",
    "SignVector",
    "gamma",
    "gamma_check",
    "sigma",
    "sigma_check",
    "gamma_batch",
    "gamma_check_batch",
    "sigma_batch",
    "sigma_check_batch",
    "to_bool",
    "from_bool",
    "structure_space",
    "structure_space_array",
    "in_structure_space",
    "in_structure_space_rows",
    "signed_member",
    "gamma_oracle",
    "gamma_check_oracle",
    "sigma_oracle",
    "STRUCTURE_SYSTEMS",
    "equivalent_systems_check",
]

LETTERS = ("xi", "zeta", "alpha", "beta", "eta", "omega")


class StructureTuple(NamedTuple):
    xi: int
    zeta: int
    alpha: int
    beta: int
    eta: int
    omega: int


class SignVector(NamedTuple):
    """Six signs aligned with (ξ, ζ; α, β; η, ω)."""

    xi: int
    zeta: int
    alpha: int
    beta: int
    eta: int
    omega: int

    @classmethod
    def parse(cls, text: str) -> "SignVector":
        vals = [int(v) for v in re.split(r"[;,]", text.strip().strip("()"))]
        if len(vals) != 6 or any(v not in (1, -1) for v in vals):
            raise ValueError(f"bad sign vector {text!r}")
        return cls(*vals)

    @classmethod
    def all(cls) -> list["SignVector"]:
        return [cls(*s) for s in itertools.product((1, -1), repeat=6)]

    def __str__(self) -> str:
        s = [str(v) for v in self]
        return f"({s[0]},{s[1]};{s[2]},{s[3]};{s[4]},{s[5]})"


# --- scalar evaluation -------------------------------------------------------

def gamma(x: Subset, a: Subset, y: Subset, b: Subset, z: Subset) -> Subset:
    """Γ(x,a,y,b,z) = {ω | ∃α∈a, β∈b: α+ω+β ∈ y, α+ω ∈ z, ω+β ∈ x}.

    ``a`` and ``b`` need not be subgroups; empty ``a`` or ``b`` gives the empty set.
    """
    g = _same(x, a, y, b, z)
    rows = g._rows
    xb, yb, zb = x.bits, y.bits, z.bits
    al, be = a.elements, b.elements
    out = 0
    for w in g.elements:
        wrow = rows[w]
        found = False
        for alpha in al:
            aw = rows[alpha][w]
            if not zb >> aw & 1:
                continue
            awrow = rows[aw]
            for beta in be:
                if xb >> wrow[beta] & 1 and yb >> awrow[beta] & 1:
                    found = True
                    break
            if found:
                break
        if found:
            out |= 1 << w
    return Subset(g, out)


def gamma_check(x: Subset, a: Subset, y: Subset, b: Subset, z: Subset) -> Subset:
    """Γ̌: the equations β+ω+α ∈ y, ω+α ∈ z, β+ω ∈ x (Γ over the opposite law)."""
    g = _same(x, a, y, b, z)
    rows = g._rows
    xb, yb, zb = x.bits, y.bits, z.bits
    al, be = a.elements, b.elements
    out = 0
    for w in g.elements:
        wrow = rows[w]
        found = False
        for beta in be:
            bw = rows[beta][w]
            if not xb >> bw & 1:
                continue
            bwrow = rows[bw]
            for alpha in al:
                if zb >> wrow[alpha] & 1 and yb >> bwrow[alpha] & 1:
                    found = True
                    break
            if found:
                break
        if found:
            out |= 1 << w
    return Subset(g, out)


def sigma(b: Subset, x: Subset, y: Subset, z: Subset) -> Subset:
    """Σ(b,x,y,z) = {ω | ∃β,β'∈b: ω+β ∈ x, ω+β'+β ∈ y, ω+β' ∈ z}.

    The first argument is the quantified subset.
    """
    g = _same(b, x, y, z)
    rows = g._rows
    xb, yb, zb = x.bits, y.bits, z.bits
    be = b.elements
    out = 0
    for w in g.elements:
        wrow = rows[w]
        found = False
        for beta2 in be:
            wb2 = wrow[beta2]
            if not zb >> wb2 & 1:
                continue
            wb2row = rows[wb2]
            for beta in be:
                if xb >> wrow[beta] & 1 and yb >> wb2row[beta] & 1:
                    found = True
                    break
            if found:
                break
        if found:
            out |= 1 << w
    return Subset(g, out)


def sigma_check(b: Subset, x: Subset, y: Subset, z: Subset) -> Subset:
    """Σ̌(b,x,y,z) = {ω | ∃β,β'∈b: β+ω ∈ x, β+β'+ω ∈ y, β'+ω ∈ z}."""
    g = _same(b, x, y, z)
    rows = g._rows
    xb, yb, zb = x.bits, y.bits, z.bits
    be = b.elements
    out = 0
    for w in g.elements:
        found = False
        for beta2 in be:
            b2w = rows[beta2][w]
            if not zb >> b2w & 1:
                continue
            for beta in be:
                if xb >> rows[beta][w] & 1 and yb >> rows[beta][b2w] & 1:
                    found = True
                    break
            if found:
                break
        if found:
            out |= 1 << w
    return Subset(g, out)


# --- batch kernels -----------------------------------------------------------

_CHUNK_CELLS = 1 << 22


def to_bool(subsets: Sequence[Subset] | Subset, n: int | None = None) -> np.ndarray:
    """Membership matrix ``(k, n)`` for a list of subsets (or ``(n,)`` for one)."""
    if isinstance(subsets, Subset):
        return subsets.to_array()
    if n is None:
        n = subsets[0].group.order
    if n <= 62:
        masks = np.fromiter((s.bits for s in subsets), dtype=np.int64, count=len(subsets))
        return ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
    return np.array([[bool(s.bits >> i & 1) for i in range(n)] for s in subsets], dtype=bool).reshape(-1, n)


def from_bool(group: FiniteGroup, rows: np.ndarray) -> list[Subset]:
    rows = np.atleast_2d(rows)
    n = group.order
    if n <= 62:
        masks = (rows.astype(np.int64) << np.arange(n)).sum(axis=1)
        return [Subset(group, int(m)) for m in masks]
    return [Subset(group, sum(1 << i for i in np.flatnonzero(r))) for r in rows]


def masks_of(rows: np.ndarray) -> np.ndarray:
    """Integer bitmask per row (n <= 62)."""
    rows = np.atleast_2d(rows)
    return (rows.astype(np.int64) << np.arange(rows.shape[1])).sum(axis=1)


def _as2d(m: np.ndarray) -> np.ndarray:
    return m[None, :] if m.ndim == 1 else m


def _batch_len(*arrays: np.ndarray) -> int:
    k = 1
    for arr in arrays:
        if arr.ndim == 2 and arr.shape[0] != 1:
            if k != 1 and arr.shape[0] != k:
                raise ValueError("batch sizes disagree")
            k = arr.shape[0]
    return k


def _chunks(k: int, cells_per_row: int):
    step = max(1, _CHUNK_CELLS // max(1, cells_per_row))
    for lo in range(0, k, step):
        yield slice(lo, min(k, lo + step))


def _take(arr: np.ndarray, sl: slice) -> np.ndarray:
    return arr if arr.shape[0] == 1 else arr[sl]


def _gamma_kernel(t: np.ndarray, X, A, Y, B, Z) -> np.ndarray:
    """Shared Γ kernel; ``t`` is the table of the law in use."""
    n = t.shape[0]
    X, A, Y, B, Z = (_as2d(np.asarray(v, dtype=bool)) for v in (X, A, Y, B, Z))
    k = _batch_len(X, A, Y, B, Z)
    aw = t  # aw[α, ω]
    awb = t[t]  # awb[α, ω, β]
    wb = t  # wb[ω, β]
    fixed = A.shape[0] == 1 and B.shape[0] == 1
    if fixed:
        al = np.flatnonzero(A[0])
        be = np.flatnonzero(B[0])
        if len(al) == 0 or len(be) == 0:
            return np.zeros((k, n), dtype=bool)
        aw_s = aw[al]  # (p, n)
        awb_s = awb[al][:, :, be]  # (p, n, q)
        wb_s = wb[:, be]  # (n, q)
    out = np.empty((k, n), dtype=bool)
    cells = (len(al) * len(be) if fixed else n * n) * n
    for sl in _chunks(k, cells):
        Xc, Yc, Zc = _take(X, sl), _take(Y, sl), _take(Z, sl)
        if fixed:
            c = Zc[:, aw_s][:, :, :, None] & Xc[:, wb_s][:, None, :, :] & Yc[:, awb_s]
        else:
            Ac, Bc = _take(A, sl), _take(B, sl)
            c = (Ac[:, :, None, None] & Bc[:, None, None, :] & Zc[:, aw][:, :, :, None]
                 & Xc[:, wb][:, None, :, :] & Yc[:, awb])
        res = c.any(axis=(1, 3))
        out[sl] = res if res.shape[0] == (sl.stop - sl.start) else np.broadcast_to(res, (sl.stop - sl.start, n))
    return out


def gamma_batch(g: FiniteGroup, X, A, Y, B, Z) -> np.ndarray:
    """Γ on membership matrices; returns ``(k, n)`` booleans."""
    return _gamma_kernel(g.table, X, A, Y, B, Z)


def gamma_check_batch(g: FiniteGroup, X, A, Y, B, Z) -> np.ndarray:
    # Γ̌ is Γ for the opposite law
    return _gamma_kernel(np.ascontiguousarray(g.table.T), X, A, Y, B, Z)


def _sigma_kernel(t: np.ndarray, B, X, Y, Z) -> np.ndarray:
    n = t.shape[0]
    B, X, Y, Z = (_as2d(np.asarray(v, dtype=bool)) for v in (B, X, Y, Z))
    k = _batch_len(B, X, Y, Z)
    wb = t  # wb[ω, β]
    wbb = t[t]  # wbb[ω, β', β] = ω + β' + β
    fixed = B.shape[0] == 1
    if fixed:
        be = np.flatnonzero(B[0])
        if len(be) == 0:
            return np.zeros((k, n), dtype=bool)
        wb_s = wb[:, be]  # (n, q)
        wbb_s = wbb[:, be][:, :, be]  # (n, q', q)
    out = np.empty((k, n), dtype=bool)
    cells = (len(be) ** 2 if fixed else n * n) * n
    for sl in _chunks(k, cells):
        Xc, Yc, Zc = _take(X, sl), _take(Y, sl), _take(Z, sl)
        if fixed:
            c = Zc[:, wb_s][:, :, :, None] & Xc[:, wb_s][:, :, None, :] & Yc[:, wbb_s]
        else:
            Bc = _take(B, sl)
            c = (Bc[:, None, :, None] & Bc[:, None, None, :] & Zc[:, wb][:, :, :, None]
                 & Xc[:, wb][:, :, None, :] & Yc[:, wbb])
        res = c.any(axis=(2, 3))
        out[sl] = res if res.shape[0] == (sl.stop - sl.start) else np.broadcast_to(res, (sl.stop - sl.start, n))
    return out


def sigma_batch(g: FiniteGroup, B, X, Y, Z) -> np.ndarray:
    return _sigma_kernel(g.table, B, X, Y, Z)


def sigma_check_batch(g: FiniteGroup, B, X, Y, Z) -> np.ndarray:
    return _sigma_kernel(np.ascontiguousarray(g.table.T), B, X, Y, Z)


# --- structure space ---------------------------------------------------------

def structure_space(g: FiniteGroup) -> Iterator[StructureTuple]:
    """Stream the |Ω|³ solutions of ζ = α+ω, η = α+ω+β, ξ = ω+β."""
    for alpha in g.elements:
        for w in g.elements:
            zeta = g.add(alpha, w)
            for beta in g.elements:
                yield StructureTuple(g.add(w, beta), zeta, alpha, beta, g.add(zeta, beta), w)


def structure_space_array(g: FiniteGroup) -> np.ndarray:
    """``(n³, 6)`` array of structure tuples in letter order (ξ, ζ, α, β, η, ω)."""
    d = g.__dict__.get("_structure_space")
    if d is None:
        d = np.array(list(structure_space(g)), dtype=np.int64).reshape(-1, 6)
        d.setflags(write=False)
        g.__dict__["_structure_space"] = d
    return d


def in_structure_space(g: FiniteGroup, t: Sequence[int]) -> bool:
    xi, zeta, alpha, beta, eta, w = t
    return (zeta == g.add(alpha, w) and eta == g.sum(alpha, w, beta) and xi == g.add(w, beta))


def in_structure_space_rows(g: FiniteGroup, rows: np.ndarray) -> np.ndarray:
    """Vectorised membership for an ``(m, 6)`` array."""
    t = g.table
    xi, zeta, alpha, beta, eta, w = rows.T
    aw = t[alpha, w]
    return (zeta == aw) & (eta == t[aw, beta]) & (xi == t[w, beta])


def _apply_signs(g: FiniteGroup, rows: np.ndarray, s: Sequence[int]) -> np.ndarray:
    out = rows.copy()
    for i, si in enumerate(s):
        if si == -1:
            out[:, i] = g.inv[out[:, i]]
    return out


def signed_member(g: FiniteGroup, s: Sequence[int], t: Sequence[int]) -> bool:
    """``t ∈ 𝚪^s``: the tuple with -1 entries inverted lies in 𝚪."""
    signed = [v if si == 1 else g.neg(v) for si, v in zip(s, t)]
    return in_structure_space(g, signed)


def gamma_oracle(x: Subset, a: Subset, y: Subset, b: Subset, z: Subset) -> Subset:
    """Γ by projecting the structure space: filter memberships, keep ω."""
    g = _same(x, a, y, b, z)
    rows = structure_space_array(g)
    keep = (x.to_array()[rows[:, 0]] & z.to_array()[rows[:, 1]] & a.to_array()[rows[:, 2]]
            & b.to_array()[rows[:, 3]] & y.to_array()[rows[:, 4]])
    return Subset.of(g, np.unique(rows[keep, 5]))


def gamma_check_oracle(x: Subset, a: Subset, y: Subset, b: Subset, z: Subset) -> Subset:
    """Γ̌ through the structure space of the opposite group."""
    g = _same(x, a, y, b, z)
    op = opposite(g)
    moved = [Subset(op, s.bits) for s in (x, a, y, b, z)]
    return Subset(g, gamma_oracle(*moved).bits)


def sigma_oracle(b: Subset, x: Subset, y: Subset, z: Subset) -> Subset:
    """Σ by scanning every (ω, β, β') triple."""
    g = _same(b, x, y, z)
    hits = set()
    for w, beta, beta2 in itertools.product(g.elements, b.elements, b.elements):
        if g.add(w, beta) in x and g.sum(w, beta2, beta) in y and g.add(w, beta2) in z:
            hits.add(w)
    return Subset.of(g, hits)


# --- equivalent systems ------------------------------------------------------

# each system: three equations "lhs = signed word"
STRUCTURE_SYSTEMS: dict[str, tuple[str, str, str]] = {
    "defining": ("zeta = alpha + omega", "eta = alpha + omega + beta", "xi = omega + beta"),
    "inverse": ("alpha = eta - xi", "omega = xi - eta + zeta", "beta = -zeta + eta"),
    "eta-A": ("eta = alpha + omega + beta", "eta = alpha + xi", "eta = zeta + beta"),
    "eta-B": ("eta = zeta - omega + xi", "eta = alpha + xi", "eta = zeta + beta"),
    "omega-A": ("omega = xi - eta + zeta", "omega = xi - beta", "omega = -alpha + zeta"),
    "omega-B": ("omega = -alpha + eta - beta", "omega = xi - beta", "omega = -alpha + zeta"),
    "alpha-A": ("alpha = zeta + beta - xi", "alpha = eta - xi", "alpha = zeta - omega"),
    "alpha-B": ("alpha = eta - beta - omega", "alpha = eta - xi", "alpha = zeta - omega"),
    "beta-A": ("beta = -zeta + alpha + xi", "beta = -omega + xi", "beta = -zeta + eta"),
    "beta-B": ("beta = -omega - alpha + eta", "beta = -omega + xi", "beta = -zeta + eta"),
    "xi-A": ("xi = -alpha + zeta + beta", "xi = -alpha + eta", "xi = omega + beta"),
    "xi-B": ("xi = omega - zeta + eta", "xi = -alpha + eta", "xi = omega + beta"),
    "zeta-A": ("zeta = eta - xi + omega", "zeta = eta - beta", "zeta = alpha + omega"),
    "zeta-B": ("zeta = alpha + xi - beta", "zeta = eta - beta", "zeta = alpha + omega"),
    "mixed-1": ("eta = alpha + xi", "beta = -omega + xi", "zeta = alpha + omega"),
    "mixed-2": ("alpha = eta - xi", "zeta = eta - beta", "omega = xi - beta"),
    "mixed-3": ("alpha = zeta - omega", "xi = omega + beta", "eta = zeta + beta"),
}

_TERM = re.compile(r"\s*([+-]?)\s*([a-z]+)")


def _parse_equation(text: str) -> list[tuple[int, int]]:
    """``lhs = word`` as a cyclic word ``-lhs + word`` equal to the identity."""
    lhs, rhs = (side.strip() for side in text.split("="))
    word = [(-1, LETTERS.index(lhs))]
    pos = 0
    while pos < len(rhs):
        m = _TERM.match(rhs, pos)
        if not m:
            raise ValueError(f"cannot parse {text!r}")
        word.append((-1 if m.group(1) == "-" else 1, LETTERS.index(m.group(2))))
        pos = m.end()
    return word


def _eval_word(g: FiniteGroup, word, values: dict[int, np.ndarray], size: int) -> np.ndarray:
    acc = np.full(size, g.identity, dtype=np.int64)
    for sign, letter in word:
        v = values[letter]
        acc = g.table[acc, v if sign == 1 else g.inv[v]]
    return acc


def _solve_system(g: FiniteGroup, words) -> np.ndarray:
    """All solutions in Ω⁶ of the cyclic-word system, as an ``(m, 6)`` array.

    Picks the smallest set of free letters from which every other letter is
    forced (one equation solved per forced letter); leftover equations act as
    filters.
    """
    n = g.order
    for k in range(1, 7):
        for free in itertools.combinations(range(6), k):
            known = set(free)
            plan = []
            unused = list(range(len(words)))
            progress = True
            while progress and len(known) < 6:
                progress = False
                for ei in unused:
                    unknown = [i for i, (_, l) in enumerate(words[ei]) if l not in known]
                    letters = {words[ei][i][1] for i in unknown}
                    if len(unknown) == 1 and len(letters) == 1:
                        plan.append((ei, unknown[0]))
                        known.add(words[ei][unknown[0]][1])
                        unused.remove(ei)
                        progress = True
                        break
            if len(known) < 6:
                continue
            size = n ** k
            grid = np.indices((n,) * k).reshape(k, -1) if k else np.zeros((0, 1), dtype=np.int64)
            values = {letter: grid[i] for i, letter in enumerate(free)}
            for ei, pos in plan:
                word = words[ei]
                sign, letter = word[pos]
                rest = word[pos + 1:] + word[:pos]
                r = _eval_word(g, rest, values, size)
                # sign·L + rest = o
                values[letter] = g.inv[r] if sign == 1 else r
            rows = np.stack([values[i] for i in range(6)], axis=1)
            keep = np.ones(size, dtype=bool)
            for ei in unused:
                keep &= _eval_word(g, words[ei], values, size) == g.identity
            return rows[keep]
    raise AssertionError("unreachable: all-free assignment always succeeds")


def equivalent_systems_check(g: FiniteGroup, systems: dict[str, Sequence[str]] | None = None) -> Verdict:
    """Check every system has exactly the structure space as solution set.

    On failure the verdict names the system and a tuple lying in one solution
    set but not the other.
    """
    systems = STRUCTURE_SYSTEMS if systems is None else systems
    n = g.order
    gamma_rows = structure_space_array(g)
    gamma_codes = set((gamma_rows @ (n ** np.arange(6))).tolist())
    for label, eqs in systems.items():
        sols = _solve_system(g, [_parse_equation(e) for e in eqs])
        inside = in_structure_space_rows(g, sols)
        if not inside.all():
            w = StructureTuple(*(int(v) for v in sols[np.argmin(inside)]))
            return Verdict.fail((label, w), f"system {label!r} admits {w}, which is not in the structure space",
                                checked=len(sols))
        codes = set((sols @ (n ** np.arange(6))).tolist())
        missing = gamma_codes - codes
        if missing:
            code = min(missing)
            w = StructureTuple(*((code // n ** i) % n for i in range(6)))
            return Verdict.fail((label, w), f"system {label!r} misses {w} from the structure space",
                                checked=len(sols))
    return Verdict.ok(len(systems) * n ** 3, f"{len(systems)} systems equivalent")
