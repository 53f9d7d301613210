import itertools

import numpy as np
import pytest

from torsorlab import structure as sm
from torsorlab import subsets as ss
from torsorlab.groups import builtin_group


@pytest.fixture(scope="session")
def grp():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = builtin_group(name)
        return cache[name]

    return get


def brute_gamma(x, a, y, b, z):
    """Γ straight from the definition, independent of the package kernels."""
    g = x.group
    out = set()
    for w, al, be in itertools.product(g.elements, a.elements, b.elements):
        if g.sum(al, w, be) in y and g.add(al, w) in z and g.add(w, be) in x:
            out.add(w)
    return ss.Subset.of(g, out)


def brute_sigma(b, x, y, z):
    g = b.group
    out = set()
    for w, be, be2 in itertools.product(g.elements, b.elements, b.elements):
        if g.add(w, be) in x and g.sum(w, be2, be) in y and g.add(w, be2) in z:
            out.add(w)
    return ss.Subset.of(g, out)


def _flipped_rows(g, X, A, Y, B, Z):
    """Γ with one flipped sign: the x-condition reads ω - β instead of ω + β."""
    t, inv = g.table, np.asarray(g.inv)
    X, A, Y, B, Z = (np.atleast_2d(np.asarray(m, dtype=bool)) for m in (X, A, Y, B, Z))
    k = max(len(m) for m in (X, A, Y, B, Z))
    X, A, Y, B, Z = (np.broadcast_to(m, (k, g.order)) for m in (X, A, Y, B, Z))
    n = g.order
    w, al, be = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    aw = t[al, w]
    awb = t[aw, be]
    wmb = t[w, inv[be]]
    out = np.zeros((k, n), dtype=bool)
    for s in range(0, k, 2048):
        r = slice(s, s + 2048)
        cond = (A[r][:, al] & B[r][:, be] & Y[r][:, awb] & Z[r][:, aw] & X[r][:, wmb])
        out[r] = cond.any(axis=(2, 3))
    return out


@pytest.fixture
def flipped_gamma(monkeypatch):
    """Replace Γ everywhere the suites reach it with a sign-flipped version."""

    def scalar(x, a, y, b, z):
        g = x.group
        return sm.from_bool(g, _flipped_rows(g, *(s.to_array() for s in (x, a, y, b, z))))[0]

    monkeypatch.setattr(sm, "gamma", scalar)
    monkeypatch.setattr(sm, "gamma_batch", _flipped_rows)


@pytest.fixture
def swapped_sumset(monkeypatch):
    """Sumset with its operands swapped (invisible on abelian groups)."""
    orig, orig_rows = ss.sumset, ss.sumset_rows
    monkeypatch.setattr(ss, "sumset", lambda x, y: orig(y, x))
    monkeypatch.setattr(ss, "sumset_rows", lambda g, X, Y: orig_rows(g, Y, X))


_ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion(capsys):
    """Record one pass/fail line per acceptance criterion."""

    def record(number, passed, text):
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {text}"
        _ACCEPTANCE.append(line)
        with capsys.disabled():
            print("\n" + line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)
