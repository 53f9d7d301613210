import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_gamma, brute_sigma
from torsorlab import structure as sm
from torsorlab import subsets as ss
from torsorlab.groups import builtin_group, opposite
from torsorlab.structure import SignVector, StructureTuple
from torsorlab.subsets import Subset

GROUPS = [builtin_group(n) for n in ("z4", "s3", "d4", "q8")]


def tuples_of(g, k):
    return st.tuples(*[st.integers(0, (1 << g.order) - 1).map(lambda b: Subset(g, b))] * k)


@pytest.mark.parametrize("g", GROUPS, ids=lambda g: g.name)
def test_gamma_matches_definition(g):
    @settings(max_examples=60, deadline=None)
    @given(tuples_of(g, 5))
    def inner(t):
        assert sm.gamma(*t) == brute_gamma(*t)
        assert sm.gamma(*t) == sm.gamma_oracle(*t)

    inner()


@pytest.mark.parametrize("g", GROUPS, ids=lambda g: g.name)
def test_sigma_matches_definition(g):
    @settings(max_examples=60, deadline=None)
    @given(tuples_of(g, 4))
    def inner(t):
        assert sm.sigma(*t) == brute_sigma(*t)
        assert sm.sigma(*t) == sm.sigma_oracle(*t)

    inner()


@pytest.mark.parametrize("g", GROUPS[1:], ids=lambda g: g.name)
def test_check_maps_are_opposite_group_maps(g):
    op = opposite(g)
    rng = np.random.default_rng(1)
    for _ in range(60):
        bits = [int(v) for v in rng.integers(0, 1 << g.order, 5)]
        t = [Subset(g, b) for b in bits]
        t_op = [Subset(op, b) for b in bits]
        assert sm.gamma_check(*t).bits == sm.gamma(*t_op).bits
        assert sm.sigma_check(*t[:4]).bits == sm.sigma(*t_op[:4]).bits


def test_trivial_parameters_give_meet(grp):
    # a = b = {o} gives x ∧ y ∧ z, not x - y + z
    g = grp("s3")
    o = Subset.identity(g)
    for x, y, z in itertools.product(ss.all_subsets(g)[:20], repeat=3):
        assert sm.gamma(x, o, y, o, z) == x & y & z


def test_full_parameters_on_singletons(grp):
    # a = b = Ω on singletons recovers the group torsor law x - y + z
    g = grp("s3")
    full = Subset.full(g)
    for p, q, r in itertools.product(g.elements, repeat=3):
        out = sm.gamma(Subset.singleton(g, p), full, Subset.singleton(g, q), full, Subset.singleton(g, r))
        assert out.elements == (g.sum(p, g.neg(q), r),)


def test_worked_examples(grp):
    g = grp("z6")
    p = lambda s: ss.parse_subset(g, s)
    # Γ(x,a,x,b,x) = x
    assert sm.gamma(p("0,3"), p("0,2,4"), p("0,3"), p("0,2,4"), p("0,3")) == p("0,3")
    assert sm.gamma(p("0,3"), p("0,2,4"), p("0"), p("0,2,4"), p("0,3")) == p("0")
    g = grp("z4")
    p = lambda s: ss.parse_subset(g, s)
    # (xxy)_b = y on U_b
    assert sm.sigma(p("0,2"), p("0,1"), p("0,1"), p("2,3")) == p("2,3")


@pytest.mark.parametrize("g", GROUPS, ids=lambda g: g.name)
def test_batch_agrees_with_scalar(g):
    rng = np.random.default_rng(7)
    rows = rng.random((5, 80, g.order)) < 0.5
    outs = [sm.gamma_batch(g, *rows), sm.gamma_check_batch(g, *rows),
            sm.sigma_batch(g, *rows[:4]), sm.sigma_check_batch(g, *rows[:4])]
    fns = [sm.gamma, sm.gamma_check, sm.sigma, sm.sigma_check]
    for i in range(80):
        t = sm.from_bool(g, rows[:, i])
        for out, fn, k in zip(outs, fns, (5, 5, 4, 4)):
            assert np.array_equal(out[i], fn(*t[:k]).to_array())


def test_batch_broadcasts_fixed_parameters(grp):
    g = grp("d4")
    rng = np.random.default_rng(2)
    X, Y, Z = rng.random((3, 50, 8)) < 0.5
    a, b = Subset.of(g, [0, 2]), Subset.of(g, [0, 4])
    out = sm.gamma_batch(g, X, a.to_array(), Y, b.to_array(), Z)
    for i in range(50):
        x, y, z = sm.from_bool(g, np.stack([X[i], Y[i], Z[i]]))
        assert np.array_equal(out[i], sm.gamma(x, a, y, b, z).to_array())


@pytest.mark.parametrize("g", GROUPS, ids=lambda g: g.name)
def test_structure_space(g):
    rows = sm.structure_space_array(g)
    assert rows.shape == (g.order ** 3, 6)
    assert len({tuple(r) for r in rows.tolist()}) == g.order ** 3
    for r in rows[:: max(1, len(rows) // 50)]:
        t = StructureTuple(*map(int, r))
        assert t.zeta == g.add(t.alpha, t.omega)
        assert t.eta == g.sum(t.alpha, t.omega, t.beta)
        assert t.xi == g.add(t.omega, t.beta)
        assert sm.in_structure_space(g, t)
    assert sm.in_structure_space_rows(g, rows).all()


@pytest.mark.parametrize("g", GROUPS + [builtin_group("z2")], ids=lambda g: g.name)
def test_equivalent_systems(g):
    assert len(sm.STRUCTURE_SYSTEMS) == 17
    v = sm.equivalent_systems_check(g)
    assert v.passed, v


def test_sign_flipped_system_gives_witness(grp):
    g = grp("s3")
    bad = {"flipped": ("zeta = alpha - omega", "eta = alpha + omega + beta", "xi = omega + beta")}
    v = sm.equivalent_systems_check(g, bad)
    assert not v.passed
    label, t = v.witness
    assert label == "flipped" and not sm.in_structure_space(g, t)


def test_sign_vector_parsing():
    s = SignVector.parse("(1,-1;-1,1;1,1)")
    assert tuple(s) == (1, -1, -1, 1, 1, 1)
    assert str(s) == "(1,-1;-1,1;1,1)"
    assert len(SignVector.all()) == 64
    with pytest.raises(ValueError):
        SignVector.parse("(1,2;1,1;1,1)")


def test_signed_member(grp):
    g = grp("s3")
    t = next(iter(sm.structure_space(g)))
    assert sm.signed_member(g, (1,) * 6, t)
