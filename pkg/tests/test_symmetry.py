import itertools

import numpy as np
import pytest

from torsorlab import structure as sm
from torsorlab import subsets as ss
from torsorlab import symmetry as sy
from torsorlab import torsors as tt
from torsorlab.groups import builtin_group
from torsorlab.structure import SignVector


def test_big_klein_group():
    K = sy.big_klein_group()
    assert len({s.images for s in K}) == 24
    assert all(s.is_even and s.preserves_blocks() for s in K)
    images = {s.images for s in K}
    assert all(s.compose(t) in images for s, t in itertools.product(K, repeat=2))


def test_printed_permutation_labels():
    labels = {s.s4_label: s.cycle_label for s in sy.big_klein_group()}
    for s4, printed, _ in sy.SIGN_TABLE:
        assert labels[s4] == printed


def test_action_pushes_entries():
    # σ = (αβ)(ηω) swaps the α and β columns and the η and ω columns
    sigma = next(s for s in sy.big_klein_group() if s.s4_label == "(13)(24)")
    rows = np.arange(6)[None, :]
    moved = sy.act(sigma, rows)[0]
    L = sm.LETTERS
    assert moved[L.index("beta")] == L.index("alpha")
    assert moved[L.index("omega")] == L.index("eta")


@pytest.mark.parametrize("name", ["s3", "d4", "z4"])
def test_sign_table_rows(name):
    g = builtin_group(name)
    rows = sy.verify_sign_table(g)
    failing = [r.s4_label for r in rows if not r.passed]
    assert failing == ["(13)"]
    bad = next(r for r in rows if r.s4_label == "(13)")
    assert SignVector.parse(sy.SIGN_TABLE_ERRATA["(13)"]) in bad.derived
    assert bad.table_vector not in bad.derived


@pytest.mark.parametrize("name", ["s3", "d4"])
def test_derived_vectors_are_unique(name):
    assert all(r.singleton for r in sy.verify_sign_table(builtin_group(name)))


def test_erratum_by_substitution(grp):
    # σ = (αω)(βη): t' has α' = ω, ω' = α, β' = η, η' = β
    g = grp("s3")
    s = SignVector.parse(sy.SIGN_TABLE_ERRATA["(13)"])
    sigma = next(p for p in sy.big_klein_group() if p.s4_label == "(13)")
    for t in sm.structure_space(g):
        moved = sy.act(sigma, np.array([t]))[0]
        assert sm.signed_member(g, s, moved)


def test_z2_every_vector_works(grp):
    # on Z2 every element is its own inverse, so all 64 vectors realise every σ
    g = grp("z2")
    sigma = sy.big_klein_group()[5]
    assert len(sy.derive_sign_vector(g, sigma)) == 64


@pytest.mark.parametrize("name,counts", [
    ("s3", {"spaces": 24, "sign_classes": 14, "stabilizer": 4, "cosets": 6}),
    ("z4", {"spaces": 12, "sign_classes": 7, "stabilizer": 8, "cosets": 3}),
    ("z2", {"spaces": 1, "sign_classes": 1, "stabilizer": 24, "cosets": 1}),
])
def test_orbit_counts(name, counts):
    assert sy.orbit_counts(builtin_group(name)) == counts


@pytest.mark.parametrize("name,mode", [("z2", "exhaustive"), ("s3", "random"), ("q8", "random")])
def test_second_symmetry(name, mode):
    v = sy.check_second_symmetry(builtin_group(name), mode=mode, k=1500)
    assert v.passed, v


def test_klein_invariance(grp):
    g = grp("z4")
    for b in ss.grassmannian(g):
        assert sy.klein_invariance_check(tt.carrier_U_b(b)).passed
    assert sy.klein_invariance_check(tt.group_torsor(grp("s3"))).passed


def test_klein_invariance_detects_non_torsor(grp):
    g = grp("s3")
    singles = [ss.Subset.singleton(g, e) for e in g.elements]
    law = tt.TernaryLaw("x+y+z", g, lambda x, y, z: ss.sumset(ss.sumset(x, y), z))
    v = sy.klein_invariance_check(tt.TorsorCarrier(singles, law, "x+y+z"))
    assert not v.passed
