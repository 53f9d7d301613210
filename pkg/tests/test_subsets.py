import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torsorlab import structure as sm
from torsorlab import subsets as ss
from torsorlab.groups import CorpusLimitError, builtin_group, corpus
from torsorlab.subsets import Subset


def subsets_of(g):
    return st.integers(0, (1 << g.order) - 1).map(lambda b: Subset(g, b))


S3 = builtin_group("s3")
D4 = builtin_group("d4")


def test_parse_and_format(grp):
    g = grp("z6")
    s = ss.parse_subset(g, "4, 0,2")
    assert s.elements == (0, 2, 4)
    assert ss.format_subset(s) == "0,2,4"
    assert ss.parse_subset(g, "{}") == Subset.empty(g)
    with pytest.raises(ValueError, match="out of range"):
        ss.parse_subset(g, "0,9")
    with pytest.raises(ValueError, match="malformed"):
        ss.parse_subset(g, "0,x")


def test_mixed_groups_rejected(grp):
    with pytest.raises(ss.GroupMismatchError):
        Subset.full(grp("z4")) & Subset.full(grp("k4"))


@settings(max_examples=60, deadline=None)
@given(subsets_of(S3), subsets_of(S3))
def test_sumset_definition(x, y):
    expect = {S3.add(p, q) for p in x for q in y}
    assert set(ss.sumset(x, y).elements) == expect
    assert set((-x).elements) == {S3.neg(p) for p in x}


def test_sumset_rows_matches_scalar():
    rng = np.random.default_rng(3)
    X = rng.random((300, 8)) < 0.4
    Y = rng.random((300, 8)) < 0.4
    out = ss.sumset_rows(D4, X, Y)
    for i in range(300):
        x, y = sm.from_bool(D4, np.stack([X[i], Y[i]]))
        assert np.array_equal(out[i], ss.sumset(x, y).to_array())


def _brute_transversal(x, y):
    g = x.group
    pairs = [g.add(p, q) for p in x for q in y]
    return sorted(pairs) == list(g.elements)


@settings(max_examples=80, deadline=None)
@given(subsets_of(S3), subsets_of(S3))
def test_transversal_definition(x, y):
    assert ss.is_left_transversal(x, y) == _brute_transversal(x, y)


# subgroup counts frozen from a brute-force closure scan over all subsets
@pytest.mark.parametrize("name,count", [
    ("z4", 3), ("z6", 4), ("k4", 5), ("s3", 6), ("d4", 10), ("q8", 6), ("z2xz4", 8), ("z2xz2xz2", 16),
    ("z3xz3", 6), ("s4", 30),
])
def test_grassmannian_counts(name, count):
    assert len(ss.grassmannian(builtin_group(name))) == count


@pytest.mark.parametrize("g", corpus(max_order=12), ids=lambda g: g.name)
def test_grassmannian_against_bruteforce(g):
    assert set(ss.grassmannian(g)) == set(ss.grassmannian_bruteforce(g))


@pytest.mark.parametrize("g", [S3, D4, builtin_group("q8")], ids=lambda g: g.name)
def test_section_counts(g):
    for b in ss.grassmannian(g):
        k = g.order // len(b)
        L, R = ss.left_transversal_set(b), ss.right_transversal_set(b)
        assert len(L) == len(R) == len(b) ** k
        assert all(ss.is_left_transversal(x, b) for x in L)
        assert all(ss.is_left_transversal(b, x) for x in R)


def test_sections_z4(grp):
    g = grp("z4")
    secs = ss.left_transversal_set(ss.parse_subset(g, "0,2"))
    assert [ss.format_subset(s) for s in sorted(secs, key=lambda s: s.sort_key)] == ["0,1", "1,2", "0,3", "2,3"]


def test_section_limit(grp):
    with pytest.raises(CorpusLimitError):
        ss.left_transversal_set(Subset.of(grp("z2xz2xz2"), [0, 1]), limit=10)


def test_map_graph_roundtrip():
    g = D4
    for b in ss.grassmannian(g):
        secs = ss.left_transversal_set(b)
        y = secs[0]
        for x in secs[:20]:
            F = ss.map_from_transversal(x, y, b)
            assert ss.graph_of_map(F, "left") == x
            assert all(F(e) in b for e in y)


def test_maps_between_count(grp):
    g = grp("z6")
    y, b = Subset.of(g, [0, 3]), Subset.of(g, [0, 2, 4])
    assert len(list(ss.maps_between(y, b))) == 9


def test_generated_subgroup(grp):
    g = grp("d4")
    assert len(ss.generated_subgroup(g, [1])) == 4
    assert len(ss.generated_subgroup(g, [1, 4])) == 8
    assert ss.is_subgroup(ss.generated_subgroup(g, [5]))


def test_complement_membership():
    for a, b in itertools.product(ss.grassmannian(S3), repeat=2):
        for x in ss.all_subsets(S3):
            assert ss.in_left_complements(x, b) == ss.is_left_transversal(x, b)
            assert ss.in_right_complements(x, a) == ss.is_left_transversal(a, x)
