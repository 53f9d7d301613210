import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torsorlab.groups import (
    CorpusLimitError,
    InvalidOrderError,
    MissingInverseError,
    NonAssociativeError,
    NotClosedError,
    NotSquareError,
    automorphisms,
    builtin_group,
    corpus,
    from_cayley_table,
    is_isomorphic,
    left_cosets,
    load_group,
    make_cyclic,
    make_dihedral,
    make_direct_product,
    make_symmetric,
    opposite,
    right_cosets,
    save_group,
)


def _brute_is_group(t):
    n = len(t)
    e = next(i for i in range(n) if all(t[i][j] == j == t[j][i] for j in range(n)))
    assoc = all(t[t[a][b]][c] == t[a][t[b][c]] for a in range(n) for b in range(n) for c in range(n))
    invs = all(any(t[a][b] == e == t[b][a] for b in range(n)) for a in range(n))
    return assoc and invs


@pytest.mark.parametrize("g", corpus(), ids=lambda g: g.name)
def test_corpus_tables_are_groups(g):
    assert _brute_is_group(g.table.tolist())
    for x in g.elements:
        assert g.add(x, g.neg(x)) == g.identity == g.add(g.neg(x), x)


@pytest.mark.parametrize("name,order,abelian", [
    ("z1", 1, True), ("z6", 6, True), ("k4", 4, True), ("s3", 6, False), ("s4", 24, False),
    ("d4", 8, False), ("q8", 8, False), ("z2xz4", 8, True), ("z2xs3", 12, False),
])
def test_builtin_orders(name, order, abelian):
    g = builtin_group(name)
    assert g.order == order
    assert g.is_abelian is abelian


def test_center_sizes(grp):
    assert len(grp("d4").center) == 2
    assert len(grp("q8").center) == 2
    assert grp("s3").center == frozenset({0})
    assert len(grp("z6").center) == 6


def test_symmetric_composition_convention():
    g = make_symmetric(3)
    # (s + t)(i) = s(t(i)); S3 is non-abelian so the order matters
    assert any(g.add(s, t) != g.add(t, s) for s in g.elements for t in g.elements)


def test_symmetric_degree_cap():
    with pytest.raises(CorpusLimitError):
        make_symmetric(6)


@pytest.mark.parametrize("ctor", [make_cyclic, make_dihedral, make_symmetric])
def test_invalid_order(ctor):
    with pytest.raises(InvalidOrderError):
        ctor(0)


def test_validation_errors_carry_coordinates():
    with pytest.raises(NotSquareError):
        from_cayley_table([[0, 1]])
    with pytest.raises(NotClosedError) as e:
        from_cayley_table([[0, 1], [1, 2]])
    assert e.value.coords == (1, 1)
    with pytest.raises(MissingInverseError) as e:
        from_cayley_table([[0, 1], [1, 1]])
    assert e.value.coords == (1,)
    # a loop that is not associative
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(NonAssociativeError) as e:
        from_cayley_table(t)
    a, b, c = e.value.coords
    assert t[t[a][b]][c] != t[a][t[b][c]]


def test_opposite_is_involution(grp):
    g = grp("s3")
    op = opposite(g)
    assert np.array_equal(op.table, g.table.T)
    assert opposite(op) == g
    assert is_isomorphic(g, op)


def test_direct_product_encoding():
    g = make_direct_product(make_cyclic(2), make_cyclic(4))
    # (1, 3) + (1, 2) = (0, 1)
    assert g.add(1 * 4 + 3, 1 * 4 + 2) == 1


def test_cosets_partition(grp):
    g = grp("s3")
    b = [0, 1]  # identity and a transposition
    for cos in (left_cosets(g, b), right_cosets(g, b)):
        assert sorted(e for c in cos for e in c) == list(range(6))
        assert all(len(c) == 2 for c in cos)
    assert set(left_cosets(g, b)) != set(right_cosets(g, b))


@pytest.mark.parametrize("name,count", [("z4", 2), ("k4", 6), ("s3", 6), ("z6", 2), ("q8", 24), ("d4", 8)])
def test_automorphism_counts(name, count):
    assert len(automorphisms(builtin_group(name))) == count


def test_isomorphism_classes():
    assert is_isomorphic(builtin_group("z2xz4"), builtin_group("z4xz2"))
    assert not is_isomorphic(builtin_group("d4"), builtin_group("q8"))
    assert not is_isomorphic(builtin_group("z4"), builtin_group("k4"))
    assert is_isomorphic(builtin_group("s3"), builtin_group("d3"))


def test_save_load_roundtrip(tmp_path, grp):
    g = grp("d4")
    p = tmp_path / "d4.json"
    save_group(g, p)
    h = load_group(p)
    assert h == g and h.name == "D4"
    p.write_text(json.dumps({"table": [[0, 1], [1, 1]]}))
    with pytest.raises(MissingInverseError):
        load_group(p)


def test_unknown_builtin():
    with pytest.raises(KeyError):
        builtin_group("a5")


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.data())
def test_cyclic_law(n, data):
    g = make_cyclic(n)
    x, y = data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1))
    assert g.add(x, y) == (x + y) % n
    assert g.sub(x, y) == (x - y) % n
