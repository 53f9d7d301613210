import itertools

import numpy as np
import pytest

from torsorlab import structure as sm
from torsorlab import subsets as ss
from torsorlab import torsors as tt
from torsorlab.groups import builtin_group, is_isomorphic, make_symmetric
from torsorlab.subsets import Subset


def sub(g, text):
    return ss.parse_subset(g, text)


def _brute_para(law, dom):
    """Pure-python para-associativity scan used as an oracle on tiny domains."""
    for x, y, z, u, v in itertools.product(dom, repeat=5):
        l = law(x, y, law(z, u, v))
        m = law(x, law(u, z, y), v)
        r = law(law(x, y, z), u, v)
        if not l == m == r:
            return False
    return True


@pytest.mark.parametrize("make", [tt.balanced_law, tt.balanced_check_law])
def test_balanced_laws_on_z2(grp, make):
    g = grp("z2")
    dom = ss.all_subsets(g)
    for a, b in itertools.product(ss.grassmannian(g), repeat=2):
        law = make(a, b)
        v = tt.check_para_associativity(law, tt.PowerSet(g), "exhaustive")
        assert v.passed and v.checked == 4 ** 5
        assert _brute_para(law, dom)


def test_random_mode_is_seeded(grp):
    g = grp("s3")
    law = tt.unbalanced_law(sub(g, "0,1"))
    v1 = tt.check_para_associativity(law, tt.PowerSet(g), "random", seed=5, k=500)
    v2 = tt.check_para_associativity(law, tt.PowerSet(g), "random", seed=5, k=500)
    assert v1.passed and v1 == v2 and v1.extra["mode"] == "random(seed=5,k=500)"


def test_pointwise_law_is_para_associative(grp):
    g = grp("s3")
    v = tt.check_para_associativity(tt.pointwise_law(g), tt.PowerSet(g), "random", k=2000)
    assert v.passed


def test_wrong_law_control(grp):
    # x + y + z is para-associative on an abelian group but not on S3
    def law_for(g):
        return tt.TernaryLaw("x+y+z", g, lambda x, y, z: ss.sumset(ss.sumset(x, y), z))

    g = grp("z3")
    singles = [Subset.singleton(g, e) for e in g.elements]
    assert tt.check_para_associativity(law_for(g), singles, "exhaustive").passed
    g = grp("s3")
    singles = [Subset.singleton(g, e) for e in g.elements]
    v = tt.check_para_associativity(law_for(g), singles, "exhaustive")
    assert not v.passed and len(v.witness) == 5


def test_idempotency_fails_on_powerset(grp):
    g = grp("z4")
    v = tt.check_idempotent(tt.unbalanced_law(sub(g, "0,2")), tt.PowerSet(g))
    assert not v.passed
    assert v.witness == ("", "0")


def test_carrier_counts(grp):
    g = grp("k4")
    c = tt.carrier_U_ab(sub(g, "0,1"), sub(g, "0,2"))
    assert len(c) == 2
    g = grp("z4")
    c = tt.carrier_U_b(sub(g, "0,2"))
    assert sorted(ss.format_subset(x) for x in c.elements) == ["0,1", "0,3", "1,2", "2,3"]
    assert tt.check_idempotent(c.law, c.elements).passed
    assert tt.check_para_associativity(c.law, c.elements).passed


def test_empty_carrier(grp):
    g = grp("s3")
    c = tt.carrier_U_ab(Subset.identity(g), Subset.full(g))
    assert c.is_empty
    with pytest.raises(ValueError):
        tt.check_para_associativity(c.law, c.elements)


@pytest.mark.parametrize("name,fa,fb,order,abelian", [
    ("k4", "0,1", "0,2", 2, True),
    ("z3xz3", "0,1,2", "0,3,6", 6, False),
])
def test_bijection_torsor(name, fa, fb, order, abelian):
    g = builtin_group(name)
    a, b = sub(g, fa), sub(g, fb)
    c = tt.carrier_U_ab(a, b)
    assert len(c) == order
    h = tt.group_from_basepoint(c, c.elements[0])
    assert h.order == order and h.is_abelian is abelian
    assert is_isomorphic(h, make_symmetric(len(a)))


def test_group_from_basepoint_identity(grp):
    g = grp("z4")
    c = tt.carrier_U_b(sub(g, "0,2"))
    for y in c.elements:
        h = tt.group_from_basepoint(c, y)
        assert h.identity == c.index(y)


def test_compose_relations_matches_gamma(grp):
    g = grp("s3")
    rng = np.random.default_rng(4)
    pairs = [(a, b) for a, b in itertools.product(ss.grassmannian(g), repeat=2) if ss.is_left_transversal(a, b)]
    assert pairs
    for a, b in pairs:
        for _ in range(50):
            x, y, z = (Subset(g, int(v)) for v in rng.integers(0, 64, 3))
            assert tt.compose_relations(x, y, z, a, b) == sm.gamma(x, a, y, b, z)


@pytest.mark.parametrize("name,aut_order", [("k4", 1), ("z3xz3", 2)])
def test_transversal_triples(name, aut_order):
    g = builtin_group(name)
    triples = tt.find_transversal_triples(g)
    assert triples
    for tr in triples:
        v, h = tt.check_transversal_triple(*tr)
        assert v.passed, v
        assert h.order == aut_order


def test_no_transversal_triple_in_s3(grp):
    assert tt.find_transversal_triples(grp("s3")) == []


def test_transversal_triple_rejects_bad_input(grp):
    g = grp("k4")
    v, h = tt.check_transversal_triple(sub(g, "0,1"), sub(g, "0,1"), sub(g, "0,2"))
    assert not v.passed and h is None


def test_opposite_carrier(grp):
    g = grp("s3")
    for a, b in itertools.product(ss.grassmannian(g), repeat=2):
        u = tt.carrier_U_ab(a, b, verify=False)
        if u.is_empty:
            continue
        uc = tt.carrier_U_ba_check(a, b)
        for x, y, z in itertools.product(u.elements, repeat=3):
            assert uc.law(x, y, z) == u.law(z, y, x)


def test_torsor_graph_size(grp):
    c = tt.group_torsor(grp("s3"))
    tg = tt.torsor_graph(c)
    assert len(tg) == 6 ** 3
    for x, y, z, w in list(tg)[:30]:
        assert (y, x, w, z) in tg


def test_rng_streams_independent():
    a = tt.rng_for(0, "one").random(4)
    b = tt.rng_for(0, "two").random(4)
    assert not np.allclose(a, b)
    assert np.allclose(a, tt.rng_for(0, "one").random(4))
