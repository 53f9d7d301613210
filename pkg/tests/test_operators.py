import itertools

import numpy as np
import pytest

from conftest import brute_gamma
from torsorlab import operators as op
from torsorlab import structure as sm
from torsorlab import subsets as ss
from torsorlab.groups import builtin_group
from torsorlab.operators import ElementMap, PartialMapError
from torsorlab.subsets import Subset, TransversalityError

S3 = builtin_group("s3")


def sub(g, text):
    return ss.parse_subset(g, text)


def test_element_map_arithmetic():
    g = S3
    f = ElementMap(g, [1, 2, 0, 4, 5, 3])
    h = ElementMap.identity(g)
    assert (f - f).values.tolist() == [0] * 6
    assert f + h == ElementMap(g, [g.add(v, i) for i, v in enumerate(f.values)])
    assert (f @ f.inverse()) == h
    part = ElementMap.identity(g, Subset.of(g, [0, 1]))
    with pytest.raises(PartialMapError):
        part + f
    assert part.domain == Subset.of(g, [0, 1])
    with pytest.raises(PartialMapError):
        part(3)


def test_noncommutative_pointwise_order():
    g = S3
    f, h = ElementMap.constant(g, 1), ElementMap.constant(g, 3)
    assert (f + h).values[0] == g.add(1, 3)
    assert g.add(1, 3) != g.add(3, 1)


def test_projection_decomposition():
    g = builtin_group("d4")
    for a in ss.grassmannian(g):
        for x in ss.right_transversal_set(a)[:8]:
            left, right = op.proj(a, x, "left"), op.proj(a, x, "right")
            for w in g.elements:
                assert right(w) in a and left(w) in x
                assert g.add(right(w), left(w)) == w


def test_projection_requires_transversality():
    a = sub(S3, "0,1")
    with pytest.raises(TransversalityError):
        op.P(a, a)


def test_transvection_forms_realise_sigma():
    g = S3
    for b in ss.grassmannian(g):
        secs = ss.left_transversal_set(b)
        for x, y in itertools.product(secs[:6], repeat=2):
            T = op.transvection(b, x, y, "b")
            for e in g.elements:
                assert sm.sigma(b, x, y, Subset.singleton(g, e)).elements == (T(e),)
        rsecs = ss.right_transversal_set(b)
        for x, y in itertools.product(rsecs[:6], repeat=2):
            T = op.transvection(b, x, y, "a")
            for e in g.elements:
                assert sm.sigma_check(b, x, y, Subset.singleton(g, e)).elements == (T(e),)


@pytest.mark.parametrize("name", ["s3", "d4", "q8"])
def test_mult_operators_on_singletons(name):
    g = builtin_group(name)
    rng = np.random.default_rng(0)
    for a, b in itertools.product(ss.grassmannian(g), repeat=2):
        R, L = ss.right_transversal_set(a), ss.left_transversal_set(b)
        x, z = R[int(rng.integers(len(R)))], L[int(rng.integers(len(L)))]
        y = L[int(rng.integers(len(L)))]
        M = op.mult_operator("M", x=x, a=a, b=b, z=z)
        Lm = op.mult_operator("L", x=x, a=a, y=y, b=b)
        Rm = op.mult_operator("R", a=a, y=R[0], b=b, z=z)
        for e in g.elements:
            s = Subset.singleton(g, e)
            assert brute_gamma(x, a, s, b, z).elements == (M(e),)
            assert brute_gamma(x, a, y, b, s).elements == (Lm(e),)
            assert brute_gamma(s, a, R[0], b, z).elements == (Rm(e),)


def test_mult_operator_names_failing_pair():
    a = sub(S3, "0,1")
    with pytest.raises(TransversalityError, match="a ⊤ x"):
        op.mult_operator("M", x=a, a=a, b=a, z=Subset.full(S3))
    with pytest.raises(ValueError):
        op.mult_operator("Q", x=a, a=a, b=a, z=a)


def test_canonical_kernel_bijectivity():
    g = builtin_group("d4")
    seen = {True: 0, False: 0}
    for a, b in itertools.product(ss.grassmannian(g), repeat=2):
        Ls = ss.left_transversal_set(b)
        for x, y in itertools.product(Ls[:6], repeat=2):
            if not ss.is_left_transversal(a, y):
                continue
            B = op.canonical_kernel(a, x, y, b).B
            flag = ss.is_left_transversal(a, x)
            assert B.is_bijective_onto(y) == flag
            seen[flag] += 1
    assert seen[True] and seen[False]


def test_canonical_kernel_undefined():
    o = Subset.identity(S3)
    with pytest.raises(TransversalityError):
        op.canonical_kernel(o, o, Subset.full(S3), o)
