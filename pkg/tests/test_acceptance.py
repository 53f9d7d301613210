"""Acceptance criteria, one test each.

Every test records a single ``criterion N: PASS/FAIL`` line (see conftest) that
is echoed live and repeated in the terminal summary.
"""
import itertools
import math
import os
import subprocess
import sys
import time

import pytest

from torsorlab import affine as af
from torsorlab import checks as ck
from torsorlab import structure as sm
from torsorlab import subsets as ss
from torsorlab import symmetry as sy
from torsorlab import torsors as tt
from torsorlab.checks import SuiteConfig, direct_decompositions
from torsorlab.groups import CORPUS, builtin_group, is_isomorphic, make_symmetric
from torsorlab.structure import SignVector
from torsorlab.suites import run_lattice_suite, run_suite

pytestmark = pytest.mark.acceptance

SMALL = [n for n in CORPUS if builtin_group(n).order <= 8]
PRODUCTS = ["k4", "z2xz4", "z2xz2xz2", "z3xz3", "z2xs3", "z4xz4"]


def test_criterion_1_semitorsor_laws(criterion):
    laws = (ck.check_para_balanced, ck.check_para_balanced_check,
            ck.check_para_unbalanced, ck.check_para_unbalanced_check)
    cfg = SuiteConfig(seed=0, samples=10_000)
    notes, failures = [], []
    t0 = time.perf_counter()
    for name in ("z2", "z4", "s3", "d4", "q8", "z2xz4"):
        g = builtin_group(name)
        counts = []
        for law in laws:
            v = law(g, cfg)
            want = "exhaustive" if name in ("z2", "z4") else "random"
            if not v or not v.extra["mode"].startswith(want) or (want == "random" and v.checked < 10_000):
                failures.append((name, law.__name__, v))
            counts.append(v.checked)
        notes.append(f"{name}:{min(counts)}")
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 60
    criterion(1, ok, f"four laws, min 5-tuples per law {' '.join(notes)}, {elapsed:.1f}s")
    assert not failures, failures
    assert elapsed < 60


def test_criterion_2_torsor_axioms(criterion):
    checked = empty = carriers = 0
    failures = []
    for name in SMALL:
        g = builtin_group(name)
        gras = ss.grassmannian(g)
        for b in gras:
            c = tt.carrier_U_b(b)
            for v in (tt.check_para_associativity(c.law, c.elements, "exhaustive"),
                      tt.check_idempotent(c.law, c.elements)):
                checked += v.checked
                if not v:
                    failures.append((name, "U_b", str(b), v))
            carriers += 1
        for a, b in itertools.product(gras, repeat=2):
            c = tt.carrier_U_ab(a, b)
            if c.is_empty:
                empty += 1
                continue
            for v in (tt.check_para_associativity(c.law, c.elements, "exhaustive"),
                      tt.check_idempotent(c.law, c.elements)):
                checked += v.checked
                if not v:
                    failures.append((name, "U_ab", str(a), str(b), v))
            carriers += 1
    criterion(2, not failures, f"{carriers} carriers over {len(SMALL)} groups, {checked} tuples, "
                               f"{empty} empty U_ab skipped")
    assert not failures, failures[:3]
    assert carriers > 0


def test_criterion_3_bijection_torsor(criterion):
    notes, failures = [], []
    for name in ("k4", "z3xz3"):
        g = builtin_group(name)
        decs = direct_decompositions(g)
        assert decs
        for a, b in decs:
            u = tt.carrier_U_ab(a, b)
            grp = tt.group_from_basepoint(u, u.elements[0])
            good = (len(u) == math.factorial(len(a))
                    and is_isomorphic(grp, make_symmetric(len(a))))
            if name == "z3xz3":
                good = good and grp.order == 6 and not grp.is_abelian
            if not good:
                failures.append((name, str(a), str(b), len(u)))
        notes.append(f"{name}: {len(decs)} factor pairs, |U_ab|={len(u)}")
    criterion(3, not failures, "; ".join(notes) + ", basepointed group ≅ Bij(a)")
    assert not failures, failures


def test_criterion_4_relation_composition(criterion):
    cfg = SuiteConfig(seed=0, samples_relations=1000)
    total, failures, modes = 0, [], {}
    for name in CORPUS:
        g = builtin_group(name)
        v = ck.check_relation_composition(g, cfg)
        total += v.checked
        modes[name] = v.extra["mode"]
        if not v:
            failures.append((name, v))
    pairs = len(ck._transversal_pairs(builtin_group("k4")))
    ok = not failures and modes["k4"] == "exhaustive"
    criterion(4, ok, f"{total} triples across {len(modes)} groups, K4 exhaustive over {pairs} pairs")
    assert not failures, failures
    assert modes["k4"] == "exhaustive"


OPERATOR_CHECKS = (ck.check_projection_lemma, ck.check_transvections, ck.check_mult_operators,
                   ck.check_idempotent_lemma, ck.check_kernel_lemma, ck.check_kernel_direct_product)


def test_criterion_5_operator_calculus(criterion):
    cfg = SuiteConfig(seed=0, config_limit=10**9)
    total, failures = 0, []
    for name in SMALL:
        g = builtin_group(name)
        for fn in OPERATOR_CHECKS:
            v = fn(g, cfg)
            if not v:
                failures.append((name, fn.__name__, v))
            if not v.extra.get("skipped"):
                total += v.checked
    criterion(5, not failures, f"{total} configurations over {len(SMALL)} groups of order ≤ 8, no cap")
    assert not failures, failures


def test_criterion_6_affine_picture(criterion):
    total, failures = 0, []
    for name in PRODUCTS:
        g = builtin_group(name)
        for y, b in direct_decompositions(g):
            if len(b) ** len(y) > 64:
                continue
            maps = list(af.all_maps(y, b))
            for a in ss.grassmannian(g):
                if not ss.is_left_transversal(a, y):
                    continue
                for X, Z in itertools.product(maps, repeat=2):
                    x = af.graph(X)
                    if not ss.is_left_transversal(a, x):
                        continue
                    W = af.affine_product(X, Z, a, y, b)
                    if af.graph(W) != sm.gamma(x, a, y, b, af.graph(Z)):
                        failures.append((name, str(x), str(a), str(y), str(b)))
                    total += 1
    k4 = builtin_group("k4")
    dist = 0
    for a, b in itertools.product(ss.grassmannian(k4), repeat=2):
        v = af.check_left_distributive(a, b, mode="exhaustive")
        dist += v.checked
        if not v:
            failures.append(("k4", "left-distributive", v))
    for name in ("s3", "d4", "q8", "z2xz4"):
        v = ck.check_left_distributive(builtin_group(name), SuiteConfig(seed=0))
        dist += v.checked
        if not v:
            failures.append((name, "left-distributive", v))
    ok = not failures and total > 0
    criterion(6, ok, f"{total} (X,Z) pairs on {len(PRODUCTS)} products, {dist} distributivity tuples")
    assert not failures, failures[:3]


@pytest.mark.xfail(strict=True, reason="the printed row (13) is not realised; see the erratum test below")
def test_criterion_7_sign_table(criterion):
    t0 = time.perf_counter()
    rows = {name: sy.verify_sign_table(builtin_group(name)) for name in ("s3", "d4", "z4")}
    elapsed = time.perf_counter() - t0
    bad = sorted({r.s4_label for rs in rows.values() for r in rs if not r.passed})
    singletons = all(r.singleton for r in rows["s3"])
    ok = not bad and singletons and elapsed < 10
    passed = {name: sum(r.passed for r in rs) for name, rs in rows.items()}
    text = f"rows passing {passed} of 24, {elapsed:.1f}s"
    if bad:
        row = next(r for r in rows["s3"] if r.s4_label == bad[0])
        derived = ", ".join(str(s) for s in row.derived)
        text += f"; printed row {bad[0]} = {row.table_vector} not realised, derived {{{derived}}}"
    criterion(7, ok, text)
    assert ok


def test_criterion_7_rest_of_table_and_erratum():
    """Everything in criterion 7 except the printed row holds, and the corrected row does."""
    t0 = time.perf_counter()
    fixed = SignVector.parse(sy.SIGN_TABLE_ERRATA["(13)"])
    for name in ("s3", "d4", "z4"):
        rows = sy.verify_sign_table(builtin_group(name))
        assert [r.s4_label for r in rows if not r.passed] == ["(13)"]
        assert fixed in next(r for r in rows if r.s4_label == "(13)").derived
        if name == "s3":
            assert all(r.singleton for r in rows)
    assert time.perf_counter() - t0 < 10


def test_criterion_8_lattice(criterion):
    cfg = SuiteConfig(seed=0)
    total, failures = 0, []
    for name in ("z4", "z6", "k4", "s3", "d4"):
        g = builtin_group(name)
        for cid, v in run_lattice_suite(g, cfg):
            if not v or not v.extra["mode"].startswith("exhaustive"):
                failures.append((name, cid, v))
            total += v.checked
    criterion(8, not failures, f"13 identities × 5 groups exhaustive over Gras, {total} tuples")
    assert not failures, failures


GAMMA_FAMILIES = {"structure", "semitorsor", "relations", "balanced", "operators", "affine", "symmetry",
                  "lattice"}


def _fails(report):
    return [r for r in report.results if r.status == "fail"]


def test_criterion_9_mutation_controls(criterion, monkeypatch, request):
    g = builtin_group("s3")
    request.getfixturevalue("flipped_gamma")
    flipped = _fails(run_suite(g))
    monkeypatch.undo()
    request.getfixturevalue("swapped_sumset")
    swapped = _fails(run_suite(g))
    monkeypatch.undo()
    fam = {r.check_id.split(".")[0] for r in flipped}
    witnessed = all(r.witness is not None for r in flipped + swapped)
    ok = GAMMA_FAMILIES <= fam and bool(swapped) and witnessed
    criterion(9, ok, f"flipped Γ caught by {len(flipped)} checks in {len(fam)} families, "
                     f"swapped sumset caught by {len(swapped)} checks, all with witnesses")
    assert ok
    assert run_suite(g).ok


def test_criterion_10_determinism(criterion, tmp_path):
    outs = []
    for i, hashseed in enumerate(("1", "2")):
        path = tmp_path / f"run{i}.json"
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        env.pop("TORSORLAB_SEED", None)
        p = subprocess.run([sys.executable, "-m", "torsorlab", "suite", "--group", "d4", "--seed", "7",
                            "--out", str(path)], capture_output=True, env=env)
        assert p.returncode == 0, p.stderr
        outs.append(path.read_bytes())
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    criterion(10, ok, f"two runs of suite --group d4 --seed 7, {len(outs[0])} bytes, identical={ok}")
    assert ok
