"""Theorem suites: a static registry of checks, a runner and report writers.

Reports are deterministic: JSON keys are sorted, checks run in registry
order, and wall-clock times are only included on request.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import checks as ck
from . import structure as sm
from . import subsets as ss
from . import torsors as tt
from .checks import SuiteConfig
from .groups import FiniteGroup
from .verdict import Verdict

__all__ = [
    "SuiteConfig",
    "CheckResult",
    "SuiteReport",
    "Check",
    "REGISTRY",
    "RESULTS",
    "LATTICE_IDENTITIES",
    "run_suite",
    "run_lattice_suite",
    "to_json",
    "to_csv",
    "to_text",
]

STATUSES = ("pass", "fail", "skipped")


@dataclass
class CheckResult:
    check_id: str
    statement: str
    status: str
    group: str
    mode: str = ""
    checked: int = 0
    witness: object = None
    detail: str = ""
    elapsed: float | None = None

    def to_dict(self, timings: bool = False) -> dict:
        d = asdict(self)
        d["witness"] = _jsonable(self.witness)
        if not timings:
            d.pop("elapsed")
        return d


@dataclass
class SuiteReport:
    group: str
    order: int
    config: SuiteConfig
    results: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.results)

    def summary(self) -> dict[str, int]:
        return {s: sum(r.status == s for r in self.results) for s in STATUSES}

    def by_id(self, check_id: str) -> CheckResult:
        for r in self.results:
            if r.check_id == check_id:
                return r
        raise KeyError(check_id)


def _jsonable(w):
    if w is None or isinstance(w, (str, int, float, bool)):
        return w
    if isinstance(w, (np.integer,)):
        return int(w)
    if isinstance(w, (tuple, list)):
        return [_jsonable(v) for v in w]
    if isinstance(w, dict):
        return {str(k): _jsonable(v) for k, v in w.items()}
    return str(w)


# --- lattice identities --------------------------------------------------------------

class Identity(NamedTuple):
    name: str
    statement: str
    variables: str  # free variables drawn from Gras, in order
    lhs: Callable
    rhs: Callable
    extra_rhs: Callable | None = None
    any_subsets: str = ""  # variables drawn from arbitrary subsets containing o


def _ops(g: FiniteGroup):
    def G(x, a, y, b, z):
        return sm.gamma_batch(g, x, a, y, b, z)

    def plus(x, y):
        return ss.sumset_rows(g, x, y)

    return G, plus


def _lattice(g: FiniteGroup) -> list[Identity]:
    G, P = _ops(g)
    return [
        Identity("diag-x-eq-y.first", "Γ(x,a,x,b,z) = ((x∧a)+z)∧(x+b)", "xabz",
                 lambda v: G(v["x"], v["a"], v["x"], v["b"], v["z"]),
                 lambda v: P(v["x"] & v["a"], v["z"]) & P(v["x"], v["b"])),
        Identity("diag-x-eq-y.second", "Γ(x,a,x,b,z) = (x∧a)+(z∧(x+b))", "xabz",
                 lambda v: G(v["x"], v["a"], v["x"], v["b"], v["z"]),
                 lambda v: P(v["x"] & v["a"], v["z"] & P(v["x"], v["b"]))),
        Identity("diag-a-eq-z.first", "Γ(x,a,y,b,a) = ((x∧(a+y))+b)∧a", "xayb",
                 lambda v: G(v["x"], v["a"], v["y"], v["b"], v["a"]),
                 lambda v: P(v["x"] & P(v["a"], v["y"]), v["b"]) & v["a"]),
        Identity("diag-a-eq-z.second", "Γ(x,a,y,b,a) = (x+((y+a)∧b))∧a", "xayb",
                 lambda v: G(v["x"], v["a"], v["y"], v["b"], v["a"]),
                 lambda v: P(v["x"], P(v["y"], v["a"]) & v["b"]) & v["a"]),
        Identity("diag-b-eq-z.first", "Γ(x,a,y,b,b) = ((a+(y∧b))∧x)+b", "xayb",
                 lambda v: G(v["x"], v["a"], v["y"], v["b"], v["b"]),
                 lambda v: P(P(v["a"], v["y"] & v["b"]) & v["x"], v["b"])),
        Identity("diag-b-eq-z.second", "Γ(x,a,y,b,b) = (a∧(x+(y∧b)))+b", "xayb",
                 lambda v: G(v["x"], v["a"], v["y"], v["b"], v["b"]),
                 lambda v: P(v["a"] & P(v["x"], v["y"] & v["b"]), v["b"])),
        Identity("idempotent", "Γ(x,a,x,b,x) = x", "xab",
                 lambda v: G(v["x"], v["a"], v["x"], v["b"], v["x"]), lambda v: v["x"]),
        Identity("join", "Γ(a,a,y,b,b) = a+b", "ayb",
                 lambda v: G(v["a"], v["a"], v["y"], v["b"], v["b"]), lambda v: P(v["a"], v["b"])),
        Identity("meet", "Γ(b,a,y,b,a) = a∧b", "ayb",
                 lambda v: G(v["b"], v["a"], v["y"], v["b"], v["a"]), lambda v: v["a"] & v["b"]),
        Identity("modular", "((x∧a)+z)∧x = (x∧a)+(z∧x)", "xaz",
                 lambda v: P(v["x"] & v["a"], v["z"]) & v["x"],
                 lambda v: P(v["x"] & v["a"], v["z"] & v["x"])),
        Identity("dual-modular", "x+(z∧(x+b)) = (x+z)∧(x+b)", "xzb",
                 lambda v: P(v["x"], v["z"] & P(v["x"], v["b"])),
                 lambda v: P(v["x"], v["z"]) & P(v["x"], v["b"])),
        Identity("absorption.meet", "x∧(x+y) = x for any x and y ∋ o", "",
                 lambda v: v["x"] & P(v["x"], v["y"]), lambda v: v["x"], any_subsets="xy"),
        Identity("absorption.join", "x+(x∧y) = x = (x∧y)+x for a subgroup x and y ∋ o", "x",
                 lambda v: P(v["x"], v["x"] & v["y"]), lambda v: v["x"],
                 extra_rhs=lambda v: P(v["x"] & v["y"], v["x"]), any_subsets="y"),
    ]


# the identity lambdas only touch the group when called
LATTICE_IDENTITIES = tuple(i.name for i in _lattice(None))


def _check_identity(g: FiniteGroup, cfg: SuiteConfig, ident: Identity) -> Verdict:
    n = g.order
    gras = ss.grassmannian(g)
    G = sm.to_bool(gras, n)
    check_id = f"lattice.{ident.name}"
    rng = tt.rng_for(cfg.seed, check_id)
    k = len(ident.variables)
    exhaustive = ck._gras_exhaustive(gras, cfg) and len(gras) ** k <= 1 << 20
    if exhaustive:
        idx = np.indices((len(gras),) * k).reshape(k, -1) if k else np.zeros((0, 1), dtype=int)
        mode = "exhaustive over Gras"
    else:
        idx = rng.integers(0, len(gras), size=(k, cfg.samples))
        mode = f"random over Gras(seed={cfg.seed},k={cfg.samples})"
    rows = idx.shape[1]
    vals = {name: G[idx[i]] for i, name in enumerate(ident.variables)}
    if ident.any_subsets:
        reps = max(1, cfg.samples // rows)
        vals = {name: np.repeat(v, reps, axis=0) for name, v in vals.items()}
        rows *= reps
        for name in ident.any_subsets:
            r = ck._random_rows(rng, (rows,), n)
            if name == "y":
                r[:, g.identity] = True
            vals[name] = r
        mode += f"; {''.join(ident.any_subsets)} random subsets"
    lhs = ident.lhs(vals)
    rhs = ident.rhs(vals)
    bad = (lhs != rhs).any(axis=1)
    if ident.extra_rhs is not None:
        bad |= (ident.extra_rhs(vals) != rhs).any(axis=1)
    i = ck._first_bad(bad)
    names = ident.variables + "".join(c for c in ident.any_subsets if c not in ident.variables)
    if i is not None:
        w = tuple(f"{nm}={ss.format_subset(sm.from_bool(g, vals[nm][i])[0])}" for nm in names)
        return Verdict.fail(w, f"{ident.statement} fails", rows, mode=mode)
    return Verdict.ok(rows, ident.statement, mode=mode)


def run_lattice_suite(g: FiniteGroup, cfg: SuiteConfig | None = None,
                      identities: tuple[str, ...] | None = None) -> list[tuple[str, Verdict]]:
    cfg = cfg or SuiteConfig()
    out = []
    for ident in _lattice(g):
        if identities is None or ident.name in identities:
            out.append((f"lattice.{ident.name}", _check_identity(g, cfg, ident)))
    return out


def _lattice_check(name: str):
    def fn(g, cfg):
        ident = next(i for i in _lattice(g) if i.name == name)
        return _check_identity(g, cfg, ident)
    fn.__name__ = f"check_lattice_{name}"
    return fn


# --- registry ----------------------------------------------------------------------------

class Check(NamedTuple):
    check_id: str
    result: str  # the statement family this check exercises
    statement: str
    fn: Callable[[FiniteGroup, SuiteConfig], Verdict]


# Named results in scope; every one maps to at least one check.
RESULTS = (
    "structure space", "equivalent systems", "symmetry relation", "identity stability",
    "semitorsor theorem", "central subgroups", "relation composition", "commuting composition",
    "bijection torsor", "transversal triples", "pointwise torsor", "balanced torsor",
    "restricted laws", "opposite torsor", "actions", "central Grassmannian",
    "projection lemma", "transvection group", "multiplication operators", "idempotent lemma",
    "kernel lemma", "direct-product kernel", "affine picture", "left distributivity",
    "right distributivity", "kernel homomorphism", "near-ring", "Big Klein group",
    "first symmetry theorem", "second symmetry theorem", "Klein invariance", "orbit count",
    "lattice identities",
)

REGISTRY: tuple[Check, ...] = (
    Check("structure.equivalent-systems", "equivalent systems",
          "all displayed systems cut out the same structure space", ck.check_equivalent_systems),
    Check("structure.oracle-agreement", "structure space",
          "Γ, Γ̌ and Σ match their brute-force oracles", ck.check_oracle_agreement),
    Check("structure.batch-agreement", "structure space",
          "vectorised kernels match the scalar maps", ck.check_batch_agreement),
    Check("structure.symmetry-relation", "symmetry relation",
          "Γ̌(z,b,y,a,x) = Γ(x,a,y,b,z)", ck.check_symmetry_relation),
    Check("structure.identity-stable", "identity stability",
          "subsets containing o are stable under all four maps", ck.check_identity_stable),
    Check("structure.torsor-graph-projection", "structure space",
          "projection of 𝚪 lies in the torsor graph", ck.check_torsor_graph_projection),
    Check("semitorsor.balanced", "semitorsor theorem",
          "Γ_ab is para-associative on 𝒫", ck.check_para_balanced),
    Check("semitorsor.balanced-check", "semitorsor theorem",
          "Γ̌_ab is para-associative on 𝒫", ck.check_para_balanced_check),
    Check("semitorsor.unbalanced", "semitorsor theorem",
          "Σ_b is para-associative on 𝒫", ck.check_para_unbalanced),
    Check("semitorsor.unbalanced-check", "semitorsor theorem",
          "Σ̌_b is para-associative on 𝒫", ck.check_para_unbalanced_check),
    Check("semitorsor.central", "central subgroups",
          "central a, b: the four laws coincide up to opposition and preserve Gras", ck.check_central),
    Check("relations.composition", "relation composition",
          "a ⊤ b: z∘y⁻¹∘x = Γ(x,a,y,b,z)", ck.check_relation_composition),
    Check("relations.gras-stable", "commuting composition",
          "commuting a ⊤ b: Gras is stable", ck.check_gras_stable_commuting),
    Check("bijection.torsor", "bijection torsor",
          "a ⊤ b: U_ab = Bij(a, b), |U_ab| = |a|!", ck.check_bijection_torsor),
    Check("triples.aut", "transversal triples",
          "U'_ab is isomorphic to Aut(a)", ck.check_transversal_triples),
    Check("pointwise.torsor", "pointwise torsor",
          "U_b and Ǔ_b are torsors realised by sections and by Map(y, b)", ck.check_pointwise_torsors),
    Check("balanced.torsor", "balanced torsor",
          "U_ab is a torsor whenever nonempty", ck.check_balanced_torsors),
    Check("balanced.closure", "restricted laws",
          "Γ restricts to a^⊤ × ^⊤b × a^⊤ and ^⊤b × a^⊤ × ^⊤b", ck.check_balanced_closure),
    Check("balanced.opposite", "opposite torsor",
          "Ǔ_ba = U_ab^opp", ck.check_balanced_opposite),
    Check("balanced.actions", "actions",
          "U_ab acts through L and R; conjugation gives B; trivialisation gives K", ck.check_actions),
    Check("gras.central-action", "central Grassmannian",
          "central a, b: Gras ∩ U_ab is a subtorsor acting on Gras", ck.check_gras_central_action),
    Check("operators.projection-lemma", "projection lemma",
          "projection identities", ck.check_projection_lemma),
    Check("operators.transvections", "transvection group",
          "T-group law and Σ, Σ̌ through transvections", ck.check_transvections),
    Check("operators.mult", "multiplication operators",
          "Γ = M_{xabz}(y) = L_{xayb}(z) = R_{aybz}(x)", ck.check_mult_operators),
    Check("operators.idempotent-lemma", "idempotent lemma",
          "L_{xaxb} = id and R_{ayby} = id", ck.check_idempotent_lemma),
    Check("operators.kernel-lemma", "kernel lemma",
          "bijectivity criteria and transvection forms of K, Ǩ, B", ck.check_kernel_lemma),
    Check("operators.kernel-direct-product", "direct-product kernel",
          "Ω = y × b: B = id - A∘X", ck.check_kernel_direct_product),
    Check("affine.picture", "affine picture",
          "Γ(G_X, a, y, b, G_Z) = G_{X + Z∘B}", ck.check_affine_picture),
    Check("affine.left-distributive", "left distributivity",
          "U_ab acts on U_b by torsor morphisms", ck.check_left_distributive),
    Check("affine.right-distributive-witness", "right distributivity",
          "right distributivity fails in general", ck.check_right_distributive_witness),
    Check("affine.kernel-homomorphism", "kernel homomorphism",
          "X ↦ B^X is a homomorphism G_A → Bij(y)^op", ck.check_kernel_homomorphism),
    Check("nearring.laws", "near-ring",
          "·_A is associative with quasi-inverses; Map(Ω, Ω) is a near-ring", ck.check_near_ring),
    Check("symmetry.big-klein", "Big Klein group",
          "𝐕 is an S4 of even, block preserving letter permutations", ck.check_big_klein),
    Check("symmetry.sign-table", "first symmetry theorem",
          "σ.𝚪 = 𝚪^s for every row of the sign table", ck.check_sign_table),
    Check("symmetry.sign-parity", "first symmetry theorem",
          "sign changes have the parity of the permutation", ck.check_sign_parity),
    Check("symmetry.second", "second symmetry theorem",
          "the four identities relating Γ and Γ̌", ck.check_second_symmetry),
    Check("symmetry.klein-invariance", "Klein invariance",
          "torsor graphs are invariant under the Klein four-group", ck.check_klein_invariance),
    Check("symmetry.orbit", "orbit count",
          "orbit data of 𝚪 under 𝐕", ck.check_orbit),
) + tuple(
    Check(f"lattice.{i.name}", "lattice identities", i.statement, _lattice_check(i.name))
    for i in _lattice(None)
)


def _mode(v: Verdict) -> str:
    if v.extra.get("skipped"):
        return ""
    # checks that do not sample report no mode
    return str(v.extra.get("mode") or "exhaustive")


def run_suite(g: FiniteGroup, cfg: SuiteConfig | None = None, select: str | None = None) -> SuiteReport:
    """Run every registered check (or those whose id starts with ``select``)."""
    cfg = cfg or SuiteConfig()
    report = SuiteReport(g.name or f"order-{g.order}", g.order, cfg)
    for chk in REGISTRY:
        if select and not chk.check_id.startswith(select):
            continue
        t0 = time.perf_counter()
        try:
            v = chk.fn(g, cfg)
        except Exception as exc:  # a crashing check is reported, not hidden
            w = getattr(exc, "witness", None) or (type(exc).__name__, str(exc))
            v = Verdict.fail(w, f"{type(exc).__name__}: {exc}")
        dt = time.perf_counter() - t0
        if v.extra.get("skipped"):
            status = "skipped"
        else:
            status = "pass" if v.passed else "fail"
        report.results.append(CheckResult(chk.check_id, chk.statement, status, report.group,
                                          _mode(v), v.checked, v.witness, v.detail, dt))
    return report


# --- writers -----------------------------------------------------------------------------

def to_json(report: SuiteReport, timings: bool = False) -> str:
    doc = {
        "group": report.group,
        "order": report.order,
        "seed": report.config.seed,
        "config": asdict(report.config),
        "summary": report.summary(),
        "checks": [r.to_dict(timings) for r in report.results],
    }
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


CSV_COLUMNS = ("check_id", "status", "group", "mode", "statement", "witness")


def to_csv(report: SuiteReport, timings: bool = False) -> str:
    buf = io.StringIO()
    cols = CSV_COLUMNS + (("elapsed",) if timings else ())
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in report.results:
        row = [r.check_id, r.status, r.group, r.mode, r.statement,
               "" if r.witness is None else json.dumps(_jsonable(r.witness), ensure_ascii=False)]
        if timings:
            row.append(f"{r.elapsed:.3f}")
        w.writerow(row)
    return buf.getvalue()


def to_text(report: SuiteReport, timings: bool = False) -> str:
    lines = [f"group {report.group} (order {report.order}), seed {report.config.seed}"]
    for r in report.results:
        t = f" [{r.elapsed:.2f}s]" if timings else ""
        line = f"{r.status.upper():7s} {r.check_id}{t}: {r.detail or r.statement}"
        if r.status == "fail" and r.witness is not None:
            line += f" | witness {_jsonable(r.witness)}"
        lines.append(line)
    s = report.summary()
    lines.append(f"{s['pass']} passed, {s['fail']} failed, {s['skipped']} skipped")
    return "\n".join(lines) + "\n"
