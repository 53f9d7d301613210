"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import structure as sm
from . import subsets as ss
from . import symmetry as sy
from . import torsors as tt
from .groups import FiniteGroup, GroupError, builtin_group, load_group
from .suites import CSV_COLUMNS, SuiteConfig, run_suite, to_csv, to_json, to_text

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SEED_ENV = "TORSORLAB_SEED"


class UsageError(Exception):
    pass


def resolve_group(spec: str) -> FiniteGroup:
    """Builtin name (``z6``, ``s3``, ``d4``, ``q8``, ``k4``, ``z2xz4``) or a JSON file path."""
    if spec.startswith("file:"):
        return load_group(spec[len("file:"):])
    try:
        return builtin_group(spec)
    except KeyError:
        pass
    if Path(spec).exists():
        return load_group(spec)
    raise UsageError(f"unknown group {spec!r}: not a builtin name and no such file")


def resolve_seed(value: int | None) -> int:
    if value is None:
        raw = os.environ.get(SEED_ENV, "0")
        try:
            value = int(raw)
        except ValueError:
            raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None
    if not 0 <= value < 1 << 64:
        raise UsageError(f"seed must be a 64-bit unsigned integer, got {value}")
    return value


def _subset(g: FiniteGroup, text: str, name: str) -> ss.Subset:
    try:
        return ss.parse_subset(g, text)
    except ValueError as exc:
        raise UsageError(f"--{name}: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --- commands -----------------------------------------------------------------------------

def cmd_gamma(args) -> int:
    g = resolve_group(args.group)
    x, a, y, b, z = (_subset(g, getattr(args, k), k) for k in "xaybz")
    fn = sm.gamma_check if args.opposite else sm.gamma
    print(ss.format_subset(fn(x, a, y, b, z)))
    return EXIT_OK


def cmd_sigma(args) -> int:
    g = resolve_group(args.group)
    b, x, y, z = (_subset(g, getattr(args, k), k) for k in "bxyz")
    fn = sm.sigma_check if args.opposite else sm.sigma
    print(ss.format_subset(fn(b, x, y, z)))
    return EXIT_OK


def cmd_suite(args) -> int:
    g = resolve_group(args.group)
    cfg = SuiteConfig(seed=resolve_seed(args.seed), mode=args.mode, threshold_subsets=args.threshold_subsets,
                      threshold_subgroups=args.threshold_subgroups)
    report = run_suite(g, cfg, select=args.select)
    writer = {"json": to_json, "csv": to_csv, "text": to_text}[args.format]
    _emit(writer(report, timings=args.timings), args.out)
    if args.out:
        s = report.summary()
        print(f"{report.group}: {s['pass']} passed, {s['fail']} failed, {s['skipped']} skipped -> {args.out}",
              file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def _require_subgroup(s: ss.Subset, name: str) -> None:
    if not ss.is_subgroup(s):
        raise UsageError(f"--{name} {ss.format_subset(s)} is not a subgroup")


def cmd_enumerate(args) -> int:
    g = resolve_group(args.group)
    if args.what == "grassmannian":
        items = ss.grassmannian(g)
        label = "subgroups"
    elif args.what == "transversals":
        if args.b is None:
            raise UsageError("transversals needs --b")
        b = _subset(g, args.b, "b")
        _require_subgroup(b, "b")
        items = ss.left_transversal_set(b) if args.side == "left" else ss.right_transversal_set(b)
        label = "sections"
    else:
        if args.b is None or (args.kind == "uab" and args.a is None):
            raise UsageError("carrier needs --b, and --a for --kind uab")
        b = _subset(g, args.b, "b")
        _require_subgroup(b, "b")
        if args.kind == "uab":
            a = _subset(g, args.a, "a")
            _require_subgroup(a, "a")
            items = tt.carrier_U_ab(a, b).elements
        else:
            items = tt.carrier_U_b(b).elements
        label = "elements"
    items = sorted(items, key=lambda s: s.sort_key)
    lines = [ss.format_subset(s) or "{}" for s in items]
    lines.append(f"{len(items)} {label}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_signtable(args) -> int:
    g = resolve_group(args.group)
    rows = sy.verify_sign_table(g)
    out = []
    failed = 0
    for r in rows:
        derived = sorted(str(v) for v in r.derived)
        status = "ok" if r.passed else "mismatch"
        fix = sy.SIGN_TABLE_ERRATA.get(r.s4_label)
        if not r.passed and args.errata and fix and sm.SignVector.parse(fix) in r.derived:
            status = "erratum"
        failed += status == "mismatch"
        out.append({"s4": r.s4_label, "sigma": r.sigma, "printed": str(r.table_vector), "derived": derived,
                    "status": status})
    if args.format == "json":
        text = json.dumps({"group": g.name, "rows": out}, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    else:
        text = "".join(f"{o['s4']:8s} {o['sigma']:14s} {o['printed']:22s} {' '.join(o['derived']):24s} "
                       f"{o['status']}\n" for o in out)
        text += f"{len(rows) - failed}/{len(rows)} rows realised\n"
    _emit(text, args.out)
    return EXIT_FAIL if failed else EXIT_OK


# --- parser -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="torsorlab",
        description="Structure maps on subsets of finite groups, their torsor laws and theorem suites.",
        epilog="Groups: z<n>, s<n>, d<n>, q8, k4, products such as z2xz4, or a JSON file "
               "({\"name\": ..., \"table\": [[...]]}), optionally prefixed with file:. "
               "Exit codes: 0 ok, 1 check failure, 2 usage or validation error.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", required=True, help="builtin group name or JSON file")
    common.add_argument("--out", help="write output to this file instead of stdout")

    q = sub.add_parser("gamma", parents=[common], help="evaluate Γ(x,a,y,b,z)")
    for k in "xaybz":
        q.add_argument(f"--{k}", required=True, help="comma-separated elements")
    q.add_argument("--opposite", action="store_true", help="use the opposite law (Γ̌)")
    q.set_defaults(fn=cmd_gamma)

    q = sub.add_parser("sigma", parents=[common], help="evaluate Σ(b,x,y,z)")
    for k in "bxyz":
        q.add_argument(f"--{k}", required=True, help="comma-separated elements")
    q.add_argument("--opposite", action="store_true", help="use the opposite law (Σ̌)")
    q.set_defaults(fn=cmd_sigma)

    q = sub.add_parser("suite", parents=[common], help="run the theorem suites",
                       epilog=f"CSV columns: {','.join(CSV_COLUMNS)} (plus elapsed with --timings).")
    q.add_argument("--seed", type=int, default=None, help=f"RNG seed (default ${SEED_ENV} or 0)")
    q.add_argument("--format", choices=("json", "csv", "text"), default="json")
    q.add_argument("--mode", choices=("auto", "exhaustive", "random"), default="auto")
    q.add_argument("--threshold-subsets", type=int, default=SuiteConfig.threshold_subsets,
                   help="power-set scans are exhaustive when 2^n is at most this")
    q.add_argument("--threshold-subgroups", type=int, default=SuiteConfig.threshold_subgroups,
                   help="subgroup scans are exhaustive when |Gras| is at most this")
    q.add_argument("--select", help="only run checks whose id starts with this prefix")
    q.add_argument("--timings", action="store_true", help="include wall-clock times (breaks byte equality)")
    q.set_defaults(fn=cmd_suite)

    q = sub.add_parser("enumerate", parents=[common], help="list subgroups, sections or torsor carriers")
    q.add_argument("what", choices=("grassmannian", "transversals", "carrier"))
    q.add_argument("--a")
    q.add_argument("--b")
    q.add_argument("--side", choices=("left", "right"), default="left",
                   help="transversals: left gives ^⊤b, right gives b^⊤")
    q.add_argument("--kind", choices=("uab", "ub"), default="uab")
    q.set_defaults(fn=cmd_enumerate)

    q = sub.add_parser("signtable", parents=[common], help="verify the sign table on a group")
    q.add_argument("--format", choices=("json", "text"), default="text")
    q.add_argument("--errata", action="store_true", help="accept rows matching a recorded erratum")
    q.set_defaults(fn=cmd_signtable)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (UsageError, GroupError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        coords = getattr(exc, "coords", None)
        print(f"error: {msg}" + (f" at {coords}" if coords else ""), file=sys.stderr)
        print(parser.format_usage().rstrip(), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
