"""Derive the sign vector of every Big Klein permutation and compare with the printed table.

Run with ``python3 demos/sign_table.py [group]`` (default ``s3``).
"""
import sys

from torsorlab import builtin_group
from torsorlab import symmetry as sy


def main(name: str = "s3") -> None:
    g = builtin_group(name)
    rows = sy.verify_sign_table(g)
    print(f"sign vectors on {g.name} (letters ξ ζ α β η ω)\n")
    print(f"{'S4':<10} {'σ':<16} {'printed':<22} derived")
    for r in rows:
        derived = ", ".join(str(s) for s in sorted(r.derived, key=str))
        mark = "" if r.passed else "   <- not realised"
        print(f"{r.s4_label:<10} {r.sigma:<16} {str(r.table_vector):<22} {derived}{mark}")
    bad = [r.s4_label for r in rows if not r.passed]
    print(f"\n{len(rows) - len(bad)}/24 printed rows realised")
    for label in bad:
        print(f"corrected {label}: {sy.SIGN_TABLE_ERRATA[label]}")
    counts = sy.orbit_counts(g)
    print(f"\norbit of the structure space: {counts}")


if __name__ == "__main__":
    main(*sys.argv[1:2])
