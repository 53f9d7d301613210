"""A walk through the subset torsors of a small group.

Run with ``python3 demos/torsor_tour.py [group]`` (default ``s3``).
"""
import sys

from torsorlab import builtin_group, gamma, grassmannian, parse_subset, sigma
from torsorlab import subsets as ss
from torsorlab import torsors as tt
from torsorlab.groups import is_isomorphic


def main(name: str = "s3") -> None:
    g = builtin_group(name)
    gras = grassmannian(g)
    print(f"{g.name}: order {g.order}, {len(gras)} subgroups")
    for s in gras:
        print("  ", s)

    # the two degenerate parameter choices
    x, y, z = (parse_subset(g, t) for t in ("0,1", "1,2", "0,2"))
    o, full = gras[0], gras[-1]
    print(f"\nx={x}  y={y}  z={z}")
    print("Γ(x,{o},y,{o},z) =", gamma(x, o, y, o, z), "  (plain intersection)")
    print("Γ(x,Ω,y,Ω,z)     =", gamma(x, full, y, full, z), "  (x - y + z)")

    # pointwise torsors U_b
    print("\nU_b for each subgroup b:")
    for b in gras:
        c = tt.carrier_U_b(b)
        v = tt.check_para_associativity(c.law, c.elements, "auto")
        print(f"  b={str(b):<14} |U_b|={len(c):<4} para-associative: {bool(v)} ({v.checked} tuples)")

    # balanced torsors U_ab, some of them empty
    print("\nNonempty U_ab:")
    for a in gras:
        for b in gras:
            c = tt.carrier_U_ab(a, b)
            if c.is_empty or len(c) == 1:
                continue
            base = c.elements[0]
            grp = tt.group_from_basepoint(c, base)
            kind = "abelian" if grp.is_abelian else "non-abelian"
            print(f"  a={str(a):<10} b={str(b):<10} |U_ab|={len(c):<3} basepointed group: {kind}")

    b = gras[1]
    u = tt.carrier_U_b(b)
    if len(u) >= 3:
        x1, x2, x3 = u.elements[:3]
        print(f"\nΣ(b={b}) on three sections: {x1}, {x2}, {x3} -> {sigma(b, x1, x2, x3)}")

    whole = tt.group_torsor(g)
    back = tt.group_from_basepoint(whole, whole.elements[0])
    print(f"\nsingletons under x - y + z recover {g.name}: {is_isomorphic(back, g)}")


if __name__ == "__main__":
    main(*sys.argv[1:2])
