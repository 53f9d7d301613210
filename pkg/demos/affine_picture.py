"""Γ on graphs of maps is an affine formula, shown on Z3 × Z3.

Every subset transversal to ``a`` is the graph of a map X: y -> b, and
Γ(G_X, a, y, b, G_Z) is the graph of X + Z∘B with B the canonical kernel.
"""
import itertools

from torsorlab import affine as af
from torsorlab import builtin_group, gamma
from torsorlab import subsets as ss
from torsorlab import torsors as tt
from torsorlab.checks import direct_decompositions


def main() -> None:
    g = builtin_group("z3xz3")
    y, b = direct_decompositions(g)[0]
    print(f"Ω = {g.name} = y × b with y={y}, b={b}")
    maps = list(af.all_maps(y, b))
    print(f"{len(maps)} maps y -> b")

    for a in ss.grassmannian(g):
        if not ss.is_left_transversal(a, y):
            continue
        agree = total = bijective = 0
        for X, Z in itertools.product(maps, repeat=2):
            x = af.graph(X)
            if not ss.is_left_transversal(a, x):
                continue
            total += 1
            agree += af.graph(af.affine_product(X, Z, a, y, b)) == gamma(x, a, y, b, af.graph(Z))
        for X in maps:
            bijective += af.kernel_map(X, a, b).is_bijective
        print(f"  a={str(a):<14} {agree}/{total} pairs agree, kernel bijective for {bijective}/{len(maps)} X")

    # one worked example
    a = next(s for s in ss.grassmannian(g) if ss.is_left_transversal(s, y) and s != b)
    X, Z = maps[4], maps[7]
    B = af.kernel_map(X, a, b)
    print(f"\nX={X.values}  Z={Z.values}  B={B.values}")
    print("graph(X + Z∘B) =", af.graph(af.affine_product(X, Z, a, y, b)))
    print("Γ(G_X,a,y,b,G_Z) =", gamma(af.graph(X), a, y, b, af.graph(Z)))

    # left distributivity holds, the mirror law can fail
    print("\nleft distributive on Z3 × Z3:",
          all(af.check_left_distributive(a, c).passed for a, c in itertools.product(ss.grassmannian(g), repeat=2)))
    h = builtin_group("z4xz4")
    a, c = ss.parse_subset(h, "0,5,10,15"), ss.parse_subset(h, "0,1,2,3")
    print(f"right distributivity counterexample on {h.name}:", af.find_right_distributive_witness(a, c))
    u = tt.carrier_U_ab(a, c)
    print(f"  (U_ab has {len(u)} elements there)")


if __name__ == "__main__":
    main()
