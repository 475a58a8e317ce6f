"""Discriminant forms of ADE configurations, from the ground up.

Everything in this package is computed on finite quadratic forms: a finite
abelian group with a quadratic map q into Q/2Z (and its associated bilinear
linking map b into Q/Z), represented exactly with fractions.Fraction.

Run:  python3 demos/01_discriminants.py
"""
from fractions import Fraction

from realstrata.fqf import cyclic_form, u_block, v_block, direct_sum_all
from realstrata.lattices import RootSpec, disc_root, polarized_disc
from realstrata.nikulin import det_p
from realstrata.oracle import gauss_sum_signature


def main() -> None:
    print("== building blocks ==")
    f = cyclic_form(-1, 2)          # Z/2 with q(g) = -1/2 mod 2Z
    print("cyclic_form(-1, 2)  ->", f.display(), "  orders:", list(f.orders))
    u = u_block(1)                  # hyperbolic 2-group block, order 2 gens
    v = v_block(1)
    print("u_block(1)          ->", u.display())
    print("v_block(1)          ->", v.display())
    s = direct_sum_all([f, cyclic_form(1, 4)])
    print("direct sum          ->", s.display())
    print("q(g0 + g1) =", s.eval_q([1, 1]), " b(g0, g1) =", s.eval_b([1, 0], [0, 1]))
    print()

    print("== ADE root discriminants (root lattices taken negative definite) ==")
    for fam, n in [("A", 1), ("A", 2), ("A", 3), ("A", 7),
                   ("D", 4), ("D", 5), ("E", 6), ("E", 7), ("E", 8)]:
        d = disc_root(fam, n)
        disp = d.display() if d.rank else "[trivial]"
        print(f"  {fam}{n}: |disc| = {d.order:3d}   {disp}")
    print()
    print("A trailing * marks a generator with nonzero linking to another")
    print("generator (the D4 discriminant is not diagonalizable over Z/2).")
    print()

    print("== the polarized form of a stratum ==")
    spec = RootSpec.parse("D4+A2")
    pf = polarized_disc(spec, 4)    # quartic: h^2 = 4
    print("spec:", spec.canonical_text(), "  h^2 = 4")
    print("disc:", pf.display())
    print("rank_S =", pf.rank_S, " (root rank; h excluded)   rank_T =", pf.rank_T)
    print("generator tags:", pf.tags, " ('h' is always the last generator)")
    print()

    print("== exact invariants of that form ==")
    for p in (2, 3):
        sc = det_p(pf.form, p)
        print(f"  det_{p}: p^{sc.valuation} * unit {sc.unit}"
              f"  (unit graded {'mod squares' if p > 2 else 'mod (Z_2^*)^2'})")
    sig = gauss_sum_signature(pf.form)
    print("  signature mod 8 (independent Gauss-sum evaluation):", sig)
    print("  expected 1 - rank_S =", (1 - pf.rank_S) % 8, "(mod 8):",
          "the polarized lattice has signature (1, rank_S)")


if __name__ == "__main__":
    main()
