"""Root specs, Cartan matrices, discriminants of ADE lattices, polarized
forms, symmetry-induced involutions, and rank-2 isometry groups."""
from fractions import Fraction

import pytest

from realstrata.fqf import canon_mod2, trivial_form
from realstrata.lattices import (RootSpec, binary_autos, cartan_matrix,
                                 disc_involutions, disc_of_gram, disc_root,
                                 maximizing_has_skew, polarized_disc)
from realstrata.oracle import brute_involutions

# ------------------------------------------------------------------ RootSpec


def test_rootspec_parse_and_rank():
    rs = RootSpec.parse("D7+A6+A3+A2")
    assert rs.components == (("D", 7), ("A", 6), ("A", 3), ("A", 2))
    assert rs.rank == 18
    assert RootSpec.parse("2*A1+A3").components == \
        (("A", 1), ("A", 1), ("A", 3))
    assert RootSpec.parse("").components == ()
    assert RootSpec.parse("  A1 + A2 ").rank == 3


def test_rootspec_canonical_text():
    assert RootSpec.parse("A3+2*A1").canonical_text() == "A3+2*A1"
    assert RootSpec.parse("A1+A3+A1").canonical_text() == "A3+2*A1"
    assert RootSpec.parse("").canonical_text() == "0"
    assert RootSpec.parse("D7+A6+A3+A2").canonical_text() == "D7+A6+A3+A2"


def test_rootspec_rejects_invalid():
    for bad in ("A0", "D3", "E5", "E9", "B2", "A1+", "0*A1", "Q7"):
        with pytest.raises(ValueError):
            RootSpec.parse(bad)


# ------------------------------------------------------------ Cartan martix


def _det(mat):
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        total += (-1) ** j * mat[0][j] * _det(minor)
    return total


def test_cartan_determinants():
    # det A_n = n+1, det D_n = 4, det E6 = 3, det E7 = 2, det E8 = 1
    for n in range(1, 9):
        assert _det(cartan_matrix("A", n)) == n + 1
    for n in range(4, 9):
        assert _det(cartan_matrix("D", n)) == 4
    assert _det(cartan_matrix("E", 6)) == 3
    assert _det(cartan_matrix("E", 7)) == 2
    assert _det(cartan_matrix("E", 8)) == 1


def test_cartan_symmetric_with_minus_one_edges():
    mat = cartan_matrix("D", 5)
    for i in range(5):
        assert mat[i][i] == 2
        for j in range(5):
            assert mat[i][j] == mat[j][i]
            if i != j:
                assert mat[i][j] in (0, -1)


# ---------------------------------------------------------------- disc_root


def test_disc_root_anchors():
    assert disc_root("A", 7).display() == "[-7/8]"
    assert disc_root("D", 7).display() == "[1/4]"
    assert disc_root("E", 8) == trivial_form()
    assert disc_root("A", 2).display() == "[-2/3]"
    assert disc_root("A", 3).display() == "[-3/4]"
    assert disc_root("E", 7).display() == "[1/2]"
    assert disc_root("E", 6).display() == "[2/3]"
    assert disc_root("A", 1).display() == "[-1/2]"


def test_disc_root_orders():
    for n in range(1, 9):
        assert disc_root("A", n).order == n + 1
    for n in range(4, 9):
        assert disc_root("D", n).order == 4
    assert disc_root("D", 5).orders == (4,)
    assert disc_root("D", 6).orders == (2, 2)


def test_disc_root_d_even_spinor_classes():
    for n in (4, 6, 8):
        form = disc_root("D", n)
        target = canon_mod2(Fraction(-n, 4))
        assert form.eval_q((1, 0)) == target
        assert form.eval_q((0, 1)) == target
        # the vector class is the sum of the two spinor classes
        assert form.eval_q((1, 1)) == canon_mod2(Fraction(-1))


def test_disc_root_splits_composite_cyclic():
    # A5 disc has order 6, presented as prime-power pieces
    form = disc_root("A", 5)
    assert sorted(form.orders) == [2, 3]


def test_disc_root_always_from_even_lattice():
    for fam, n in (("A", 1), ("A", 4), ("A", 7), ("D", 4), ("D", 7),
                   ("E", 6), ("E", 7), ("E", 8)):
        form = disc_root(fam, n)
        for i in range(form.rank):
            gen = tuple(1 if j == i else 0 for j in range(form.rank))
            q = form.eval_q(gen)
            assert (q * form.orders[i]).denominator <= 2


# ------------------------------------------------------------- disc_of_gram


def test_disc_of_gram_examples():
    gd = disc_of_gram([[-2]])
    assert gd.form.display() == "[-1/2]"
    gd = disc_of_gram([[2, 0], [0, 4]])
    assert sorted(gd.form.orders) == [2, 4]
    vals = sorted((gd.form.order_of(x), gd.form.eval_q(x))
                  for x in gd.form.iter_elements())
    assert (2, Fraction(1, 2)) in vals
    assert (4, Fraction(1, 4)) in vals
    with pytest.raises(ValueError):
        disc_of_gram([[2, 2], [2, 2]])


def test_disc_of_gram_to_coords():
    gd = disc_of_gram([[4]])
    assert gd.form.orders == (4,)
    zero = gd.to_coords([4])
    assert zero == (0,)


# ------------------------------------------------------------ polarized_disc


def test_polarized_disc_golden_displays():
    pf = polarized_disc(RootSpec.parse("D7+A6+A3+A2"), 4)
    assert pf.display() == "[1/4] (+) [-6/7] (+) [-3/4] (+) [-2/3] (+) [1/4]"
    pf = polarized_disc(RootSpec.parse("A7+A6+A3+A2"), 4)
    assert pf.display() == "[-7/8] (+) [-6/7] (+) [-3/4] (+) [-2/3] (+) [1/4]"
    pf = polarized_disc(RootSpec.parse("A7+A6+A5"), 2)
    assert pf.display() == "[-7/8] (+) [-6/7] (+) [2/3] (+) [1/2] (+) [1/2]"


def test_polarized_disc_tags_and_h_block():
    pf = polarized_disc(RootSpec.parse("2*A1+A3"), 4)
    assert pf.tags == [0, 1, 2, "h"]
    assert pf.rank_S == 5 and pf.rank_T == 16
    h_idx = pf.tags.index("h")
    assert pf.form.orders[h_idx] == 4
    gen = tuple(1 if i == h_idx else 0 for i in range(pf.form.rank))
    assert pf.form.eval_q(gen) == Fraction(1, 4)
    # component-tagged generators reproduce each component disc verbatim
    for idx, (lo, hi) in enumerate(pf.comp_slices):
        fam, n = pf.spec.components[idx]
        comp = disc_root(fam, n)
        assert pf.form.orders[lo:hi] == comp.orders
        for k in range(hi - lo):
            gen = tuple(1 if i == lo + k else 0 for i in range(pf.form.rank))
            unit = tuple(1 if i == k else 0 for i in range(comp.rank))
            assert pf.form.eval_q(gen) == comp.eval_q(unit)


def test_polarized_disc_rejects_bad_h2():
    with pytest.raises(ValueError):
        polarized_disc(RootSpec.parse("A1"), 3)
    with pytest.raises(ValueError):
        polarized_disc(RootSpec.parse("A1"), 0)


# --------------------------------------------------------- disc_involutions


def test_disc_involutions_are_involutions():
    pf = polarized_disc(RootSpec.parse("D4+A2"), 4)
    autos = disc_involutions(pf)
    assert autos, "never empty: identity and h-negation at least"
    seen = set()
    for a in autos:
        assert a.is_involution()
        key = a.matrix
        assert key not in seen, "deduplicated"
        seen.add(key)


def test_disc_involutions_2a1_contains_swap():
    pf = polarized_disc(RootSpec.parse("2*A1"), 4)
    mats = {a.matrix for a in disc_involutions(pf)}
    swap = ((0, 1, 0), (1, 0, 0), (0, 0, 1))
    assert swap in mats


def test_disc_involutions_e8_only_h():
    pf = polarized_disc(RootSpec.parse("E8"), 4)
    mats = {a.matrix for a in disc_involutions(pf)}
    assert mats == {((1,),), ((3,),)}   # +-id on the h generator


def test_disc_involutions_subset_of_brute():
    for spec, h2 in (("A3", 4), ("A1+A2", 4), ("D4", 4)):
        pf = polarized_disc(RootSpec.parse(spec), h2)
        eng = {a.matrix for a in disc_involutions(pf)}
        brute = {a.matrix for a in brute_involutions(pf.form)}
        assert eng <= brute


# -------------------------------------------------------------- binary_autos


def _matmul2(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2))
                       for j in range(2)) for i in range(2))


def test_binary_autos_orders():
    assert len(binary_autos([[2, 0], [0, 2]])) == 8
    assert len(binary_autos([[2, 1], [1, 2]])) == 12
    autos = binary_autos([[2, 0], [0, 6]])
    assert len(autos) == 4
    mats = {tuple(tuple(r) for r in m) for m in autos}
    assert mats == {((1, 0), (0, 1)), ((-1, 0), (0, -1)),
                    ((1, 0), (0, -1)), ((-1, 0), (0, 1))}


def test_binary_autos_group_closure_and_reflections():
    for gram in ([[2, 0], [0, 2]], [[2, 1], [1, 2]], [[2, 0], [0, 6]],
                 [[4, 1], [1, 4]]):
        autos = binary_autos(gram)
        mats = {tuple(tuple(r) for r in m) for m in autos}
        assert ((1, 0), (0, 1)) in mats
        assert ((-1, 0), (0, -1)) in mats
        for a in mats:
            for b in mats:
                assert _matmul2(a, b) in mats, "closure"
            det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
            assert det in (1, -1)
            if det == -1 and _matmul2(a, a) == ((1, 0), (0, 1)):
                assert a[0][0] + a[1][1] == 0, \
                    "rank-2 skew involutions are reflections (trace 0)"


def test_binary_autos_rejects_indefinite():
    with pytest.raises(ValueError):
        binary_autos([[2, 3], [3, 2]])
    with pytest.raises(ValueError):
        binary_autos([[-2, 0], [0, 2]])


# -------------------------------------------------------- maximizing_has_skew


def test_maximizing_has_skew_accepts_matching_pair():
    pf = polarized_disc(RootSpec.parse("A3"), 2)
    assert maximizing_has_skew(((2, 0), (0, 4)), pf) is True


def test_maximizing_has_skew_rejects_mismatched_disc():
    pf = polarized_disc(RootSpec.parse("A1"), 4)
    with pytest.raises(ValueError):
        maximizing_has_skew(((2, 0), (0, 4)), pf)
