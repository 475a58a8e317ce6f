"""Brute-force cross-checks: exhaustive automorphism groups, coset-built
subquotients, exact Gauss-sum signatures, and witness revalidation."""
import pytest

from realstrata.detector import KernelCandidate, detect, kernel_candidates
from realstrata.fqf import (cyclic_form, direct_sum_all, trivial_form,
                            u_block, v_block)
from realstrata.lattices import (DiscAutomorphism, RootSpec, disc_involutions,
                                 disc_root, polarized_disc)
from realstrata.nikulin import ambient_with_a_block, theta_vector
from realstrata.oracle import (ORACLE_CUTOFF, ElementTable, OracleSizeError,
                               brute_aut_group, brute_involutions,
                               brute_kernel_candidates, brute_subquotient,
                               expected_killed_by, gauss_sum_signature,
                               revalidate_witness,
                               verify_subquotient_presentation)

# ------------------------------------------------------------- Gauss sums


GAUSS_ANCHORS = [
    (cyclic_form(1, 2), 1),
    (cyclic_form(-1, 2), 7),
    (cyclic_form(1, 4), 1),
    (cyclic_form(3, 4), 3),
    (cyclic_form(-7, 8), 1),
    (cyclic_form(2, 3), 2),
    (cyclic_form(-2, 3), 6),
    (u_block(1), 0),
    (v_block(1), 4),
    (trivial_form(), 0),
]


def test_gauss_sum_anchors():
    for form, sigma in GAUSS_ANCHORS:
        assert gauss_sum_signature(form) == sigma, form.display()


def test_gauss_sum_of_root_discs_matches_minus_rank():
    cases = [("A", n) for n in range(1, 8)] + \
            [("D", n) for n in range(4, 8)] + \
            [("E", n) for n in (6, 7, 8)]
    for fam, n in cases:
        form = disc_root(fam, n)
        assert gauss_sum_signature(form) == (-n) % 8, f"{fam}{n}"


def test_gauss_sum_additivity():
    pairs = [(cyclic_form(1, 2), cyclic_form(2, 3)),
             (cyclic_form(-7, 8), v_block(1)),
             (disc_root("D", 7), disc_root("A", 2))]
    for a, b in pairs:
        total = gauss_sum_signature(a.direct_sum(b))
        assert total == (gauss_sum_signature(a)
                         + gauss_sum_signature(b)) % 8


# ----------------------------------------------------- brute automorphisms


def test_brute_aut_group_cyclic():
    assert len(brute_aut_group(cyclic_form(-7, 8))) == 2   # only +-1
    assert len(brute_aut_group(cyclic_form(1, 4))) == 2
    assert len(brute_aut_group(trivial_form())) == 1


def test_brute_involutions_are_involutions():
    # U(2): q-values (0, 0, 1) on the nonzero elements, so only the swap
    assert len(brute_involutions(u_block(1))) == 2
    # the D4 disc has q = 1 on all three nonzero elements: aut group S3,
    # whose involutions are the identity plus the three transpositions
    d4 = disc_root("D", 4)
    invs = brute_involutions(d4)
    assert len(invs) == 4
    assert len(brute_aut_group(d4)) == 6
    for auto in invs:
        assert auto.is_involution()


def test_size_cutoff_raises():
    with pytest.raises(OracleSizeError):
        ElementTable(cyclic_form(1, 512), cutoff=256)
    with pytest.raises(OracleSizeError):
        brute_aut_group(u_block(3), cutoff=16)   # order 64


# ----------------------------------------- engine-vs-brute involution counts

# strata where every involution of the discriminant is symmetry-induced
EXPECT_EQUAL = {
    ("A1", 4): 2,
    ("A2", 4): 4,
    ("A2+A1", 4): 4,
    ("2*A2", 4): 12,
    ("D4", 4): 8,
    ("A4", 4): 4,
    ("E6", 4): 4,
    ("E7", 4): 2,
    ("A3", 2): 2,
}


def test_involution_concordance_equal_cases():
    for (spec, h2), count in EXPECT_EQUAL.items():
        pf = polarized_disc(RootSpec.parse(spec), h2)
        eng = {a.matrix for a in disc_involutions(pf)}
        brute = {a.matrix for a in brute_involutions(pf.form)}
        assert eng == brute, (spec, h2)
        assert len(eng) == count, (spec, h2)


def test_involution_concordance_strict_inclusions():
    # discs with exotic involutions not induced by any lattice symmetry the
    # engine models; the engine set must be a proper subset
    for (spec, h2), (n_eng, n_brute) in {("A3", 4): (4, 6),
                                         ("A5", 2): (2, 4)}.items():
        pf = polarized_disc(RootSpec.parse(spec), h2)
        eng = {a.matrix for a in disc_involutions(pf)}
        brute = {a.matrix for a in brute_involutions(pf.form)}
        assert eng < brute, (spec, h2)
        assert (len(eng), len(brute)) == (n_eng, n_brute), (spec, h2)


# ------------------------------------------------------------- subquotients


def test_brute_subquotient_trivial_kernel():
    form = u_block(2)        # U(4)
    bq = brute_subquotient(form, [])
    assert bq.order == form.order
    assert bq.killed_by == expected_killed_by(form.orders)


def test_brute_subquotient_isotropic_line():
    form = u_block(2)        # U(4), kernel <2*u1>
    bq = brute_subquotient(form, [(2, 0)])
    assert bq.order == 4     # 16 / 2^2
    assert bq.length_p(2) == 2


def test_brute_subquotient_rejects_anisotropic_kernel():
    with pytest.raises(AssertionError):
        brute_subquotient(cyclic_form(1, 2), [(1,)])


def test_expected_killed_by():
    assert expected_killed_by([2, 4]) == {1: 1, 2: 4, 4: 8}
    assert expected_killed_by([3]) == {1: 1, 3: 3}
    assert expected_killed_by([]) == {1: 1}


def test_verify_subquotient_presentation_on_candidates():
    pf = polarized_disc(RootSpec.parse("A3"), 4)
    for a2, n in ((4, 1), (2, 2), (8, 2), (2, 1)):
        for cand in kernel_candidates(pf, a2, n):
            big = ambient_with_a_block(pf.form, cand.a2)
            theta = big.reduce(theta_vector(pf.form, cand.kappa, cand.n))
            assert verify_subquotient_presentation(big, [theta]) is True


def test_brute_kernel_candidates_matches_engine_small():
    for spec, h2 in (("A1", 4), ("A3", 4), ("A1+A2", 4)):
        pf = polarized_disc(RootSpec.parse(spec), h2)
        for a2 in (2, 4, 8):
            for n in (1, 2):
                brute = brute_kernel_candidates(pf, a2, n)
                engine = sorted(c.kappa
                                for c in kernel_candidates(pf, a2, n))
                assert brute == engine, (spec, a2, n)


# -------------------------------------------------------------- revalidation


def test_revalidate_witness_full_chain():
    pf = polarized_disc(RootSpec.parse("A1"), 4)
    phi = DiscAutomorphism(pf.form, [[1, 0], [0, 1]])
    cand = KernelCandidate(2, 2, (0, 0))
    assert revalidate_witness(pf, cand, phi) is True


def test_revalidate_witness_skipped_over_cutoff():
    pf = polarized_disc(RootSpec.parse("6*A1"), 4)   # order 256
    cand = KernelCandidate(32, 1, (0,) * pf.form.rank)
    assert revalidate_witness(pf, cand, None) == "skipped_cutoff"


def test_revalidate_witness_rejects_wrong_phi():
    pf = polarized_disc(RootSpec.parse("A1"), 4)
    cand = KernelCandidate(4, 1, (1, 1))
    # identity does not negate kappa = (1,1) (order 4): must trip the checks
    phi = DiscAutomorphism(pf.form, [[1, 0], [0, 1]])
    with pytest.raises(AssertionError):
        revalidate_witness(pf, cand, phi)


def test_detect_reports_pass_revalidation():
    rep = detect(4, "D4")
    assert rep.verdict == "witness_found"
    assert rep.witness_revalidated is True
