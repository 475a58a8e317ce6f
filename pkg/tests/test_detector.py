"""End-to-end decision engine: candidate enumeration, witness search,
verdicts, conclusiveness bases, and report shape."""
import json
from pathlib import Path

import pytest

import realstrata
from realstrata.detector import (BASES, REASONS, VERDICTS, KernelCandidate,
                                 check_candidate, detect, enumerate_a_squares,
                                 kernel_candidates, model_name, parse_model)
from realstrata.lattices import RootSpec, polarized_disc

# ------------------------------------------------------------ a-square range


def test_enumerate_a_squares_small():
    pf = polarized_disc(RootSpec.parse("A1"), 4)
    assert enumerate_a_squares(pf) == [2, 4, 8]


def test_enumerate_a_squares_golden_ranges():
    pf = polarized_disc(RootSpec.parse("D7+A6+A3+A2"), 4)
    divs = enumerate_a_squares(pf)
    assert divs[0] == 2 and divs[-1] == 168
    assert all(d % 2 == 0 and 168 % d == 0 for d in divs)
    assert divs == sorted(divs)
    pf = polarized_disc(RootSpec.parse("A7+A6+A5"), 2)
    divs = enumerate_a_squares(pf)
    assert divs[-1] == 336 and 8 in divs and 84 in divs


# --------------------------------------------------------- kernel candidates


def test_kernel_candidates_frozen_a4_n1():
    pf = polarized_disc(RootSpec.parse("D7+A6+A3+A2"), 4)
    got = sorted(c.kappa for c in kernel_candidates(pf, 4, 1))
    assert got == [(1, 0, 1, 0, 1), (1, 0, 1, 0, 3),
                   (1, 0, 3, 0, 1), (1, 0, 3, 0, 3),
                   (3, 0, 1, 0, 1), (3, 0, 1, 0, 3),
                   (3, 0, 3, 0, 1), (3, 0, 3, 0, 3)]
    assert all(c.a2 == 4 and c.n == 1 for c in kernel_candidates(pf, 4, 1))


def test_kernel_candidates_trivial_pair():
    pf = polarized_disc(RootSpec.parse("A1"), 4)
    cands = kernel_candidates(pf, 2, 2)
    assert [c.kappa for c in cands] == [(0, 0)]


def test_kernel_candidates_empty_when_no_order():
    pf = polarized_disc(RootSpec.parse("A7+A6+A5"), 2)
    assert kernel_candidates(pf, 8, 1) == []


def test_kernel_candidates_n_divides_a2():
    pf = polarized_disc(RootSpec.parse("A1"), 4)
    assert kernel_candidates(pf, 3, 2) == []


def test_kernel_candidates_closed_under_negation():
    for spec, h2 in (("A3", 4), ("D4+A2", 4), ("A7+A6+A5", 2)):
        pf = polarized_disc(RootSpec.parse(spec), h2)
        for a2 in enumerate_a_squares(pf):
            for n in (1, 2):
                kappas = {c.kappa for c in kernel_candidates(pf, a2, n)}
                assert {pf.form.neg(k) for k in kappas} == kappas


# ------------------------------------------------------------- model parsing


def test_model_name_round_trip():
    assert model_name(4) == "quartic" and parse_model("quartic") == 4
    assert model_name(2) == "sextic" and parse_model("sextic") == 2
    assert parse_model("sextic-planar") == 2
    assert model_name(6) == "h2=6" and parse_model("h2=6") == 6
    assert parse_model(" QUARTIC ") == 4


def test_parse_model_errors():
    with pytest.raises(ValueError):
        parse_model("cubic")
    with pytest.raises(ValueError):
        parse_model("h2=5")
    with pytest.raises(ValueError):
        parse_model("h2=0")


# ------------------------------------------------------------------- detect


def test_detect_rejects_rank_over_19():
    with pytest.raises(ValueError):
        detect(4, "2*E8+A4")


def test_detect_witness_smokes():
    for spec in ("A1", "A2", ""):
        rep = detect(4, spec)
        assert rep.verdict == "witness_found"
        assert rep.conclusiveness_basis == "corlem1"
        w = rep.witness
        assert (w["a2"], w["n"]) == (2, 2)
        assert not any(w["kappa"])
        r = pf_rank = len(w["phi"])
        assert w["phi"] == [[1 if i == j else 0 for j in range(r)]
                            for i in range(pf_rank)]
        assert rep.witness_revalidated is True
        assert rep.trace == []
        assert rep.oracle_checked is False


def test_detect_sextic_witness():
    rep = detect(2, "A1")
    assert rep.verdict == "witness_found"
    assert rep.conclusiveness_basis == "corlem1"
    assert rep.model == "sextic"


def test_detect_oracle_full_agreement_small():
    for spec in ("A1", "A2", "A3", "A1+A2"):
        rep = detect(4, spec, oracle=True)
        assert rep.verdict == "witness_found"
        assert rep.oracle_checked is True


def test_detect_inconclusive_below_rank_18():
    rep = detect(4, "4*A1+E8+D5")
    assert rep.rank_S == 17
    assert rep.verdict == "inconclusive"
    assert rep.conclusiveness_basis is None
    assert rep.witness is None
    reasons = {row["reason"] for row in rep.trace}
    assert reasons == {"genus_empty", "no_kappa"}


def test_detect_rank19_needs_t_gram():
    rep = detect(4, "D7+A6+A3+A2+A1")
    assert rep.rank_S == 19
    assert rep.verdict == "needs_T_gram"
    assert rep.conclusiveness_basis is None
    assert rep.witness is None and rep.trace == []


def test_detect_rank19_with_t_gram():
    rep = detect(4, "2*E8+A2+A1", tgram=[[4, 0], [0, 6]])
    assert rep.verdict == "witness_found"
    assert rep.conclusiveness_basis == "rankT2"
    assert rep.witness is None      # decision by reflection, not gluing data


def test_detect_threads_deterministic():
    base = detect(4, "D4+A2", threads=1)
    multi = detect(4, "D4+A2", threads=4)
    for attr in ("verdict", "conclusiveness_basis", "witness", "trace",
                 "disc_display", "rank_S", "rank_T", "model", "spec_text"):
        assert getattr(base, attr) == getattr(multi, attr)


def test_check_candidate_statuses():
    pf = polarized_disc(RootSpec.parse("A1"), 4)
    status, phi = check_candidate(pf, KernelCandidate(2, 2, (0, 0)))
    assert status == "witness" and phi.is_involution()


# ------------------------------------------------------------------- report


def test_vocabularies():
    assert set(REASONS) == {"no_kappa", "genus_empty", "no_involution_cond2",
                            "no_involution_cond3"}
    assert set(VERDICTS) == {"witness_found", "none_exists", "inconclusive",
                             "needs_T_gram"}
    assert set(BASES) == {"corlem1", "corlem2", "rankT2", "rankT3"}


def test_report_json_matches_schema_keys():
    schema = json.loads((Path(realstrata.__file__).parent
                         / "report_schema.json").read_text())
    rep = detect(4, "A1")
    doc = rep.to_json_dict()
    assert set(doc) == set(schema["required"])
    assert doc["version"] == realstrata.__version__
    assert doc["model"] == "quartic"
    assert doc["spec"] == "A1"
    assert doc["rank_S"] == 1 and doc["rank_T"] == 20
    assert doc["disc"]["display"] == "[-1/2] (+) [1/4]"
    assert doc["disc"]["tags"] == [0, "h"]
    round_trip = json.loads(rep.to_json())
    assert round_trip == json.loads(json.dumps(doc))


def test_report_trace_rows_use_reason_vocabulary():
    rep = detect(4, "4*A1+E8+D5")
    for row in rep.trace:
        assert set(row) == {"a2", "n", "kappa", "reason"}
        assert row["reason"] in REASONS
        if row["reason"] == "no_kappa":
            assert row["kappa"] is None
