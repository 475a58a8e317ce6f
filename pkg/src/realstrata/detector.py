"""Decision engine: does an equisingular stratum contain a real member?

For a polarized discriminant pf (root spec + polarization square) the engine
searches over gluing data (a2, n, kappa) for an isotropic kernel
K = <kappa (+) n alpha> in disc (+) [1/a2] such that

  (a) the overlattice genus K-perp/K embeds into the even unimodular
      signature (3, 19) lattice with signature (2, rank_S), and
  (b) some symmetry-induced involution phi of the polarized discriminant
      satisfies phi(kappa) = -kappa and phi (+) (-1) induces the identity
      on K-perp/K.

A successful (a2, n, kappa, phi) is a witness; exhausting the search at
rank_S = 18 is conclusive nonexistence; at rank_S = 19 the decision reduces
to reflections of the rank-2 transcendental-side lattice T.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .fqf import Element, FiniteQuadraticForm, canon_mod2
from .isotropy import subquotient
from .lattices import (DiscAutomorphism, PolarizedForm, RootSpec,
                       disc_involutions, maximizing_has_skew, polarized_disc)
from .nikulin import ambient_with_a_block, genus_tilde_nonempty, theta_vector

SCOPE_NOTE = (
    "A witness certifies only that the polarized lattice extends to some "
    "abstract homological type admitting an involutive skew-automorphism; "
    "it does not identify which homological type carries it, nor certify "
    "any particular one.")

REASONS = ("no_kappa", "genus_empty", "no_involution_cond2",
           "no_involution_cond3")

VERDICTS = ("witness_found", "none_exists", "inconclusive", "needs_T_gram")

BASES = ("corlem1", "corlem2", "rankT2", "rankT3")


@dataclass(frozen=True)
class KernelCandidate:
    """One gluing datum: kernel order a2/n, generator kappa (+) n alpha."""
    a2: int
    n: int
    kappa: Element


def enumerate_a_squares(pf: PolarizedForm) -> List[int]:
    """Even divisors of twice the exponent of the polarized discriminant,
    ascending — the complete range of polarizing squares a^2."""
    e = 2 * pf.form.exponent()
    divs = [d for d in range(2, e + 1) if e % d == 0 and d % 2 == 0]
    return divs


def _candidate_buckets(pf: PolarizedForm) -> Dict[Tuple[int, Fraction],
                                                  List[Element]]:
    buckets = pf._cache.get("buckets")
    if buckets is None:
        buckets = {}
        form = pf.form
        for x in form.iter_elements():
            key = (form.order_of(x), form.eval_q(x))
            buckets.setdefault(key, []).append(x)
        for key in buckets:
            buckets[key].sort()
        pf._cache["buckets"] = buckets
    return buckets


def kernel_candidates(pf: PolarizedForm, a2: int, n: int
                      ) -> List[KernelCandidate]:
    """All kappa with order a2/n and q(kappa) = -n^2/a2 mod 2, in
    lexicographic coordinate order."""
    if a2 % n:
        return []
    order = a2 // n
    target = canon_mod2(Fraction(-n * n, a2))
    buckets = _candidate_buckets(pf)
    elems = buckets.get((order, target), [])
    return [KernelCandidate(a2, n, x) for x in elems]


def _big_phi_apply(phi: DiscAutomorphism, big: FiniteQuadraticForm,
                   x: Sequence[int]) -> Element:
    """(phi (+) -id) on disc (+) [1/a2]."""
    r = phi.form.rank
    head = phi.apply(x[:r])
    return big.reduce(list(head) + [-x[r]])


def check_candidate(pf: PolarizedForm, cand: KernelCandidate,
                    phis: Optional[List[DiscAutomorphism]] = None
                    ) -> Tuple[str, Optional[DiscAutomorphism]]:
    """Involution conditions for one candidate (genus not included).

    Returns ("witness", phi) for the first symmetry-induced involution with
    phi(kappa) = -kappa inducing the identity on K-perp/K, else
    ("no_involution_cond2"|"no_involution_cond3", None).
    """
    if phis is None:
        phis = disc_involutions(pf)
    form = pf.form
    neg = form.neg(cand.kappa)
    cond2 = [phi for phi in phis if phi.apply(cand.kappa) == neg]
    if not cond2:
        return "no_involution_cond2", None
    big = ambient_with_a_block(form, cand.a2)
    theta = big.reduce(theta_vector(form, cand.kappa, cand.n))
    kernel = big.subgroup([theta])
    kperp = big.orthogonal_complement(kernel)
    for phi in cond2:
        good = True
        for g in kperp.gens:
            delta = big.sub(_big_phi_apply(phi, big, g), g)
            if not kernel.contains(delta):
                good = False
                break
        if good:
            return "witness", phi
    return "no_involution_cond3", None


@dataclass
class DetectionReport:
    model: str
    spec_text: str
    rank_S: int
    rank_T: int
    disc_display: str
    disc_form: FiniteQuadraticForm
    tags: List[object]
    verdict: str
    conclusiveness_basis: Optional[str]
    witness: Optional[dict]
    witness_revalidated: Optional[object]
    trace: List[dict]
    wall_time_ms: int
    generated_at: str
    oracle_checked: object = False
    version: str = ""

    def to_json_dict(self) -> dict:
        return {
            "version": self.version,
            "model": self.model,
            "spec": self.spec_text,
            "rank_S": self.rank_S,
            "rank_T": self.rank_T,
            "disc": {
                "display": self.disc_display,
                "form": self.disc_form.to_json_dict(),
                "tags": self.tags,
            },
            "verdict": self.verdict,
            "conclusiveness_basis": self.conclusiveness_basis,
            "scope_note": SCOPE_NOTE,
            "witness": self.witness,
            "witness_revalidated": self.witness_revalidated,
            "trace": self.trace,
            "oracle_checked": self.oracle_checked,
            "wall_time_ms": self.wall_time_ms,
            "generated_at": self.generated_at,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)


def _evaluate(pf: PolarizedForm, cand: KernelCandidate,
              phis: List[DiscAutomorphism]) -> Tuple[KernelCandidate, str,
                                                     Optional[DiscAutomorphism]]:
    ok, _reason = genus_tilde_nonempty(pf, cand)
    if not ok:
        return cand, "genus_empty", None
    status, phi = check_candidate(pf, cand, phis)
    return cand, status, phi


def model_name(h2: int) -> str:
    if h2 == 4:
        return "quartic"
    if h2 == 2:
        return "sextic"
    return f"h2={h2}"


def parse_model(text: str) -> int:
    text = text.strip().lower()
    if text == "quartic":
        return 4
    if text in ("sextic", "sextic-planar"):
        return 2
    if text.startswith("h2="):
        h2 = int(text[3:])
        if h2 < 2 or h2 % 2:
            raise ValueError("h2 must be a positive even integer")
        return h2
    raise ValueError(f"unknown model {text!r}")


def detect(h2: int, spec: RootSpec | str, tgram=None, threads: int = 1,
           oracle: bool = False) -> DetectionReport:
    """Run the full decision pipeline for one stratum.

    h2: polarization square (4 = quartic, 2 = sextic surface in P^3-speak);
    spec: the ADE configuration;
    tgram: optional 2x2 Gram matrix of the transcendental-side lattice,
           required for conclusiveness at rank_S = 19;
    threads: speculative parallel candidate evaluation (output is identical
             for any value);
    oracle: re-check decisions by brute force where group sizes permit.
    """
    t0 = time.monotonic()
    if isinstance(spec, str):
        spec = RootSpec.parse(spec)
    pf = polarized_disc(spec, h2)
    rank_s = pf.rank_S
    if rank_s > 19:
        raise ValueError("root rank exceeds 19; no such stratum")

    trace: List[dict] = []
    witness: Optional[dict] = None
    witness_reval: Optional[object] = None
    verdict: str
    basis: Optional[str] = None
    oracle_checked: object = False

    if rank_s == 19:
        if tgram is None:
            verdict = "needs_T_gram"
        else:
            has = maximizing_has_skew(tgram, pf)
            verdict = "witness_found" if has else "none_exists"
            basis = "rankT2"
    else:
        phis = disc_involutions(pf)
        found: Optional[Tuple[KernelCandidate, DiscAutomorphism]] = None
        pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
        try:
            for a2 in enumerate_a_squares(pf):
                if found:
                    break
                for n in (2, 1):
                    if found:
                        break
                    cands = kernel_candidates(pf, a2, n)
                    if not cands:
                        trace.append({"a2": a2, "n": n, "kappa": None,
                                      "reason": "no_kappa"})
                        continue
                    if pool is not None:
                        results = pool.map(
                            lambda c: _evaluate(pf, c, phis), cands)
                    else:
                        results = (_evaluate(pf, c, phis) for c in cands)
                    for cand, status, phi in results:
                        if status == "witness":
                            found = (cand, phi)
                            break
                        trace.append({"a2": cand.a2, "n": cand.n,
                                      "kappa": list(cand.kappa),
                                      "reason": status})
        finally:
            if pool is not None:
                pool.shutdown(wait=False, cancel_futures=True)
        if found:
            cand, phi = found
            witness = {"a2": cand.a2, "n": cand.n,
                       "kappa": list(cand.kappa),
                       "phi": [list(row) for row in phi.matrix]}
            verdict = "witness_found"
            basis = "corlem1"
            from . import oracle as oracle_mod
            witness_reval = oracle_mod.revalidate_witness(pf, cand, phi)
        else:
            if rank_s == 18:
                verdict = "none_exists"
                basis = "corlem2"
            else:
                verdict = "inconclusive"
                basis = None

    if oracle and rank_s <= 18:
        from . import oracle as oracle_mod
        oracle_checked = oracle_mod.cross_check_trace(pf, trace, witness)

    wall_ms = int((time.monotonic() - t0) * 1000)
    report = DetectionReport(
        model=model_name(h2),
        spec_text=spec.display_text(),
        rank_S=rank_s,
        rank_T=pf.rank_T,
        disc_display=pf.display(),
        disc_form=pf.form,
        tags=list(pf.tags),
        verdict=verdict,
        conclusiveness_basis=basis,
        witness=witness,
        witness_revalidated=witness_reval,
        trace=trace,
        wall_time_ms=wall_ms,
        generated_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        oracle_checked=oracle_checked,
    )
    from . import __version__
    report.version = __version__
    return report
