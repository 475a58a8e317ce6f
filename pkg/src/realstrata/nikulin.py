"""Genus-level existence tests for primitive embeddings into the even
unimodular lattice of signature (3, 19).

The decision data is the discriminant form together with a signature pair;
the per-prime invariant is the square class of the determinant of the
p-primary Gram matrix (odd p: modulo squares of p-adic units; p = 2: modulo
8, coarsened to {1,5}/{3,7} when the 2-primary form is odd).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from . import _intmat
from .fqf import Element, FiniteQuadraticForm, canon_mod1, cyclic_form, factorint


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for odd prime p and a prime to p."""
    a %= p
    if a == 0:
        raise ValueError("argument not prime to p")
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


@dataclass(frozen=True)
class SquareClass:
    """A p-adic square class p^valuation * unit.

    For odd p the unit is +-1 (the Legendre class); for p = 2 it is a residue
    in {1, 3, 5, 7} mod 8 together with the evenness grading of the form it
    came from (odd 2-forms only determine the unit up to the {1,5}/{3,7}
    coarsening).
    """
    prime: int
    valuation: int
    unit: int
    even: bool = True

    def same_class(self, other: "SquareClass") -> bool:
        if self.prime != other.prime or self.valuation != other.valuation:
            return False
        if self.prime != 2:
            return self.unit == other.unit
        if self.even and other.even:
            return self.unit == other.unit
        return (self.unit % 8 in (1, 5)) == (other.unit % 8 in (1, 5))

    def negated(self) -> "SquareClass":
        if self.prime == 2:
            return SquareClass(2, self.valuation, (-self.unit) % 8, self.even)
        sign = 1 if self.prime % 4 == 1 else -1
        return SquareClass(self.prime, self.valuation, self.unit * sign,
                           self.even)

    def scaled_by_unit(self, n: int) -> "SquareClass":
        """The class of n * (this class) for an integer n prime to p."""
        if n % self.prime == 0:
            raise ValueError("n must be prime to p")
        if self.prime == 2:
            return SquareClass(2, self.valuation, (self.unit * n) % 8,
                               self.even)
        return SquareClass(self.prime, self.valuation,
                           self.unit * legendre(n, self.prime), self.even)


def unit_square_class(n: Fraction | int, p: int, even: bool = True
                      ) -> SquareClass:
    """Square class of a p-adic unit given as a rational number."""
    fr = Fraction(n)
    num, den = fr.numerator, fr.denominator
    if num % p == 0 or den % p == 0:
        raise ValueError("not a p-adic unit")
    if p == 2:
        return SquareClass(2, 0, (num * pow(den, -1, 8)) % 8, even)
    return SquareClass(p, 0, legendre(num, p) * legendre(den, p), even)


def det_p(form: FiniteQuadraticForm, p: int) -> SquareClass:
    """Square class of the determinant of the p-primary Gram matrix.

    The Gram matrix of the p-part uses canonical representatives (diagonal:
    q in [0,2); off-diagonal: b in [0,1)); its determinant equals
    unit / |F_p|, and the returned class records p^{v_p(|F_p|)} * unit with
    the 2-adic grading flag when p = 2.
    """
    fp, _ = form.p_part(p)
    ell = fp.rank
    gram = [[Fraction(0)] * ell for _ in range(ell)]
    for i in range(ell):
        gram[i][i] = fp.q[i]
        for j in range(ell):
            if i != j:
                gram[i][j] = fp.b[i][j]
    det = _intmat.fraction_det(gram)
    unit = det * fp.order
    even = fp.is_even_2part() if p == 2 else True
    val = 0
    n = fp.order
    while n % p == 0:
        n //= p
        val += 1
    sc = unit_square_class(unit, p, even)
    return SquareClass(p, val, sc.unit, even)


# ------------------------------------------------------- embedding criterion


def embedding_clauses(sigma_plus: int, sigma_minus: int,
                      form: FiniteQuadraticForm) -> Dict[str, bool]:
    """Detailed clause outcomes for primitive embeddability of an even
    lattice with invariants (sigma_plus, sigma_minus, form) into the even
    unimodular lattice of signature (3, 19).

    Keys: "clause1" (signature and length bounds), "clause2:<p>" for each odd
    prime dividing |form| (vacuously True below the length threshold), and
    "clause3" (the 2-adic threshold condition, vacuously True when below the
    threshold or when the 2-part is odd).
    """
    rk = sigma_plus + sigma_minus
    size = form.order
    threshold = 22 - rk
    out: Dict[str, bool] = {}
    out["clause1"] = (sigma_plus <= 3 and sigma_minus <= 19
                      and form.length() <= threshold)
    target_sign = (-1) ** (sigma_plus - 1)
    for p in form.primes():
        if p == 2:
            continue
        key = f"clause2:{p}"
        if form.length_p(p) != threshold:
            out[key] = True
            continue
        dp = det_p(form, p)
        total = dp.scaled_by_unit(size // p ** dp.valuation)
        want = SquareClass(p, dp.valuation,
                           legendre(target_sign % p, p), True)
        out[key] = total.same_class(want)
    if 2 in form.primes():
        d2 = det_p(form, 2)
        if form.length_p(2) != threshold or not d2.even:
            out["clause3"] = True
        else:
            total = d2.scaled_by_unit(size // 2 ** d2.valuation)
            out["clause3"] = total.unit % 8 in (1, 7)
    else:
        out["clause3"] = True
    return out


def embeds_into_big_L(sigma_plus: int, sigma_minus: int,
                      form: FiniteQuadraticForm
                      ) -> Tuple[bool, Optional[str]]:
    """Decide primitive embeddability into the even unimodular (3, 19)
    lattice; on failure the reason names the first failing clause."""
    clauses = embedding_clauses(sigma_plus, sigma_minus, form)
    order = ["clause1"]
    order += sorted((k for k in clauses if k.startswith("clause2:")),
                    key=lambda k: int(k.split(":")[1]))
    order += ["clause3"]
    for key in order:
        if not clauses[key]:
            return False, key
    return True, None


# ------------------------------------------------ kernel-level genus wrapper


def ambient_with_a_block(form: FiniteQuadraticForm, a2: int
                         ) -> FiniteQuadraticForm:
    """form (+) [1/a2], the discriminant form after adjoining the polarizing
    rank-one lattice of square a2."""
    return form.direct_sum(cyclic_form(1, a2))


def theta_vector(form: FiniteQuadraticForm, kappa: Sequence[int],
                 n: int) -> Element:
    """The gluing vector kappa (+) n*alpha inside form (+) [1/a2]."""
    return tuple(kappa) + (n,)


def genus_tilde_nonempty(pf, cand) -> Tuple[bool, Optional[str]]:
    """Does the overlattice genus determined by the kernel candidate contain
    a lattice?  Computes K-perp/K for K = <kappa (+) n alpha> inside
    disc (+) [1/a2] and applies the embedding criterion with signature
    (2, rank_S).

    pf must provide .form and .rank_S; cand must provide .a2, .n, .kappa.
    """
    from .isotropy import subquotient  # local import to keep layering simple

    big = ambient_with_a_block(pf.form, cand.a2)
    theta = theta_vector(pf.form, cand.kappa, cand.n)
    kernel = big.subgroup([theta])
    quot = subquotient(big, kernel).form
    return embeds_into_big_L(2, pf.rank_S, quot)


def coron_niku_shortcut(pf, cand, p: int) -> Optional[bool]:
    """Advisory per-prime shortcut for the embedding clauses on K-perp/K.

    Returns True when the p-clause is guaranteed to hold without computing
    the subquotient: for odd p dividing a2, and for p = 2 when n = 1 and the
    2-adic parity of the complement of kappa matches the ambient parity.
    Returns None when no shortcut applies (never False).
    """
    if p != 2:
        if cand.a2 % p == 0:
            return True
        return None
    if cand.n != 1:
        return None
    form = pf.form
    kappa = form.reduce(cand.kappa)
    if not any(kappa):
        return None
    comp = form.orthogonal_complement(form.subgroup([kappa]))
    try:
        comp_form, _ = form.subgroup_as_form(comp)
    except ValueError:
        return None
    if comp_form.is_even_2part() == form.is_even_2part():
        return True
    return None
