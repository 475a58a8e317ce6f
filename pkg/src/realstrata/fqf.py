"""Finite quadratic forms with exact rational arithmetic.

A finite quadratic form (FQF) is a finite abelian group F presented as a
product of cyclic groups Z/o_1 x ... x Z/o_r with independent generators,
together with a quadratic map q : F -> Q/2Z and the polarized bilinear map
b : F x F -> Q/Z satisfying

    q(x + y) - q(x) - q(y) = 2 b(x, y)   (mod 2Z),
    b(x, x) = q(x)                        (mod 1).

All values are `fractions.Fraction`; floating point never appears.  Elements
of F are tuples of canonical residues (0 <= x_i < o_i).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from . import _intmat

Element = Tuple[int, ...]


def canon_mod2(x: Fraction) -> Fraction:
    """Canonical representative of x mod 2Z in [0, 2)."""
    return x - 2 * math.floor(x / 2)


def canon_mod1(x: Fraction) -> Fraction:
    """Canonical representative of x mod Z in [0, 1)."""
    return x - math.floor(x)


def display_rep(x: Fraction) -> Fraction:
    """Representative of x mod 2Z in (-1, 1], the human-display convention."""
    y = canon_mod2(x)
    return y - 2 if y > 1 else y


def factorint(n: int) -> Dict[int, int]:
    """Prime factorization of a positive integer by trial division."""
    if n < 1:
        raise ValueError("factorint needs a positive integer")
    out: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _val(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class FiniteQuadraticForm:
    """A nondegenerate finite quadratic form on a product of cyclic groups.

    Parameters
    ----------
    orders:
        Orders o_i >= 2 of the independent generators.
    q_values:
        q(e_i) in Q/2Z, one per generator.
    b_matrix:
        Either a full symmetric matrix of b(e_i, e_j) in Q/Z (the diagonal
        must agree with q mod 1) or a dict {(i, j): value} for i < j with
        omitted pairs meaning 0.
    """

    def __init__(self, orders: Sequence[int],
                 q_values: Sequence[Fraction],
                 b_matrix=None):
        orders = [int(o) for o in orders]
        if any(o < 2 for o in orders):
            raise ValueError("generator orders must be >= 2")
        r = len(orders)
        if len(q_values) != r:
            raise ValueError("q_values length mismatch")
        q = [canon_mod2(Fraction(v)) for v in q_values]
        b = [[Fraction(0)] * r for _ in range(r)]
        if b_matrix is None:
            b_matrix = {}
        if isinstance(b_matrix, dict):
            for (i, j), v in b_matrix.items():
                if i == j:
                    raise ValueError("pass q for diagonal entries, not b")
                b[i][j] = b[j][i] = canon_mod1(Fraction(v))
        else:
            for i in range(r):
                for j in range(r):
                    v = canon_mod1(Fraction(b_matrix[i][j]))
                    if i == j:
                        if v != canon_mod1(q[i]):
                            raise ValueError(
                                "diagonal of b must equal q mod 1")
                    else:
                        b[i][j] = v
            for i in range(r):
                for j in range(r):
                    if b[i][j] != b[j][i]:
                        raise ValueError("b must be symmetric")
        for i in range(r):
            b[i][i] = canon_mod1(q[i])
        # Validity: q_i must define a quadratic value on a generator of
        # order o_i (o*q integral and o^2*q even), and o_i b_ij integral.
        for i, o in enumerate(orders):
            if (o * q[i]).denominator != 1:
                raise ValueError(f"q[{i}] is not defined on Z/{o}")
            if (o * o * q[i]) % 2 != 0:
                raise ValueError(f"q[{i}] violates o^2 q = 0 mod 2 on Z/{o}")
            for j in range(r):
                if i != j and (o * b[i][j]).denominator != 1:
                    raise ValueError(f"b[{i}][{j}] is not defined on Z/{o}")
        self.orders: Tuple[int, ...] = tuple(orders)
        self.q: Tuple[Fraction, ...] = tuple(q)
        self.b: Tuple[Tuple[Fraction, ...], ...] = tuple(tuple(row) for row in b)
        self._check_nondegenerate()

    # ---------------------------------------------------------------- basics

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        n = 1
        for o in self.orders:
            n *= o
        return n

    def exponent(self) -> int:
        return math.lcm(*self.orders) if self.orders else 1

    def zero(self) -> Element:
        return (0,) * self.rank

    def reduce(self, vec: Sequence[int]) -> Element:
        return tuple(int(v) % o for v, o in zip(vec, self.orders))

    def add(self, x: Sequence[int], y: Sequence[int]) -> Element:
        return tuple((a + c) % o for a, c, o in zip(x, y, self.orders))

    def sub(self, x: Sequence[int], y: Sequence[int]) -> Element:
        return tuple((a - c) % o for a, c, o in zip(x, y, self.orders))

    def neg(self, x: Sequence[int]) -> Element:
        return tuple((-a) % o for a, o in zip(x, self.orders))

    def smul(self, n: int, x: Sequence[int]) -> Element:
        return tuple((n * a) % o for a, o in zip(x, self.orders))

    def order_of(self, x: Sequence[int]) -> int:
        n = 1
        for a, o in zip(x, self.orders):
            n = math.lcm(n, o // math.gcd(a, o))
        return n

    def eval_q(self, x: Sequence[int]) -> Fraction:
        """q(x) in Q/2Z, canonical in [0, 2)."""
        total = Fraction(0)
        r = self.rank
        for i in range(r):
            if x[i]:
                total += x[i] * x[i] * self.q[i]
                for j in range(i + 1, r):
                    if x[j]:
                        total += 2 * x[i] * x[j] * self.b[i][j]
        return canon_mod2(total)

    def eval_b(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        """b(x, y) in Q/Z, canonical in [0, 1)."""
        total = Fraction(0)
        r = self.rank
        for i in range(r):
            if x[i]:
                for j in range(r):
                    if y[j]:
                        total += x[i] * y[j] * self.b[i][j]
        return canon_mod1(total)

    def iter_elements(self) -> Iterator[Element]:
        """All group elements in lexicographic coordinate order."""
        return iter(product(*(range(o) for o in self.orders)))

    # ------------------------------------------------------------ invariants

    def length_p(self, p: int) -> int:
        """Minimal generator count of the p-part."""
        return sum(1 for o in self.orders if o % p == 0)

    def length(self) -> int:
        primes = set()
        for o in self.orders:
            primes.update(factorint(o))
        return max((self.length_p(p) for p in primes), default=0)

    def primes(self) -> List[int]:
        ps = set()
        for o in self.orders:
            ps.update(factorint(o))
        return sorted(ps)

    def is_even_2part(self) -> bool:
        """True when q takes only integer values on the order-<=2 elements
        (the evenness grading of the 2-primary part)."""
        half_gens = [i for i, o in enumerate(self.orders) if o % 2 == 0]
        for bits in product((0, 1), repeat=len(half_gens)):
            vec = [0] * self.rank
            for bit, i in zip(bits, half_gens):
                if bit:
                    vec[i] = self.orders[i] // 2
            if self.eval_q(vec).denominator != 1:
                return False
        return True

    # ------------------------------------------------------- d sums / parts

    def direct_sum(self, other: "FiniteQuadraticForm") -> "FiniteQuadraticForm":
        orders = self.orders + other.orders
        q = list(self.q) + list(other.q)
        b: Dict[Tuple[int, int], Fraction] = {}
        r = self.rank
        for i in range(r):
            for j in range(i + 1, r):
                b[(i, j)] = self.b[i][j]
        for i in range(other.rank):
            for j in range(i + 1, other.rank):
                b[(r + i, r + j)] = other.b[i][j]
        return FiniteQuadraticForm(orders, q, b)

    def p_part(self, p: int) -> Tuple["FiniteQuadraticForm", List[Element]]:
        """The p-primary part, with the embedding of its generators.

        Returns (form, gens) where gens[i] is the element of self generating
        the i-th cyclic factor of the p-part.
        """
        idx = [i for i, o in enumerate(self.orders) if o % p == 0]
        orders = []
        gens: List[Element] = []
        for i in idx:
            o = self.orders[i]
            pa = p ** _val(o, p)
            m = o // pa
            orders.append(pa)
            vec = [0] * self.rank
            vec[i] = m
            gens.append(tuple(vec))
        q = [self.eval_q(g) for g in gens]
        b = {(s, t): self.eval_b(gens[s], gens[t])
             for s in range(len(gens)) for t in range(s + 1, len(gens))}
        return FiniteQuadraticForm(orders, q, b), gens

    def primary_component(self, x: Sequence[int], p: int) -> Element:
        """The p-primary component of x inside self."""
        o = self.order_of(x)
        a = _val(o, p)
        m = o // p ** a
        if a == 0:
            return self.zero()
        # e = 1 mod p^a, 0 mod m
        e = (m * pow(m, -1, p ** a)) % o if m > 1 else 1
        return self.smul(e, x)

    # ------------------------------------------------------------- subgroups

    def subgroup(self, gens: Sequence[Sequence[int]]) -> "Subgroup":
        return Subgroup(self, [self.reduce(g) for g in gens])

    def orthogonal_complement(self, sub: "Subgroup") -> "Subgroup":
        """The subgroup {x : b(x, h) = 0 for all h in sub}."""
        r = self.rank
        hgens = sub.gens
        if not hgens or r == 0:
            return self.subgroup([g for g in _identity_gens(self)])
        d = self.exponent()
        # Row t: constraint sum_i x_i * (d * b(e_i, h_t)) = 0 mod d.
        rows = []
        for h in hgens:
            row = []
            for i in range(r):
                ei = [0] * r
                ei[i] = 1
                row.append(int(d * self.eval_b(ei, h)))
            rows.append(row)
        k = len(rows)
        # Kernel of [B | d*I] gives solutions (x, y) of Bx + dy = 0.
        a = [rows[t] + [d if s == t else 0 for s in range(k)] for t in range(k)]
        kernel = _intmat.kernel_basis(a)
        cols = [[v[i] for i in range(r)] for v in kernel]
        for i in range(r):
            col = [0] * r
            col[i] = self.orders[i]
            cols.append(col)
        h = _intmat.hnf_columns(_cols_to_matrix(cols, r))
        basis = [self.reduce([h[i][j] for i in range(r)]) for j in range(r)]
        return Subgroup(self, [x for x in basis if any(x)], _lattice=h)

    def smith_presentation(self, sub: "Subgroup") -> "QuotientPresentation":
        """Smith presentation of the subgroup itself (quotient by nothing)."""
        r = self.rank
        inner = []
        for i in range(r):
            col = [0] * r
            col[i] = self.orders[i]
            inner.append(col)
        return _smith_generators(self, sub.lattice, inner)

    def subgroup_as_form(self, sub: "Subgroup") -> Tuple["FiniteQuadraticForm", List[Element]]:
        """Restrict the form to a (nondegenerate) subgroup.

        Returns (form, gens) with gens the independent generators inside self.
        Raises ValueError when the restriction is degenerate.
        """
        pres = self.smith_presentation(sub)
        gens = pres.reps
        q = [self.eval_q(g) for g in gens]
        b = {(s, t): self.eval_b(gens[s], gens[t])
             for s in range(len(gens)) for t in range(s + 1, len(gens))}
        form = FiniteQuadraticForm(pres.orders, q, b)
        return form, list(gens)

    # ----------------------------------------------------------- (de)coding

    def to_json_dict(self) -> dict:
        return {
            "orders": list(self.orders),
            "q": [str(v) for v in self.q],
            "b": [[str(canon_mod1(self.b[i][j]) if i != j else canon_mod1(self.q[i]))
                   for j in range(self.rank)] for i in range(self.rank)],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "FiniteQuadraticForm":
        orders = data["orders"]
        q = [Fraction(s) for s in data["q"]]
        b_rows = [[Fraction(s) for s in row] for row in data["b"]]
        return cls(orders, q, b_rows)

    def display(self) -> str:
        """Human-readable generator-wise description like ``[-7/8] (+) [1/4]``."""
        if not self.orders:
            return "[0]"
        parts = []
        for i in range(self.rank):
            off = any(self.b[i][j] for j in range(self.rank) if j != i)
            rep = display_rep(self.q[i])
            parts.append(f"[{rep}]" + ("*" if off else ""))
        return " (+) ".join(parts)

    def __repr__(self) -> str:
        return f"FiniteQuadraticForm(orders={list(self.orders)})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, FiniteQuadraticForm)
                and self.orders == other.orders
                and self.q == other.q
                and self.b == other.b)

    def __hash__(self):
        return hash((self.orders, self.q, self.b))

    # ------------------------------------------------------------- internals

    def _check_nondegenerate(self) -> None:
        if self.rank == 0:
            return
        full = self.subgroup([_e(self, i) for i in range(self.rank)])
        radical = self.orthogonal_complement(full)
        if radical.order != 1:
            raise ValueError("degenerate bilinear form (nontrivial radical)")


def _e(form: FiniteQuadraticForm, i: int) -> Element:
    vec = [0] * form.rank
    vec[i] = 1
    return tuple(vec)


def _identity_gens(form: FiniteQuadraticForm) -> List[Element]:
    return [_e(form, i) for i in range(form.rank)]


def _cols_to_matrix(cols: List[List[int]], rows: int) -> List[List[int]]:
    return [[col[i] for col in cols] for i in range(rows)]


# ------------------------------------------------------------------ subgroup


class Subgroup:
    """A subgroup of a FiniteQuadraticForm, canonically presented by the HNF
    basis of its coordinate lattice (which always contains the orders
    lattice)."""

    def __init__(self, ambient: FiniteQuadraticForm,
                 gens: Sequence[Element], _lattice=None):
        self.ambient = ambient
        r = ambient.rank
        if _lattice is None:
            cols = [list(g) for g in gens]
            for i in range(r):
                col = [0] * r
                col[i] = ambient.orders[i]
                cols.append(col)
            _lattice = _intmat.hnf_columns(_cols_to_matrix(cols, r)) if r else []
        self.lattice = _lattice  # r x r lower-triangular HNF basis
        basis = [ambient.reduce([_lattice[i][j] for i in range(r)])
                 for j in range(r)]
        self.gens: List[Element] = [x for x in basis if any(x)]
        if r:
            det = _intmat.det_lower_triangular(_lattice)
            self.order = ambient.order // det
        else:
            self.order = 1

    def contains(self, x: Sequence[int]) -> bool:
        if self.ambient.rank == 0:
            return True
        return _intmat.hnf_solve(self.lattice, list(x)) is not None

    def iter_elements(self) -> Iterator[Element]:
        """All subgroup elements (by combinations of the canonical basis)."""
        amb = self.ambient
        gens = self.gens
        if not gens:
            yield amb.zero()
            return
        seen = set()
        ords = [amb.order_of(g) for g in gens]
        for coeffs in product(*(range(o) for o in ords)):
            vec = amb.zero()
            for c, g in zip(coeffs, gens):
                if c:
                    vec = amb.add(vec, amb.smul(c, g))
            if vec not in seen:
                seen.add(vec)
                yield vec

    def elements(self) -> List[Element]:
        out = sorted(self.iter_elements())
        assert len(out) == self.order
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and self.ambient == other.ambient
                and self.lattice == other.lattice)

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, gens={self.gens})"


# -------------------------------------------------- relative Smith machinery


@dataclass
class QuotientPresentation:
    """Smith presentation of outer/inner for coordinate lattices
    inner <= outer inside Z^r (both containing nothing in particular;
    the quotient must be finite).

    orders: invariant factors > 1 (ascending divisibility);
    reps: ambient coordinate representatives of the generators;
    to_coords: maps an ambient vector lying in the outer lattice to its
    quotient coordinates.
    """
    orders: List[int]
    reps: List[Element]
    to_coords: Callable[[Sequence[int]], Tuple[int, ...]]


def _smith_generators(ambient: FiniteQuadraticForm,
                      outer_lattice: List[List[int]],
                      inner_cols: List[List[int]]) -> QuotientPresentation:
    """Smith presentation of (outer lattice)/(inner lattice) in Z^r, where
    inner_cols generate the inner lattice (the ambient orders lattice must be
    contained in it for the quotient to be a bona fide subquotient group).
    Representatives are reduced into ambient coordinates."""
    r = ambient.rank
    if r == 0:
        return QuotientPresentation([], [], lambda x: ())
    b = outer_lattice
    rel = []
    for col in inner_cols:
        z = _intmat.hnf_solve(b, col)
        if z is None:
            raise ValueError("inner lattice not contained in outer lattice")
        rel.append(z)
    relmat = _cols_to_matrix(rel, r)
    d, u, v = _intmat.snf(relmat)
    uinv = _intmat.unimodular_inverse(u)
    c = _intmat.matmul(b, uinv)
    dd = [d[i][i] for i in range(r)]
    if any(x == 0 for x in dd):
        raise ValueError("quotient is not finite")
    kept = [i for i in range(r) if dd[i] > 1]
    reps = [ambient.reduce([c[i][j] for i in range(r)]) for j in kept]
    frac_c = [[Fraction(c[i][j]) for j in range(r)] for i in range(r)]

    def to_coords(x: Sequence[int]) -> Tuple[int, ...]:
        y = _intmat.fraction_solve(frac_c, [Fraction(int(t)) for t in x])
        out = []
        for pos, i in enumerate(kept):
            if y[i].denominator != 1:
                raise ValueError("vector is not in the outer lattice")
            out.append(int(y[i]) % dd[i])
        return tuple(out)

    return QuotientPresentation([dd[i] for i in kept], reps, to_coords)


# ------------------------------------------------------------- constructors


def trivial_form() -> FiniteQuadraticForm:
    return FiniteQuadraticForm([], [], {})


def cyclic_form(m: int, n: int) -> FiniteQuadraticForm:
    """The cyclic form [m/n]: Z/n with q(g) = m/n mod 2 (mn even, gcd(m,n)=1)."""
    if n < 2:
        raise ValueError("cyclic form needs n >= 2")
    if math.gcd(m, n) != 1:
        raise ValueError("m and n must be coprime")
    if (m * n) % 2 != 0:
        raise ValueError("mn must be even")
    return FiniteQuadraticForm([n], [Fraction(m, n)], {})


def u_block(k: int) -> FiniteQuadraticForm:
    """Hyperbolic 2-adic block on (Z/2^k)^2: Gram (1/2^k)[[0,1],[1,0]]."""
    n = 2 ** k
    return FiniteQuadraticForm([n, n], [Fraction(0), Fraction(0)],
                               {(0, 1): Fraction(1, n)})


def v_block(k: int) -> FiniteQuadraticForm:
    """The other even 2-adic block on (Z/2^k)^2: Gram (1/2^k)[[2,1],[1,2]]."""
    n = 2 ** k
    return FiniteQuadraticForm([n, n], [Fraction(2, n), Fraction(2, n)],
                               {(0, 1): Fraction(1, n)})


def direct_sum_all(forms: Sequence[FiniteQuadraticForm]) -> FiniteQuadraticForm:
    out = trivial_form()
    for f in forms:
        out = out.direct_sum(f)
    return out


# ------------------------------------------------- homogeneous decomposition


@dataclass
class HomogeneousBlock:
    """A rank-1 or rank-2 orthogonal block of a p-primary form.

    gens are elements of the ambient form; level is k with exponent p^k.
    """
    level: int
    gens: List[Element]


_DECOMP_CUTOFF = 1 << 16


def homogeneous_decomposition(form: FiniteQuadraticForm, p: int = 2
                              ) -> List[HomogeneousBlock]:
    """Orthogonally split a p-primary form into rank-<=2 blocks.

    Deterministic: at each step picks the lexicographically least maximal-order
    element x with b(x,x) of full order (cyclic split) or, failing that, the
    lexicographically least pair (x, y) with b(x,y) of full order.  Blocks are
    returned grouped by descending level.
    """
    for o in form.orders:
        if o != p ** _val(o, p):
            raise ValueError("form is not p-primary")
    if form.order > _DECOMP_CUTOFF:
        raise ValueError("homogeneous_decomposition cutoff exceeded")

    blocks: List[HomogeneousBlock] = []

    def recurse(f: FiniteQuadraticForm, embed: List[Element]) -> None:
        if f.rank == 0:
            return
        e = f.exponent()
        lvl = _val(e, p)
        top = sorted(x for x in f.iter_elements() if f.order_of(x) == e)
        cyclic = next((x for x in top
                       if canon_mod1(f.eval_q(x)).denominator == e), None)
        if cyclic is not None:
            picked = [cyclic]
        else:
            picked = None
            for x in top:
                y = next((y for y in top
                          if f.eval_b(x, y).denominator == e), None)
                if y is not None:
                    picked = [x, y]
                    break
            if picked is None:
                raise AssertionError("no splittable block at top exponent")
        lifted = [_lift(embed, form, x) for x in picked]
        blocks.append(HomogeneousBlock(lvl, lifted))
        comp = f.orthogonal_complement(f.subgroup(picked))
        sub_form, sub_gens = f.subgroup_as_form(comp)
        assert sub_form.order * (e ** len(picked)) == f.order
        recurse(sub_form, [_lift(embed, form, g) for g in sub_gens])

    recurse(form, _identity_gens(form))
    blocks.sort(key=lambda blk: (-blk.level, blk.gens))
    total = 1
    for blk in blocks:
        total *= (p ** blk.level) ** len(blk.gens)
    assert total == form.order
    return blocks


def _lift(embed: List[Element], ambient: FiniteQuadraticForm,
          x: Sequence[int]) -> Element:
    vec = ambient.zero()
    for c, g in zip(x, embed):
        if c:
            vec = ambient.add(vec, ambient.smul(c, g))
    return vec
