"""Root specifications, discriminant forms of ADE lattices, the polarized
discriminant, its symmetry-induced involutions, and the rank-2 positive
definite automorphism machinery.

A root spec is an ordered formal sum of ADE labels (e.g. ``A7+A6+A3+A2`` or
``2*A1+D4``).  The polarized discriminant adjoins a rank-one block [1/h2]
for the polarization class, tagged "h".
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from . import _intmat
from .fqf import (Element, FiniteQuadraticForm, canon_mod2, cyclic_form,
                  direct_sum_all, display_rep, factorint, trivial_form)

# --------------------------------------------------------------- root specs


_TERM_RE = re.compile(r"^(?:(\d+)\*)?([ADE])(\d+)$")

_ADE_VALID = {
    "A": lambda n: n >= 1,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
}


@dataclass(frozen=True)
class RootSpec:
    """An ordered multiset of ADE components."""
    components: Tuple[Tuple[str, int], ...]
    text: str = ""

    @classmethod
    def parse(cls, text: str) -> "RootSpec":
        cleaned = re.sub(r"\s+", "", text or "")
        if cleaned in ("", "0", "none"):
            return cls((), "")
        comps: List[Tuple[str, int]] = []
        for term in cleaned.split("+"):
            m = _TERM_RE.match(term)
            if not m:
                raise ValueError(f"cannot parse root-spec term {term!r}")
            count = int(m.group(1)) if m.group(1) else 1
            fam, n = m.group(2), int(m.group(3))
            if count < 1:
                raise ValueError(f"bad multiplicity in {term!r}")
            if not _ADE_VALID[fam](n):
                raise ValueError(f"invalid component {fam}{n}")
            comps.extend([(fam, n)] * count)
        return cls(tuple(comps), cleaned)

    @property
    def rank(self) -> int:
        return sum(n for _, n in self.components)

    def canonical_text(self) -> str:
        if not self.components:
            return "0"
        groups: Dict[Tuple[str, int], int] = {}
        for comp in self.components:
            groups[comp] = groups.get(comp, 0) + 1
        ordered = sorted(groups.items(), key=lambda kv: (-kv[0][1], kv[0][0]))
        parts = []
        for (fam, n), cnt in ordered:
            parts.append(f"{cnt}*{fam}{n}" if cnt > 1 else f"{fam}{n}")
        return "+".join(parts)

    def display_text(self) -> str:
        return self.text if self.text else "0"


# ----------------------------------------------------------- Cartan matrices


def cartan_matrix(fam: str, n: int) -> List[List[int]]:
    """The Cartan matrix (2 on the diagonal, -1 per diagram edge)."""
    if not _ADE_VALID[fam](n):
        raise ValueError(f"invalid component {fam}{n}")
    edges: List[Tuple[int, int]] = []
    if fam == "A":
        edges = [(i, i + 1) for i in range(n - 1)]
    elif fam == "D":
        edges = [(i, i + 1) for i in range(n - 3)]
        edges += [(n - 3, n - 2), (n - 3, n - 1)]
    else:  # E6, E7, E8: a chain with one branch at the third node
        edges = [(i, i + 1) for i in range(n - 2)]
        edges.append((2, n - 1))
    mat = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges:
        mat[i][j] = mat[j][i] = -1
    return mat


# --------------------------------------------- discriminants of Gram lattices


@dataclass
class GramDisc:
    """Discriminant form of an integral nondegenerate Gram matrix, with the
    coordinate bridge: elements of the quotient Z^n / G Z^n are addressed by
    integer vectors in dual coordinates."""
    form: FiniteQuadraticForm
    gen_duals: List[List[int]]   # dual-coordinate vectors of the generators
    to_coords: Callable[[Sequence[int]], Tuple[int, ...]]


def disc_of_gram(gram: Sequence[Sequence[int]]) -> GramDisc:
    """Discriminant form of an even integral lattice with the given Gram
    matrix: the group Z^n/G Z^n with q(v) = v^T G^{-1} v mod 2."""
    n = len(gram)
    if n == 0:
        return GramDisc(trivial_form(), [], lambda v: ())
    d, u, v = _intmat.snf([list(row) for row in gram])
    dd = [d[i][i] for i in range(n)]
    if any(x == 0 for x in dd):
        raise ValueError("Gram matrix is singular")
    uinv = _intmat.unimodular_inverse(u)
    kept = [i for i in range(n) if dd[i] > 1]
    gen_duals = [[uinv[r][i] for r in range(n)] for i in kept]
    ginv_cols: List[List[Fraction]] = []
    for w in gen_duals:
        ginv_cols.append(_intmat.fraction_solve(
            [[Fraction(x) for x in row] for row in gram],
            [Fraction(t) for t in w]))
    q = []
    b: Dict[Tuple[int, int], Fraction] = {}
    for i, w in enumerate(gen_duals):
        q.append(canon_mod2(sum((Fraction(t) * x
                                 for t, x in zip(w, ginv_cols[i])),
                                Fraction(0))))
        for j in range(i + 1, len(gen_duals)):
            val = sum((Fraction(t) * x
                       for t, x in zip(gen_duals[j], ginv_cols[i])),
                      Fraction(0))
            b[(i, j)] = val

    form = FiniteQuadraticForm([dd[i] for i in kept], q, b)

    def to_coords(vec: Sequence[int]) -> Tuple[int, ...]:
        w = _intmat.matvec(u, list(vec))
        return tuple(w[i] % dd[i] for i in kept)

    return GramDisc(form, gen_duals, to_coords)


def _crt_split_generators(form: FiniteQuadraticForm
                          ) -> Tuple[List[int], List[Element]]:
    """Split each generator into prime-power pieces (descending prime).
    Returns (orders, elements-of-form)."""
    orders: List[int] = []
    gens: List[Element] = []
    for i, o in enumerate(form.orders):
        fact = sorted(factorint(o).items(), reverse=True)
        for p, a in fact:
            pa = p ** a
            vec = [0] * form.rank
            vec[i] = o // pa
            orders.append(pa)
            gens.append(tuple(vec))
    return orders, gens


def disc_root(fam: str, n: int) -> FiniteQuadraticForm:
    """Discriminant form of the negative definite ADE root lattice, with
    generators split into prime-power cyclic pieces (descending prime within
    each invariant factor).  D_even components use the two spinor classes."""
    gram = [[-x for x in row] for row in cartan_matrix(fam, n)]
    gd = disc_of_gram(gram)
    base = gd.form
    if fam == "D" and n % 2 == 0:
        # (Z/2)^2; canonical generators are the two spinor classes, whose
        # q-value is -n/4 mod 2; the vector class has q = -1 mod 2.
        target = canon_mod2(Fraction(-n, 4))
        spinors = [x for x in sorted(base.iter_elements())
                   if any(x) and base.eval_q(x) == target]
        if len(spinors) == 3:  # D4: all three agree; take the first two
            spinors = spinors[:2]
        assert len(spinors) == 2
        q = [base.eval_q(s) for s in spinors]
        b = {(0, 1): base.eval_b(spinors[0], spinors[1])}
        return FiniteQuadraticForm([2, 2], q, b)
    orders, gens = _crt_split_generators(base)
    if not orders:
        return trivial_form()
    q = [base.eval_q(g) for g in gens]
    b = {(i, j): base.eval_b(gens[i], gens[j])
         for i in range(len(gens)) for j in range(i + 1, len(gens))}
    return FiniteQuadraticForm(orders, q, b)


# ---------------------------------------------------------- polarized discs


@dataclass
class PolarizedForm:
    """Discriminant form of (root part) (+) Z h with h^2 = h2 >= 2 even.

    tags[i] is the index of the originating component, or "h" for the
    polarization generator (always last).
    """
    spec: RootSpec
    h2: int
    form: FiniteQuadraticForm
    tags: List[object]
    comp_slices: List[Tuple[int, int]]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def rank_S(self) -> int:
        return self.spec.rank

    @property
    def rank_T(self) -> int:
        return 21 - self.rank_S

    def display(self) -> str:
        return self.form.display()


def polarized_disc(spec: RootSpec, h2: int) -> PolarizedForm:
    if h2 < 2 or h2 % 2:
        raise ValueError("h2 must be a positive even integer")
    parts: List[FiniteQuadraticForm] = []
    tags: List[object] = []
    comp_slices: List[Tuple[int, int]] = []
    pos = 0
    for idx, (fam, n) in enumerate(spec.components):
        dform = disc_root(fam, n)
        parts.append(dform)
        comp_slices.append((pos, pos + dform.rank))
        tags.extend([idx] * dform.rank)
        pos += dform.rank
    parts.append(cyclic_form(1, h2))
    tags.append("h")
    form = direct_sum_all(parts)
    return PolarizedForm(spec, h2, form, tags, comp_slices)


# --------------------------------------------------------- disc automorphisms


class DiscAutomorphism:
    """An automorphism of a finite quadratic form, stored as an integer
    matrix whose j-th column gives the image of the j-th generator."""

    def __init__(self, form: FiniteQuadraticForm,
                 matrix: Sequence[Sequence[int]], validate: bool = True):
        r = form.rank
        self.form = form
        self.matrix = tuple(tuple(matrix[i][j] % form.orders[i]
                                  for j in range(r)) for i in range(r))
        if validate:
            self._validate()

    def _validate(self) -> None:
        form = self.form
        r = form.rank
        m = self.matrix
        for j in range(r):
            for i in range(r):
                if (form.orders[j] * m[i][j]) % form.orders[i]:
                    raise ValueError("matrix does not define a homomorphism")
        cols = [self.apply(_unit(r, j)) for j in range(r)]
        for j in range(r):
            if form.eval_q(cols[j]) != form.q[j]:
                raise ValueError("map does not preserve q")
            for i in range(j + 1, r):
                if form.eval_b(cols[i], cols[j]) != form.b[i][j]:
                    raise ValueError("map does not preserve b")
        if not self._is_bijective():
            raise ValueError("matrix is not invertible on the group")

    def _is_bijective(self) -> bool:
        form = self.form
        r = form.rank
        if r == 0:
            return True
        rows = [[self.matrix[i][j] for j in range(r)]
                + [form.orders[i] if k == i else 0 for k in range(r)]
                for i in range(r)]
        kernel = _intmat.kernel_basis(rows)
        cols = [[vec[j] for j in range(r)] for vec in kernel]
        for j in range(r):
            col = [0] * r
            col[j] = form.orders[j]
            cols.append(col)
        h = _intmat.hnf_columns([[c[i] for c in cols] for i in range(r)])
        return _intmat.det_lower_triangular(h) == form.order

    def apply(self, x: Sequence[int]) -> Element:
        form = self.form
        r = form.rank
        return tuple(sum(self.matrix[i][j] * x[j] for j in range(r))
                     % form.orders[i] for i in range(r))

    def is_involution(self) -> bool:
        r = self.form.rank
        for j in range(r):
            img = self.apply(self.apply(_unit(r, j)))
            if img != _unit(r, j):
                return False
        return True

    def __eq__(self, other) -> bool:
        return (isinstance(other, DiscAutomorphism)
                and self.form == other.form and self.matrix == other.matrix)

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"DiscAutomorphism({self.matrix})"


def _unit(r: int, j: int) -> Element:
    return tuple(1 if i == j else 0 for i in range(r))


def _identity_matrix(k: int) -> List[List[int]]:
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


def _neg_identity(k: int) -> List[List[int]]:
    return [[-1 if i == j else 0 for j in range(k)] for i in range(k)]


_D4_S3 = [
    [[1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[1, 0], [1, 1]],
    [[1, 1], [0, 1]],
    [[0, 1], [1, 1]],
    [[1, 1], [1, 0]],
]


def _component_fixed_autos(fam: str, n: int, k: int) -> List[List[List[int]]]:
    """Involutive diagram-automorphism images on a fixed component's disc
    generators (k of them)."""
    out = [_identity_matrix(k), _neg_identity(k)]
    if fam == "D" and n == 4:
        out = [m for m in _D4_S3 if _is_involutive_2x2_mod2(m)]
    elif fam == "D" and n % 2 == 0:
        out = [_identity_matrix(2), [[0, 1], [1, 0]]]
    return out


def _is_involutive_2x2_mod2(m: List[List[int]]) -> bool:
    sq = [[sum(m[i][t] * m[t][j] for t in range(2)) % 2 for j in range(2)]
          for i in range(2)]
    return sq == [[1, 0], [0, 1]]


def _component_swap_isos(fam: str, n: int, k: int) -> List[List[List[int]]]:
    """Diagram-automorphism images usable as the identification map of a
    swapped pair of equal components (need not be involutive)."""
    out = [_identity_matrix(k), _neg_identity(k)]
    if fam == "D" and n == 4:
        out = list(_D4_S3)
    elif fam == "D" and n % 2 == 0:
        out = [_identity_matrix(2), [[0, 1], [1, 0]]]
    return out


def _matchings(items: List[int]) -> Iterator[List[Tuple[int, ...]]]:
    """All partitions of items into fixed points and unordered pairs."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in _matchings(rest):
        yield [(first,)] + sub
    for i, other in enumerate(rest):
        remaining = rest[:i] + rest[i + 1:]
        for sub in _matchings(remaining):
            yield [(first, other)] + sub


_INVOLUTION_CAP = 2_000_000


def disc_involutions(pf: PolarizedForm) -> List[DiscAutomorphism]:
    """All involutions of the polarized discriminant induced by diagram
    symmetries, label-preserving component permutations, and the sign on the
    polarization block.  Deduplicated and sorted by matrix entries.

    Raises RuntimeError beyond a generation cap of ~2e6 matrices.
    """
    cached = pf._cache.get("involutions")
    if cached is not None:
        return cached
    form = pf.form
    r = form.rank
    comps = pf.spec.components
    classes: Dict[Tuple[str, int], List[int]] = {}
    for idx, comp in enumerate(comps):
        classes.setdefault(comp, []).append(idx)
    h_index = r - 1
    h_opts = [[[1]], [[-1]]]

    matrices: List[Tuple[Tuple[int, ...], ...]] = []
    seen = set()
    count = 0

    def dedupe_options(options: List[List[List[int]]],
                       sub_orders: List[int]) -> List[List[List[int]]]:
        seen_opts = set()
        out = []
        for m in options:
            key = tuple(tuple(v % o for v in row)
                        for row, o in zip(m, sub_orders))
            if key not in seen_opts:
                seen_opts.add(key)
                out.append(m)
        return out

    class_list = sorted(classes.items())
    matching_sets = [list(_matchings(idxs)) for _, idxs in class_list]
    for combo in product(*matching_sets):
        # one matching per class; build the option lists for this permutation
        option_lists: List[List] = []
        slots: List[Tuple[str, Tuple[int, ...]]] = []
        for (fam, n), matching in zip((c for c, _ in class_list), combo):
            for group in matching:
                c = group[0]
                lo, hi = pf.comp_slices[c]
                k = hi - lo
                sub_orders = [form.orders[lo + i] for i in range(k)]
                if len(group) == 1:
                    option_lists.append(dedupe_options(
                        _component_fixed_autos(fam, n, k), sub_orders))
                    slots.append(("fixed", group))
                else:
                    option_lists.append(dedupe_options(
                        _component_swap_isos(fam, n, k), sub_orders))
                    slots.append(("pair", group))
        option_lists.append(h_opts)
        slots.append(("h", (h_index,)))
        for choice in product(*option_lists):
            count += 1
            if count > _INVOLUTION_CAP:
                raise RuntimeError(
                    "involution enumeration exceeds the generation cap")
            mat = [[0] * r for _ in range(r)]
            ok = True
            for (kind, group), opt in zip(slots, choice):
                if kind == "h":
                    mat[h_index][h_index] = opt[0][0]
                elif kind == "fixed":
                    lo, hi = pf.comp_slices[group[0]]
                    for i in range(hi - lo):
                        for j in range(hi - lo):
                            mat[lo + i][lo + j] = opt[i][j]
                else:
                    c, dcomp = group
                    lo_c, hi_c = pf.comp_slices[c]
                    lo_d, _ = pf.comp_slices[dcomp]
                    k = hi_c - lo_c
                    sub_orders = [form.orders[lo_c + i] for i in range(k)]
                    inv = _invert_mod_orders(opt, sub_orders)
                    if inv is None:
                        ok = False
                        break
                    for i in range(k):
                        for j in range(k):
                            mat[lo_d + i][lo_c + j] = opt[i][j]
                            mat[lo_c + i][lo_d + j] = inv[i][j]
            if not ok:
                continue
            reduced = tuple(tuple(mat[i][j] % form.orders[i]
                                  for j in range(r)) for i in range(r))
            if reduced in seen:
                continue
            seen.add(reduced)
            matrices.append(reduced)

    matrices.sort()
    out = []
    for m in matrices:
        auto = DiscAutomorphism(form, m)
        assert auto.is_involution()
        out.append(auto)
    pf._cache["involutions"] = out
    return out


def _invert_mod_orders(m: Sequence[Sequence[int]], orders: Sequence[int]
                       ) -> Optional[List[List[int]]]:
    """Inverse of a square matrix acting on prod Z/orders, or None."""
    k = len(orders)
    cols = [[m[i][j] for i in range(k)] for j in range(k)]
    inv_cols = []
    for j in range(k):
        target = [1 if i == j else 0 for i in range(k)]
        sol = _intmat.solve_mod_orders(cols, list(orders), target)
        if sol is None:
            return None
        inv_cols.append(sol)
    return [[inv_cols[j][i] % orders[i] for j in range(k)]
            for i in range(k)]


# ----------------------------------------------------- rank-2 positive autos


def binary_autos(gram: Sequence[Sequence[int]]) -> List[List[List[int]]]:
    """The orthogonal group of a positive definite even binary lattice,
    as integer matrices in the lattice basis."""
    a, b, d = gram[0][0], gram[0][1], gram[1][1]
    if gram[1][0] != b:
        raise ValueError("Gram matrix must be symmetric")
    det = a * d - b * b
    if a <= 0 or det <= 0:
        raise ValueError("Gram matrix must be positive definite")
    if a % 2 or d % 2:
        raise ValueError("lattice must be even")

    def vectors_of_norm(t: int) -> List[Tuple[int, int]]:
        out = []
        xmax = _isqrt(t * d // det) + 1
        ymax = _isqrt(t * a // det) + 1
        for x in range(-xmax, xmax + 1):
            for y in range(-ymax, ymax + 1):
                if a * x * x + 2 * b * x * y + d * y * y == t:
                    out.append((x, y))
        return out

    v1s = vectors_of_norm(a)
    v2s = vectors_of_norm(d)
    autos = []
    for v1 in v1s:
        for v2 in v2s:
            pair = a * v1[0] * v2[0] + b * (v1[0] * v2[1] + v1[1] * v2[0]) \
                + d * v1[1] * v2[1]
            if pair != b:
                continue
            mat = [[v1[0], v2[0]], [v1[1], v2[1]]]
            dm = mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
            assert dm in (1, -1)
            autos.append(mat)
    autos.sort()
    return autos


def _isqrt(n: int) -> int:
    import math
    return math.isqrt(max(n, 0))


def maximizing_has_skew(tgram: Sequence[Sequence[int]],
                        pf: PolarizedForm) -> bool:
    """Rank-19 dispatch: does some determinant -1 isometry of the rank-2
    positive lattice T act, through an anti-isometry of discriminants, as a
    symmetry-induced involution of the polarized discriminant?

    Raises ValueError when disc T is not anti-isometric to the polarized
    discriminant.
    """
    gd = disc_of_gram([list(row) for row in tgram])
    disc_t = gd.form
    disc_s = pf.form
    if disc_t.order != disc_s.order:
        raise ValueError("discriminant group sizes differ")
    if disc_s.order > 4096:
        raise ValueError("discriminant too large for the rank-19 dispatch")
    psis = _anti_isometries(disc_t, disc_s)
    if not psis:
        raise ValueError(
            "discriminant of T is not anti-isometric to the polarized "
            "discriminant")
    invol_set = {auto.matrix for auto in disc_involutions(pf)}
    reflections = [m for m in binary_autos(tgram)
                   if m[0][0] * m[1][1] - m[0][1] * m[1][0] == -1]
    for refl in reflections:
        assert refl[0][0] + refl[1][1] == 0, "det -1 must be a reflection"
        rho = _induced_on_disc(gd, refl)
        for psi in psis:
            sigma = _conjugate(disc_t, disc_s, psi, rho)
            if sigma is not None and sigma in invol_set:
                return True
    return False


def _induced_on_disc(gd: GramDisc, iso: Sequence[Sequence[int]]
                     ) -> List[List[int]]:
    """Matrix induced on the discriminant generators by a lattice isometry
    (dual-coordinate action is by the inverse transpose)."""
    inv = _intmat.unimodular_inverse([list(r) for r in iso])
    inv_t = _intmat.transpose(inv)
    cols = []
    for w in gd.gen_duals:
        cols.append(gd.to_coords(_intmat.matvec(inv_t, w)))
    k = len(gd.gen_duals)
    return [[cols[j][i] for j in range(k)] for i in range(k)]


def _anti_isometries(src: FiniteQuadraticForm, dst: FiniteQuadraticForm
                     ) -> List[List[Element]]:
    """All group isomorphisms psi: src -> dst with q(psi x) = -q(x),
    as lists of generator images."""
    if src.order != dst.order:
        return []
    dst_elems = sorted(dst.iter_elements())
    results: List[List[Element]] = []
    gens = list(range(src.rank))

    def extend(images: List[Element]) -> None:
        i = len(images)
        if i == src.rank:
            sub = dst.subgroup(images)
            if sub.order == dst.order:
                results.append(list(images))
            return
        want_q = canon_mod2(-src.q[i])
        oi = src.orders[i]
        for y in dst_elems:
            if dst.smul(oi, y) != dst.zero():
                continue
            if dst.eval_q(y) != want_q:
                continue
            good = True
            for t in range(i):
                if dst.eval_b(y, images[t]) != (-src.b[i][t]) % 1:
                    good = False
                    break
            if good:
                extend(images + [y])

    extend([])
    return results


def _conjugate(disc_t: FiniteQuadraticForm, disc_s: FiniteQuadraticForm,
               psi: List[Element], rho: List[List[int]]
               ) -> Optional[Tuple[Tuple[int, ...], ...]]:
    """The matrix of psi rho psi^{-1} on disc_s generators, as a reduced
    tuple matrix (None if the generators fail to resolve, which cannot
    happen for genuine isomorphisms)."""
    r_s = disc_s.rank
    r_t = disc_t.rank
    psi_cols = [list(img) for img in psi]

    def psi_apply(tvec: Sequence[int]) -> Element:
        out = disc_s.zero()
        for c, img in zip(tvec, psi):
            if c:
                out = disc_s.add(out, disc_s.smul(c, img))
        return out

    cols = []
    for kgen in range(r_s):
        target = _unit(r_s, kgen)
        coeff = _intmat.solve_mod_orders(psi_cols, list(disc_s.orders),
                                         list(target))
        if coeff is None:
            return None
        image = disc_s.zero()
        for i, c in enumerate(coeff):
            if c % disc_t.orders[i]:
                rho_gi = tuple(rho[t][i] % disc_t.orders[t]
                               for t in range(r_t))
                image = disc_s.add(image,
                                   disc_s.smul(c, psi_apply(rho_gi)))
        cols.append(image)
    return tuple(tuple(cols[j][i] for j in range(r_s)) for i in range(r_s))
