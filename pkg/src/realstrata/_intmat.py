"""Exact integer matrix algebra: HNF, SNF, kernels, determinants, inverses.

All routines operate on lists of lists of Python ints (arbitrary precision) and
are deterministic.  Matrices are small (a dozen rows at most in this package),
so clarity wins over asymptotics; the algorithms are the classical
elimination ones with exact arithmetic throughout.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

IntMatrix = List[List[int]]


def copy_matrix(a: Sequence[Sequence[int]]) -> IntMatrix:
    return [list(row) for row in a]


def identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> IntMatrix:
    return [[0] * cols for _ in range(rows)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = zeros(rows, cols)
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            aik = ai[k]
            if aik:
                bk = b[k]
                for j in range(cols):
                    oi[j] += aik * bk[j]
    return out


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> List[int]:
    return [sum(a[i][k] * v[k] for k in range(len(v))) for i in range(len(a))]


def transpose(a: Sequence[Sequence[int]]) -> IntMatrix:
    if not a:
        return []
    return [[a[i][j] for i in range(len(a))] for j in range(len(a[0]))]


def hnf_columns(a: Sequence[Sequence[int]]) -> IntMatrix:
    """Column-style Hermite normal form of the lattice spanned by the columns.

    Returns a lower-triangular r x r basis H of the column span (which must be
    full rank r = number of rows), with positive diagonal and off-diagonal
    entries reduced to 0 <= H[i][j] < H[i][i] for j < i.
    """
    rows = len(a)
    work = [list(col) for col in zip(*a)] if a and a[0] else []
    # work holds columns as row-vectors for easy swapping.
    basis: List[List[int]] = []
    for pivot_row in range(rows):
        # Reduce all columns so only one has a nonzero entry in pivot_row
        # (gcd via repeated remainder on column pairs).
        while True:
            nonzero = [c for c in work if c[pivot_row] != 0]
            if not nonzero:
                raise ValueError("column span is not full rank")
            if len(nonzero) == 1:
                break
            nonzero.sort(key=lambda c: abs(c[pivot_row]))
            small = nonzero[0]
            for c in nonzero[1:]:
                f = c[pivot_row] // small[pivot_row]
                for i in range(rows):
                    c[i] -= f * small[i]
        col = next(c for c in work if c[pivot_row] != 0)
        work.remove(col)
        if col[pivot_row] < 0:
            col = [-x for x in col]
        basis.append(col)
        # Drop columns that are now zero everywhere at or below pivot_row.
        work = [c for c in work if any(c[i] for i in range(pivot_row + 1, rows))]
    # Reduce off-diagonal entries: for each later basis vector, reduce earlier
    # vectors' entries in its pivot row.
    for j in range(rows):
        for i in range(j + 1, rows):
            pivot = basis[i][i]
            f = basis[j][i] // pivot
            if f:
                for k in range(rows):
                    basis[j][k] -= f * basis[i][k]
    # Return as matrix whose columns are the basis vectors.
    return [[basis[j][i] for j in range(rows)] for i in range(rows)]


def hnf_solve(h: Sequence[Sequence[int]], x: Sequence[int]) -> List[int] | None:
    """Solve H z = x for integer z given lower-triangular H (as from
    hnf_columns).  Returns None when no integer solution exists."""
    n = len(h)
    z = [0] * n
    for i in range(n):
        rem = x[i] - sum(h[i][j] * z[j] for j in range(i))
        if rem % h[i][i]:
            return None
        z[i] = rem // h[i][i]
    return z


def det_lower_triangular(h: Sequence[Sequence[int]]) -> int:
    d = 1
    for i in range(len(h)):
        d *= h[i][i]
    return d


def snf(a: Sequence[Sequence[int]]) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: returns (d, u, v) with u @ a @ v = d, u and v
    unimodular, d diagonal with d[i][i] | d[i+1][i+1] and nonnegative."""
    d = copy_matrix(a)
    rows = len(d)
    cols = len(d[0]) if rows else 0
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def addmul_row(dst, src, f):
        for k in range(cols):
            d[dst][k] += f * d[src][k]
        for k in range(rows):
            u[dst][k] += f * u[src][k]

    def addmul_col(dst, src, f):
        for r in d:
            r[dst] += f * r[src]
        for r in v:
            r[dst] += f * r[src]

    def neg_row(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]

    n = min(rows, cols)
    for t in range(n):
        while True:
            # Find the nonzero entry of least absolute value in the submatrix.
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            bi, bj = best
            if bi != t:
                swap_rows(t, bi)
            if bj != t:
                swap_cols(t, bj)
            done = True
            for i in range(t + 1, rows):
                if d[i][t]:
                    addmul_row(i, t, -(d[i][t] // d[t][t]))
                    if d[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if d[t][j]:
                    addmul_col(j, t, -(d[t][j] // d[t][t]))
                    if d[t][j]:
                        done = False
            if not done:
                continue
            # Enforce divisibility: pivot must divide every remaining entry.
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if d[i][j] % d[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            addmul_row(t, offender, 1)
        if t < rows and t < cols and d[t][t] < 0:
            neg_row(t)
    return d, u, v


def snf_diagonal(a: Sequence[Sequence[int]]) -> List[int]:
    d, _, _ = snf(a)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def kernel_basis(a: Sequence[Sequence[int]]) -> List[List[int]]:
    """Integer kernel {x : a @ x = 0}: returns a list of basis column vectors."""
    if not a or not a[0]:
        cols = len(a[0]) if a else 0
        return [[1 if i == j else 0 for i in range(cols)] for j in range(cols)]
    d, _, v = snf(a)
    rows, cols = len(a), len(a[0])
    rank = sum(1 for i in range(min(rows, cols)) if d[i][i] != 0)
    return [[v[i][j] for i in range(cols)] for j in range(rank, cols)]


def unimodular_inverse(a: Sequence[Sequence[int]]) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix (det = ±1)."""
    n = len(a)
    work = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
            for i in range(n)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if work[r][col])
        work[col], work[pivot] = work[pivot], work[col]
        pv = work[col][col]
        work[col] = [x / pv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    inv = [[work[i][n + j] for j in range(n)] for i in range(n)]
    out = []
    for row in inv:
        int_row = []
        for x in row:
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
            int_row.append(int(x))
        out.append(int_row)
    return out


def fraction_solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> List[Fraction]:
    """Solve a square nonsingular rational system a x = b exactly."""
    n = len(a)
    work = [list(map(Fraction, a[i])) + [Fraction(b[i])] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col]), None)
        if pivot is None:
            raise ValueError("singular system")
        work[col], work[pivot] = work[pivot], work[col]
        pv = work[col][col]
        work[col] = [x / pv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return [work[i][n] for i in range(n)]


def fraction_det(a: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant of a square rational matrix (fraction-free pivoting)."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    work = [list(map(Fraction, row)) for row in a]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            det = -det
        pv = work[col][col]
        det *= pv
        for r in range(col + 1, n):
            if work[r][col]:
                f = work[r][col] / pv
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return det


def solve_mod_orders(gens: Sequence[Sequence[int]], orders: Sequence[int],
                     target: Sequence[int]) -> List[int] | None:
    """Find integer coefficients c with sum_t c[t] * gens[t] = target modulo
    the given coordinate orders, or None.  gens[t] and target are coordinate
    vectors of length len(orders)."""
    r = len(orders)
    s = len(gens)
    if r == 0:
        return [0] * s
    # Solve [G | diag(orders)] z = target over the integers:
    # row i = [g_0[i], ..., g_{s-1}[i], 0 ... orders[i] ... 0].
    a = []
    for i in range(r):
        row = [gens[t][i] for t in range(s)]
        row += [orders[i] if j == i else 0 for j in range(r)]
        a.append(row)
    d, u, v = snf(a)
    tb = matvec(u, list(target))
    z = [0] * (s + r)
    for i in range(r):
        di = d[i][i]
        if di == 0:
            if tb[i]:
                return None
            continue
        if tb[i] % di:
            return None
        z[i] = tb[i] // di
    sol = matvec(v, z)
    return sol[:s]
