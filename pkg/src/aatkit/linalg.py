"""Exact linear algebra: fraction-free elimination, kernels, HNF, SNF.

The nullspace routine is the workhorse behind annihilator searches: it
processes columns in the caller's (canonical) order and stops at the first
linearly dependent column, which yields the kernel vector with the smallest
graded-lex leading monomial.  Rational matrices are scaled to integers and
eliminated fraction-free with per-row gcd reduction; Gaussian-rational
matrices fall back to ordinary field elimination.
"""

from __future__ import annotations

from math import gcd, lcm

from gmpy2 import mpq, mpz

from . import scalars
from .scalars import GAUSS, RAT, GaussianRational


def _rows_to_int(rows):
    """Scale each mpq row by the lcm of its denominators; returns mpz rows."""
    out = []
    for row in rows:
        l = 1
        for c in row:
            if c:
                l = lcm(l, int(c.denominator))
        out.append([mpz(c * l) for c in row])
    return out


def _row_reduce_gcd(row):
    g = 0
    for c in row:
        if c:
            g = gcd(g, int(c))
            if g == 1:
                return row
    if g > 1:
        return [c // g for c in row]
    return row


def first_kernel_vector(rows, ncols, field=RAT):
    """Canonical kernel vector of the column space, or None.

    `rows` are the equations (each of length `ncols`).  Columns are tried
    left to right; the first column that is a linear combination of the
    previous ones determines the kernel vector, returned as a list of
    coefficients (mpq for RAT, GaussianRational for GAUSS) with a 1 in
    that column and support only in earlier columns.
    """
    if field == RAT:
        work = _rows_to_int([[mpq(c) for c in row] for row in rows])
        return _first_kernel_int(work, ncols)
    work = [[scalars.as_gauss(c) for c in row] for row in rows]
    return _first_kernel_field(work, ncols)


def _first_kernel_int(rows, ncols):
    pivot_rows = []   # (col, row) in ascending col order
    free = [r for r in rows if any(r)]
    for col in range(ncols):
        pivot = None
        for idx, r in enumerate(free):
            if r[col]:
                pivot = idx
                break
        if pivot is None:
            return _back_solve_int(pivot_rows, col)
        prow = free.pop(pivot)
        prow = _row_reduce_gcd(prow)
        p = prow[col]
        new_free = []
        for r in free:
            if r[col]:
                q = r[col]
                g = gcd(int(p), int(q))
                a, b = p // g, q // g
                r = [a * x - b * y for x, y in zip(r, prow)]
                r = _row_reduce_gcd(r)
            if any(r):
                new_free.append(r)
        free = new_free
        pivot_rows.append((col, prow))
    return None


def _back_solve_int(pivot_rows, free_col):
    x = {free_col: mpq(1)}
    for col, row in reversed(pivot_rows):
        acc = mpq(0)
        for c, xc in x.items():
            if c > col and row[c]:
                acc += mpq(row[c]) * xc
        if acc:
            x[col] = -acc / mpq(row[col])
    return [x.get(j, mpq(0)) for j in range(free_col + 1)]


def _first_kernel_field(rows, ncols):
    pivot_rows = []
    free = [list(r) for r in rows if any(r)]
    for col in range(ncols):
        pivot = None
        for idx, r in enumerate(free):
            if r[col]:
                pivot = idx
                break
        if pivot is None:
            return _back_solve_field(pivot_rows, col)
        prow = free.pop(pivot)
        p = prow[col]
        new_free = []
        for r in free:
            if r[col]:
                f = r[col] / p
                r = [x - f * y for x, y in zip(r, prow)]
            if any(r):
                new_free.append(r)
        free = new_free
        pivot_rows.append((col, prow))
    return None


def _back_solve_field(pivot_rows, free_col):
    one = GaussianRational(1)
    x = {free_col: one}
    for col, row in reversed(pivot_rows):
        acc = GaussianRational()
        for c, xc in x.items():
            if c > col and row[c]:
                acc = acc + row[c] * xc
        if acc:
            x[col] = -(acc / row[col])
    zero = GaussianRational()
    return [x.get(j, zero) for j in range(free_col + 1)]


def rank(rows, field=RAT):
    """Exact rank of a matrix over the coefficient field."""
    if not rows:
        return 0
    ncols = len(rows[0])
    if field == RAT:
        work = _rows_to_int([[mpq(c) for c in row] for row in rows])
    else:
        work = [[scalars.as_gauss(c) for c in row] for row in rows]
    r = 0
    free = [row for row in work if any(row)]
    for col in range(ncols):
        pivot = None
        for idx, row in enumerate(free):
            if row[col]:
                pivot = idx
                break
        if pivot is None:
            continue
        prow = free.pop(pivot)
        p = prow[col]
        new_free = []
        for row in free:
            if row[col]:
                if field == RAT:
                    g = gcd(int(p), int(row[col]))
                    a, b = p // g, row[col] // g
                    row = [a * x - b * y for x, y in zip(row, prow)]
                    row = _row_reduce_gcd(row)
                else:
                    f = row[col] / p
                    row = [x - f * y for x, y in zip(row, prow)]
            if any(row):
                new_free.append(row)
        free = new_free
        r += 1
    return r


def inverse(matrix, field=RAT):
    """Exact inverse of a square matrix, or None if singular."""
    n = len(matrix)
    one = scalars.one(field)
    zero = scalars.zero(field)
    aug = []
    for i, row in enumerate(matrix):
        if len(row) != n:
            raise ValueError("inverse of a non-square matrix")
        prom = [scalars.promote(c, field) for c in row]
        aug.append(prom + [one if j == i else zero for j in range(n)])
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if aug[r][col]:
                pivot = r
                break
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [c / p for c in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def det(matrix, field=RAT):
    """Exact determinant by fraction elimination."""
    n = len(matrix)
    work = [[scalars.promote(c, field) for c in row] for row in matrix]
    result = scalars.one(field)
    sign = 1
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if work[r][col]:
                pivot = r
                break
        if pivot is None:
            return scalars.zero(field)
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            sign = -sign
        p = work[col][col]
        result = result * p
        for r in range(col + 1, n):
            if work[r][col]:
                f = work[r][col] / p
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    if sign < 0:
        result = -result
    return result


# -- integer lattice normal forms -------------------------------------


def hermite_normal_form(rows):
    """Row-style HNF of an integer matrix.

    Returns (hnf_rows, pivot_cols): nonzero rows in echelon form with
    positive pivots and entries above each pivot reduced into [0, pivot).
    """
    work = [[int(c) for c in row] for row in rows if any(row)]
    ncols = len(work[0]) if work else 0
    result = []
    pivots = []
    col = 0
    while work and col < ncols:
        live = [r for r in work if r[col]]
        if not live:
            col += 1
            continue
        # chain gcd steps until one row carries the column gcd
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            base = live[0]
            rest = []
            for r in live[1:]:
                q = r[col] // base[col]
                if q:
                    for j in range(ncols):
                        r[j] -= q * base[j]
                if r[col]:
                    rest.append(r)
            live = [base] + rest
        base = live[0]
        if base[col] < 0:
            for j in range(ncols):
                base[j] = -base[j]
        work = [r for r in work if r is not base and any(r)]
        result.append(base)
        pivots.append(col)
        col += 1
    # reduce entries above each pivot; ascending order is essential: a row
    # has zeros left of its own pivot, so later steps never disturb the
    # columns already reduced
    for i in range(len(result)):
        p = pivots[i]
        piv = result[i][p]
        for r in result[:i]:
            q = r[p] // piv
            if q:
                for j in range(ncols):
                    r[j] -= q * result[i][j]
    return result, pivots


def hnf_membership(hnf_rows, pivots, vec):
    """Express `vec` over HNF basis rows with integer coefficients.

    Returns the coefficient list, or None when `vec` is not in the
    integer row span.
    """
    v = [int(c) for c in vec]
    coeffs = []
    for row, p in zip(hnf_rows, pivots):
        if v[p] % row[p]:
            return None
        q = v[p] // row[p]
        coeffs.append(q)
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    if any(v):
        return None
    return coeffs


def smith_normal_form(rows):
    """Elementary divisors d_1 | d_2 | ... of an integer matrix."""
    a = [[int(c) for c in row] for row in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    divisors = []
    top = 0
    while top < min(m, n):
        # find a nonzero entry in the remaining block
        found = None
        for i in range(top, m):
            for j in range(top, n):
                if a[i][j]:
                    found = (i, j)
                    break
            if found:
                break
        if not found:
            break
        i, j = found
        a[top], a[i] = a[i], a[top]
        for row in a:
            row[top], row[j] = row[j], row[top]
        while True:
            # clear column `top`
            reduced = False
            for i in range(top + 1, m):
                if a[i][top]:
                    q = a[i][top] // a[top][top]
                    a[i] = [x - q * y for x, y in zip(a[i], a[top])]
                    if a[i][top]:
                        a[top], a[i] = a[i], a[top]
                        reduced = True
            if reduced:
                continue
            # clear row `top`
            for j in range(top + 1, n):
                if a[top][j]:
                    q = a[top][j] // a[top][top]
                    for row in a:
                        row[j] -= q * row[top]
                    if a[top][j]:
                        for row in a:
                            row[top], row[j] = row[j], row[top]
                        reduced = True
            if not reduced:
                break
        divisors.append(abs(a[top][top]))
        top += 1
    # enforce the divisibility chain
    changed = True
    while changed:
        changed = False
        for i in range(len(divisors)):
            for j in range(i + 1, len(divisors)):
                if divisors[i] and divisors[j] % divisors[i]:
                    g = gcd(divisors[i], divisors[j])
                    l = divisors[i] * divisors[j] // g
                    divisors[i], divisors[j] = g, l
                    changed = True
    return divisors
