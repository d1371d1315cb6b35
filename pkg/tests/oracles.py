"""Independent oracles used to cross-check the engine.

Everything here is built on the standard library only (Fraction
arithmetic, naive convolution, dense Gaussian elimination) so a bug in
the package cannot hide in its own verification.
"""

from fractions import Fraction
from itertools import combinations_with_replacement

SQRT2_30_DIGITS = Fraction(
    1414213562373095048801688724209, 10 ** 30
)


def exp_coeffs(order):
    """Taylor coefficients of exp(z) up to (not including) `order`."""
    out = [Fraction(1)]
    for k in range(1, order):
        out.append(out[-1] / k)
    return out


def sin_coeffs(order):
    out = [Fraction(0)] * order
    sign = Fraction(1)
    fact = Fraction(1)
    for k in range(order):
        if k:
            fact *= k
        if k % 2 == 1:
            out[k] = sign / fact
            sign = -sign
    return out


def cos_coeffs(order):
    out = [Fraction(0)] * order
    sign = Fraction(1)
    fact = Fraction(1)
    for k in range(order):
        if k:
            fact *= k
        if k % 2 == 0:
            out[k] = sign / fact
            sign = -sign
    return out


def convolve(a, b, order):
    out = [Fraction(0)] * order
    for i, ai in enumerate(a[:order]):
        if ai:
            for j, bj in enumerate(b[: order - i]):
                out[i + j] += ai * bj
    return out


def binomial_sum(coeffs, order):
    """2-variable coefficients of f(u+v) from 1-variable ones of f.

    Returns a dict {(i, j): Fraction} with i + j < order.
    """
    from math import comb

    out = {}
    for k, c in enumerate(coeffs[:order]):
        if not c:
            continue
        for i in range(k + 1):
            out[(i, k - i)] = out.get((i, k - i), Fraction(0)) + c * comb(k, i)
    return {k: v for k, v in out.items() if v}


def kernel_dimension(rows, ncols):
    """Dimension of the nullspace of a Fraction matrix."""
    rows = [list(map(Fraction, r)) for r in rows]
    rank = 0
    col = 0
    while col < ncols and rank < len(rows):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col] / pv
                for j in range(col, ncols):
                    rows[i][j] -= f * rows[rank][j]
        rank += 1
        col += 1
    return ncols - rank


def relation_kernel_dim_1var(basis_coeff_lists, target_coeffs, degree, order):
    """Nullspace dimension of the dependence system for 1-variable series.

    Monomials run over all exponent tuples of total degree <= degree in
    (basis..., target); equations force the coefficient of z^k to vanish
    for every k < order.  A zero dimension means no polynomial relation
    of that degree is visible at that order.
    """
    series = [list(c) + [Fraction(0)] * order for c in basis_coeff_lists]
    series.append(list(target_coeffs) + [Fraction(0)] * order)
    m = len(series)
    monomials = []
    for total in range(degree + 1):
        for combo in combinations_with_replacement(range(m), total):
            exps = [0] * m
            for t in combo:
                exps[t] += 1
            monomials.append(tuple(exps))
    monomials = sorted(set(monomials))
    columns = []
    for exps in monomials:
        acc = [Fraction(1)] + [Fraction(0)] * (order - 1)
        for t, e in enumerate(exps):
            for _ in range(e):
                acc = convolve(acc, series[t], order)
        columns.append(acc)
    rows = [[columns[c][k] for c in range(len(monomials))] for k in range(order)]
    return kernel_dimension(rows, len(monomials))


def eval_poly_on_series_2var(terms, assignments, order):
    """Naive check that a polynomial vanishes on 2-variable series.

    `terms` maps exponent tuples to Fractions; `assignments` is a list of
    {(i, j): Fraction} series tables.  Returns the residual table.
    """

    def mul(a, b):
        out = {}
        for (i1, j1), v1 in a.items():
            for (i2, j2), v2 in b.items():
                i, j = i1 + i2, j1 + j2
                if i + j < order:
                    out[(i, j)] = out.get((i, j), Fraction(0)) + v1 * v2
        return {k: v for k, v in out.items() if v}

    total = {}
    for exps, c in terms.items():
        term = {(0, 0): Fraction(c)}
        for t, e in enumerate(exps):
            for _ in range(e):
                term = mul(term, assignments[t])
        for k, v in term.items():
            total[k] = total.get(k, Fraction(0)) + v
    return {k: v for k, v in total.items() if v}
