"""Certified real branch resolution for plane algebraic curves.

Given a bivariate polynomial P(x, y) with rational coefficients that is
squarefree in y, the domain interval is partitioned into cells on which
the number of real roots in y is constant, the root branches are ordered
increasingly, and each branch is evaluable to any requested width by
Sturm-certified interval refinement.

Root isolation is done from scratch over the rationals (and over real
algebraic points for cell boundaries); sympy is used only for bivariate
gcd, resultants and factorization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import sympy
from gmpy2 import mpq

from .errors import (
    AmbiguousSample,
    DegenerateFiber,
    InputError,
    OutsideCell,
)

POINT = "POINT"
OPEN_INTERVAL = "OPEN_INTERVAL"

_MAX_REFINEMENTS = 128


# -- univariate rational polynomial toolkit ---------------------------


def _strip(c):
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return c


def _deriv(c):
    return [mpq(i) * c[i] for i in range(1, len(c))]


def _peval(c, x):
    acc = mpq(0)
    for coeff in reversed(c):
        acc = acc * x + coeff
    return acc


def _prem_neg(a, b):
    """-(a mod b) for rational coefficient lists (b nonzero)."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and _strip(a):
        a = _strip(a)
        if len(a) - 1 < db:
            break
        f = a[-1] / lb
        shift = len(a) - 1 - db
        for i in range(len(b)):
            a[shift + i] -= f * b[i]
        a.pop()
    return [-v for v in _strip(a)]


def _sturm_chain(p):
    chain = [_strip(p), _strip(_deriv(p))]
    while chain[-1]:
        nxt = _prem_neg(chain[-2], chain[-1])
        if not nxt:
            break
        chain.append(nxt)
    return [c for c in chain if c]


def _sign(x):
    return (x > 0) - (x < 0)


def _variations(signs):
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _var_at(chain, x):
    return _variations([_sign(_peval(c, x)) for c in chain])


def _var_at_inf(chain, direction):
    return _variations(
        [_sign(c[-1]) * (direction ** ((len(c) - 1) % 2)) for c in chain]
    )


def count_roots(chain, lo, hi):
    """Number of distinct real roots in (lo, hi] by Sturm's theorem."""
    return _var_at(chain, lo) - _var_at(chain, hi)


def _count_all(chain):
    return _var_at_inf(chain, -1) - _var_at_inf(chain, 1)


def _root_bound(p):
    lead = abs(p[-1])
    return mpq(1) + max(abs(c) for c in p) / lead


def isolate_squarefree(p):
    """Disjoint isolating intervals (lo, hi], one per real root, sorted."""
    p = _strip(p)
    chain = _sturm_chain(p)
    bound = _root_bound(p)
    out = []

    def split(lo, hi, k):
        if k == 0:
            return
        if k == 1:
            out.append([lo, hi])
            return
        mid = (lo + hi) / 2
        left = count_roots(chain, lo, mid)
        split(lo, mid, left)
        split(mid, hi, k - left)

    split(-bound, bound, count_roots(chain, -bound, bound))
    return chain, out


def refine_interval(chain, lo, hi, width):
    """Shrink an isolating (lo, hi] below `width` by Sturm bisection."""
    while hi - lo > width:
        mid = (lo + hi) / 2
        if count_roots(chain, lo, mid) == 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


# -- real algebraic boundary points -----------------------------------


class AlgebraicReal:
    """A real root of an irreducible rational polynomial of degree >= 2,
    pinned down by an isolating interval with a sign change."""

    __slots__ = ("minpoly", "lo", "hi", "_chain")

    def __init__(self, minpoly, lo, hi):
        self.minpoly = [mpq(c) for c in minpoly]
        self.lo, self.hi = mpq(lo), mpq(hi)
        self._chain = _sturm_chain(self.minpoly)

    def refine(self):
        self.lo, self.hi = refine_interval(
            self._chain, self.lo, self.hi, (self.hi - self.lo) / 2
        )

    def cmp_rational(self, q):
        """-1, 0, +1 comparison with a rational (never 0: irreducible)."""
        q = mpq(q)
        for _ in range(_MAX_REFINEMENTS):
            if q <= self.lo:
                return 1
            if q > self.hi:
                return -1
            self.refine()
        raise AssertionError("refinement failed to separate")  # pragma: no cover

    def to_json(self):
        return {
            "minpoly": [str(c) for c in self.minpoly],
            "interval": [str(self.lo), str(self.hi)],
        }


def _boundary_cmp(a, b):
    """Order two boundary points (rational or algebraic)."""
    if isinstance(a, AlgebraicReal) and isinstance(b, AlgebraicReal):
        while True:
            if a.hi <= b.lo:
                return -1
            if b.hi <= a.lo:
                return 1
            a.refine()
            b.refine()
    if isinstance(a, AlgebraicReal):
        return a.cmp_rational(b)
    if isinstance(b, AlgebraicReal):
        return -b.cmp_rational(a)
    return _sign(mpq(a) - mpq(b))


# -- arithmetic in Q(alpha) -------------------------------------------


def _nf_trim(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_divmod(a, b):
    """Quotient and remainder of rational coefficient lists (b nonzero)."""
    a, b = _nf_trim(a), _nf_trim(b)
    q = [mpq(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = f
        for i in range(len(b)):
            a[shift + i] -= f * b[i]
        a = _nf_trim(a)
    return _nf_trim(q), a


def _nf_mulmod(a, b, m):
    return _poly_divmod(_poly_mul(a, b), m)[1]


def _nf_inv(a, m):
    """Inverse of a mod m by the extended Euclidean algorithm."""
    r0, r1 = list(m), _nf_trim(a)
    s0, s1 = [], [mpq(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        qs = _poly_mul(q, s1)
        news = [mpq(0)] * max(len(s0), len(qs))
        for i, v in enumerate(s0):
            news[i] += v
        for i, v in enumerate(qs):
            news[i] -= v
        r0, r1 = r1, r
        s0, s1 = s1, _nf_trim(news)
    if len(r0) != 1:
        raise ZeroDivisionError("element not invertible (minpoly not irreducible?)")
    c = r0[0]
    return _nf_trim([v / c for v in s0])


def _interval_eval(coeffs, lo, hi):
    """Interval Horner evaluation of a rational polynomial on [lo, hi]."""
    vlo = vhi = mpq(0)
    for c in reversed(coeffs):
        cands_lo = (vlo * lo, vlo * hi, vhi * lo, vhi * hi)
        vlo, vhi = min(cands_lo) + c, max(cands_lo) + c
    return vlo, vhi


def _nf_sign(a, alpha: AlgebraicReal):
    """Exact sign of the element a(alpha)."""
    a = _nf_trim(a)
    if not a:
        return 0
    for _ in range(_MAX_REFINEMENTS):
        vlo, vhi = _interval_eval(a, alpha.lo, alpha.hi)
        if vlo > 0:
            return 1
        if vhi < 0:
            return -1
        alpha.refine()
    raise AssertionError("sign refinement failed")  # pragma: no cover


def _nf_root_count(poly_y, alpha):
    """Distinct real roots of a polynomial in y with Q(alpha) coefficients.

    `poly_y` is a list of number-field elements (coefficient lists).
    """
    m = alpha.minpoly
    p = [list(c) for c in poly_y]
    while p and not _nf_trim(p[-1]):
        p.pop()
    if not p:
        raise DegenerateFiber("fiber polynomial vanishes identically")
    if len(p) == 1:
        return 0

    def deriv(q):
        return [[mpq(i) * v for v in q[i]] for i in range(1, len(q))]

    def rem_neg(a, b):
        a = [list(c) for c in a]
        db = len(b) - 1
        inv_lb = _nf_inv(b[-1], m)
        while True:
            while a and not _nf_trim(a[-1]):
                a.pop()
            if len(a) - 1 < db:
                break
            f = _nf_mulmod(a[-1], inv_lb, m)
            shift = len(a) - 1 - db
            for i in range(len(b)):
                prod = _nf_mulmod(f, b[i], m)
                cur = list(a[shift + i])
                ln = max(len(cur), len(prod))
                cur += [mpq(0)] * (ln - len(cur))
                for t, v in enumerate(prod):
                    cur[t] -= v
                a[shift + i] = cur
            a.pop()
        return [[-v for v in c] for c in a]

    chain = [p, deriv(p)]
    while True:
        tail = chain[-1]
        while tail and not _nf_trim(tail[-1]):
            tail.pop()
        if not tail:
            chain.pop()
            break
        nxt = rem_neg(chain[-2], chain[-1])
        while nxt and not _nf_trim(nxt[-1]):
            nxt.pop()
        if not nxt:
            break
        chain.append(nxt)

    def vars_at_inf(direction):
        signs = []
        for q in chain:
            s = _nf_sign(q[-1], alpha)
            signs.append(s * (direction ** ((len(q) - 1) % 2)))
        return _variations(signs)

    return vars_at_inf(-1) - vars_at_inf(1)


# -- problems, cells, branches ----------------------------------------

_X, _Y = sympy.symbols("x y")


def _terms_to_sympy(terms):
    expr = sympy.Integer(0)
    for (i, j), c in terms.items():
        c = mpq(c)
        expr += (
            sympy.Rational(int(c.numerator), int(c.denominator))
            * _X ** i * _Y ** j
        )
    return sympy.expand(expr)


def _sympy_univariate_to_mpq(expr, var):
    poly = sympy.Poly(expr, var)
    out = [mpq(0)] * (poly.degree() + 1)
    for (e,), c in poly.terms():
        q = sympy.Rational(c)
        out[e] = mpq(int(q.p), int(q.q))
    return out


class BranchProblem:
    """P(x, y) squarefree in y, with a closed rational domain for x."""

    def __init__(self, terms, domain):
        self.terms = {tuple(e): mpq(c) for e, c in terms.items() if mpq(c)}
        if not self.terms:
            raise InputError("polynomial must be nonzero")
        self.degree_y = max(j for _, j in self.terms)
        if self.degree_y < 1:
            raise InputError("polynomial must have positive degree in y")
        a, b = mpq(domain[0]), mpq(domain[1])
        if not a < b:
            raise InputError("domain must be a nondegenerate interval")
        self.domain = (a, b)
        self.expr = _terms_to_sympy(self.terms)
        g = sympy.gcd(self.expr, sympy.diff(self.expr, _Y))
        if sympy.degree(g, _Y) > 0 or sympy.degree(g, _X) > 0:
            raise InputError("polynomial is not squarefree in y")
        # an x-dependent content would make whole fibers degenerate
        poly_y = sympy.Poly(self.expr, _Y)
        cont_x = sympy.gcd_list([c for c in poly_y.all_coeffs() if c != 0])
        if sympy.degree(cont_x, _X) > 0:
            raise InputError("polynomial has a nonconstant content in x")

    def fiber(self, x0):
        """Coefficients (ascending in y) of P(x0, y) for rational x0."""
        x0 = mpq(x0)
        coeffs = [mpq(0)] * (self.degree_y + 1)
        for (i, j), c in self.terms.items():
            coeffs[j] += c * x0 ** i
        return _strip(coeffs)

    def to_json(self):
        from .series import grlex_key

        return {
            "kind": "branch_problem",
            "terms": [
                [list(e), str(c)]
                for e, c in sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))
            ],
            "domain": [str(self.domain[0]), str(self.domain[1])],
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            {tuple(e): mpq(c) for e, c in obj["terms"]},
            (mpq(obj["domain"][0]), mpq(obj["domain"][1])),
        )


@dataclass
class Cell1D:
    kind: str
    count: int
    point: Optional[Union[mpq, AlgebraicReal]] = None   # POINT cells
    lo: Optional[Union[mpq, AlgebraicReal]] = None      # OPEN_INTERVAL cells
    hi: Optional[Union[mpq, AlgebraicReal]] = None

    def _endpoint_json(self, v):
        if isinstance(v, AlgebraicReal):
            return v.to_json()
        return str(v)

    def to_json(self):
        obj = {"kind": self.kind, "count": self.count}
        if self.kind == POINT:
            obj["point"] = self._endpoint_json(self.point)
        else:
            obj["lo"] = self._endpoint_json(self.lo)
            obj["hi"] = self._endpoint_json(self.hi)
        return obj


@dataclass
class BranchHandle:
    cell: Cell1D
    index: int            # 1-based, increasing y

    def __post_init__(self):
        if not 1 <= self.index <= self.cell.count:
            raise InputError(
                f"branch index {self.index} outside 1..{self.cell.count}"
            )

    def to_json(self):
        return {"cell": self.cell.to_json(), "index": self.index}


def isolate_roots(problem_or_terms, x0):
    """Sorted isolating intervals for the real roots of P(x0, y)."""
    if isinstance(problem_or_terms, BranchProblem):
        fiber = problem_or_terms.fiber(x0)
    else:
        fiber = _strip(list(problem_or_terms))
    if not fiber:
        raise DegenerateFiber(f"P({x0}, y) is identically zero")
    if len(fiber) == 1:
        return []
    _, intervals = isolate_squarefree(fiber)
    return [(lo, hi) for lo, hi in intervals]


def _critical_points(problem: BranchProblem):
    """Real roots of lc_y(P) * disc_y(P) inside the open domain, ordered."""
    poly_y = sympy.Poly(problem.expr, _Y)
    lead = poly_y.LC()
    res = sympy.resultant(problem.expr, sympy.diff(problem.expr, _Y), _Y)
    crit = sympy.expand(lead * res)
    if sympy.degree(crit, _X) <= 0:
        return []
    a, b = problem.domain
    points = []
    for factor, _mult in sympy.factor_list(crit, _X)[1]:
        if sympy.degree(factor, _X) <= 0:
            continue
        coeffs = _sympy_univariate_to_mpq(factor, _X)
        if len(coeffs) == 2:
            root = -coeffs[0] / coeffs[1]
            if a < root < b:
                points.append(root)
            continue
        chain, intervals = isolate_squarefree(coeffs)
        for lo, hi in intervals:
            alg = AlgebraicReal(coeffs, lo, hi)
            if alg.cmp_rational(a) > 0 and alg.cmp_rational(b) < 0:
                points.append(alg)
    points.sort(key=_BoundaryKey)
    return points


class _BoundaryKey:
    def __init__(self, value):
        self.value = value

    def __lt__(self, other):
        return _boundary_cmp(self.value, other.value) < 0


def _fiber_count(problem, x):
    """Distinct real roots of P(x, y) at a rational or algebraic x."""
    if isinstance(x, AlgebraicReal):
        deg_a = len(x.minpoly) - 1
        coeffs = []
        for j in range(problem.degree_y + 1):
            elem = [mpq(0)] * deg_a
            for (i, jj), c in problem.terms.items():
                if jj == j:
                    # x^i reduced mod the minimal polynomial
                    power = [mpq(1)]
                    for _ in range(i):
                        power = _nf_mulmod(power, [mpq(0), mpq(1)], x.minpoly)
                    for t, v in enumerate(power):
                        elem[t] += c * v
            coeffs.append(_nf_trim(elem))
        return _nf_root_count(coeffs, x)
    fiber = problem.fiber(x)
    if not fiber:
        raise DegenerateFiber(f"P({x}, y) is identically zero")
    if len(fiber) == 1:
        return 0
    return _count_all(_sturm_chain(fiber))


def _rational_between(lo, hi):
    """A rational strictly between two boundary points."""
    for _ in range(_MAX_REFINEMENTS):
        llo = lo.hi if isinstance(lo, AlgebraicReal) else lo
        hhi = hi.lo if isinstance(hi, AlgebraicReal) else hi
        if llo < hhi:
            return (llo + hhi) / 2
        if isinstance(lo, AlgebraicReal):
            lo.refine()
        if isinstance(hi, AlgebraicReal):
            hi.refine()
    raise AssertionError("could not separate boundary points")  # pragma: no cover


def cell_partition(problem: BranchProblem):
    """Alternating point/interval cells with constant root counts."""
    a, b = problem.domain
    crit = _critical_points(problem)
    boundaries = [a] + crit + [b]
    cells = []
    for i, pt in enumerate(boundaries):
        cells.append(Cell1D(kind=POINT, count=_fiber_count(problem, pt), point=pt))
        if i + 1 < len(boundaries):
            nxt = boundaries[i + 1]
            sample = _rational_between(pt, nxt)
            cells.append(
                Cell1D(
                    kind=OPEN_INTERVAL,
                    count=_fiber_count(problem, sample),
                    lo=pt,
                    hi=nxt,
                )
            )
    return cells


def _cell_contains(cell: Cell1D, x):
    x = mpq(x)
    if cell.kind == POINT:
        if isinstance(cell.point, AlgebraicReal):
            return False
        return cell.point == x
    lo_ok = _boundary_cmp(cell.lo, x) < 0
    hi_ok = _boundary_cmp(cell.hi, x) > 0
    return lo_ok and hi_ok


def identify_branch(problem: BranchProblem, cells, sample) -> BranchHandle:
    """Which ordered branch passes through the sampled point."""
    x0, (ylo, yhi) = sample
    x0, ylo, yhi = mpq(x0), mpq(ylo), mpq(yhi)
    cell = next(
        (c for c in cells if c.kind == OPEN_INTERVAL and _cell_contains(c, x0)),
        None,
    )
    if cell is None:
        raise OutsideCell(f"x = {x0} lies in no open interval cell")
    fiber = problem.fiber(x0)
    chain = _sturm_chain(fiber)
    inside = count_roots(chain, ylo, yhi)
    if inside != 1:
        raise AmbiguousSample(
            f"enclosure [{ylo}, {yhi}] isolates {inside} roots, need exactly 1"
        )
    below = _var_at_inf(chain, -1) - _var_at(chain, ylo)
    return BranchHandle(cell=cell, index=below + 1)


def evaluate_branch(problem: BranchProblem, handle: BranchHandle, x, width):
    """Isolating interval of width <= `width` around the handle's root."""
    x, width = mpq(x), mpq(width)
    if not _cell_contains(handle.cell, x):
        raise OutsideCell(f"x = {x} is outside the handle's cell")
    fiber = problem.fiber(x)
    chain, intervals = isolate_squarefree(fiber)
    if len(intervals) != handle.cell.count:
        raise AssertionError("root count changed inside a cell")  # pragma: no cover
    lo, hi = intervals[handle.index - 1]
    lo, hi = refine_interval(chain, lo, hi, width)
    return lo, hi
