"""Truncated multivariate power series with exact coefficients.

A series of order N stores coefficients for monomials of total degree < N
in a sparse table; all arithmetic is exact modulo that truncation.  Germ
maps bundle n series in n variables and model a chart germ at a regular
base point.
"""

from __future__ import annotations

from math import comb

from .errors import FieldMismatch, OrderExceeded, VariableMismatch
from . import scalars
from .scalars import GAUSS, RAT


def grlex_key(exps):
    """Sort key for the canonical graded-lexicographic monomial order."""
    return (sum(exps), exps)


def monomials_of_degree(nvars, degree):
    """All exponent tuples of exact total degree, ascending lex."""
    if nvars == 0:
        return [()] if degree == 0 else []
    block = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            block.append(prefix + (remaining,))
            return
        for e in range(remaining + 1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), degree, nvars)
    block.sort()
    return block


def monomials_upto(nvars, max_degree):
    """All exponent tuples of total degree <= max_degree, ascending grlex."""
    out = []
    for d in range(max_degree + 1):
        out.extend(monomials_of_degree(nvars, d))
    return out


def count_monomials(nvars, max_degree):
    return comb(max_degree + nvars, nvars)


class TruncatedSeries:
    """Sparse series in `nvars` variables, exact modulo total degree `order`."""

    __slots__ = ("nvars", "order", "field", "coeffs")

    def __init__(self, nvars, order, field=RAT, coeffs=None):
        if nvars < 0 or order < 1:
            raise ValueError("need nvars >= 0 and order >= 1")
        self.nvars = nvars
        self.order = order
        self.field = field
        table = {}
        if coeffs:
            for exps, c in coeffs.items() if isinstance(coeffs, dict) else coeffs:
                exps = tuple(exps)
                if len(exps) != nvars:
                    raise VariableMismatch(f"exponent arity {len(exps)} != {nvars}")
                if sum(exps) >= order:
                    continue
                c = scalars.promote(c, field)
                if c:
                    table[exps] = c
        self.coeffs = table

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars, order, field=RAT):
        return cls(nvars, order, field)

    @classmethod
    def constant(cls, value, nvars, order, field=RAT):
        return cls(nvars, order, field, {(0,) * nvars: value})

    @classmethod
    def variable(cls, index, nvars, order, field=RAT):
        exps = tuple(1 if j == index else 0 for j in range(nvars))
        return cls(nvars, order, field, {exps: 1})

    # -- basic queries ------------------------------------------------

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedSeries)
            and self.nvars == other.nvars
            and self.order == other.order
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def coefficient(self, exps):
        exps = tuple(exps)
        if sum(exps) >= self.order:
            raise OrderExceeded(f"degree {sum(exps)} not stored at order {self.order}")
        return self.coeffs.get(exps, scalars.zero(self.field))

    def constant_term(self):
        return self.coeffs.get((0,) * self.nvars, scalars.zero(self.field))

    def first_nonzero(self):
        """(exps, coeff) of the grlex-smallest nonzero term, or None."""
        if not self.coeffs:
            return None
        exps = min(self.coeffs, key=grlex_key)
        return exps, self.coeffs[exps]

    def __repr__(self):
        n = len(self.coeffs)
        return f"TruncatedSeries(nvars={self.nvars}, order={self.order}, terms={n})"

    # -- ring operations ----------------------------------------------

    def _check_compatible(self, other):
        if self.nvars != other.nvars:
            raise VariableMismatch(f"{self.nvars} vs {other.nvars} variables")
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other):
        self._check_compatible(other)
        order = min(self.order, other.order)
        table = {e: c for e, c in self.coeffs.items() if sum(e) < order}
        for e, c in other.coeffs.items():
            if sum(e) >= order:
                continue
            s = table.get(e)
            if s is None:
                table[e] = c
            else:
                s = s + c
                if s:
                    table[e] = s
                else:
                    del table[e]
        out = TruncatedSeries(self.nvars, order, self.field)
        out.coeffs = table
        return out

    def __neg__(self):
        out = TruncatedSeries(self.nvars, self.order, self.field)
        out.coeffs = {e: -c for e, c in self.coeffs.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, value):
        value = scalars.promote(value, self.field)
        out = TruncatedSeries(self.nvars, self.order, self.field)
        if value:
            out.coeffs = {e: c * value for e, c in self.coeffs.items()}
        return out

    def __mul__(self, other):
        self._check_compatible(other)
        order = min(self.order, other.order)
        # iterate the second factor by ascending degree so deep truncated
        # tails are skipped early
        bitems = sorted(
            ((sum(e), e, c) for e, c in other.coeffs.items()), key=lambda t: t[0]
        )
        table = {}
        for ea, ca in self.coeffs.items():
            da = sum(ea)
            if da >= order:
                continue
            limit = order - da
            for db, eb, cb in bitems:
                if db >= limit:
                    break
                key = tuple(map(sum, zip(ea, eb)))
                prod = ca * cb
                s = table.get(key)
                table[key] = prod if s is None else s + prod
        out = TruncatedSeries(self.nvars, order, self.field)
        out.coeffs = {e: c for e, c in table.items() if c}
        return out

    def pow(self, k):
        """k-th power by repeated squaring (k >= 0)."""
        if k < 0:
            raise ValueError("negative power of a truncated series")
        result = TruncatedSeries.constant(1, self.nvars, self.order, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base_needed = k >> 1
            if base_needed:
                base = base * base
            k = base_needed
        return result

    def derivative(self, var=0):
        """Partial derivative; the order drops by one."""
        if not 0 <= var < self.nvars:
            raise VariableMismatch(f"no variable {var} in {self.nvars}-variable series")
        if self.order < 2:
            raise OrderExceeded("cannot differentiate an order-1 series")
        table = {}
        for e, c in self.coeffs.items():
            if e[var]:
                key = e[:var] + (e[var] - 1,) + e[var + 1:]
                table[key] = c * e[var]
        out = TruncatedSeries(self.nvars, self.order - 1, self.field)
        out.coeffs = table
        return out

    def truncate(self, order):
        if order > self.order:
            raise OrderExceeded(f"cannot extend order {self.order} to {order}")
        return TruncatedSeries(self.nvars, order, self.field, self.coeffs)

    def map_field(self, field):
        """Re-tag the coefficient field (RAT -> GAUSS, or back if real)."""
        return TruncatedSeries(
            self.nvars, self.order, field,
            {e: scalars.promote(c, field) for e, c in self.coeffs.items()},
        )

    # -- argument transformations -------------------------------------

    def negate_argument(self):
        """Substitute u -> -u: flips the sign of odd-degree coefficients."""
        out = TruncatedSeries(self.nvars, self.order, self.field)
        out.coeffs = {
            e: (c if sum(e) % 2 == 0 else -c) for e, c in self.coeffs.items()
        }
        return out

    def conjugate_coefficients(self):
        out = TruncatedSeries(self.nvars, self.order, self.field)
        out.coeffs = {e: scalars.conj(c) for e, c in self.coeffs.items()}
        return out

    def block_sum_substitute(self, order=None):
        """Evaluate at (u+v): a series in k vars becomes one in 2k vars.

        Variables are laid out as (u_1..u_k, v_1..v_k).  `order` defaults
        to the series' own order and may not exceed it.
        """
        if order is None:
            order = self.order
        if order > self.order:
            raise OrderExceeded(f"order {order} > series order {self.order}")
        k = self.nvars
        table = {}
        for exps, c in self.coeffs.items():
            if sum(exps) >= order:
                continue
            # expand prod_j (u_j + v_j)^{e_j} by the binomial theorem
            parts = [((), 1)]
            for e in exps:
                parts = [
                    (pref + (a,), mult * comb(e, a))
                    for pref, mult in parts
                    for a in range(e + 1)
                ]
            for pref, mult in parts:
                key = pref + tuple(e - a for e, a in zip(exps, pref))
                prod = c * mult
                s = table.get(key)
                table[key] = prod if s is None else s + prod
        out = TruncatedSeries(2 * k, order, self.field)
        out.coeffs = {e: c for e, c in table.items() if c}
        return out

    def set_block_to_zero(self, block):
        """Restrict a 2k-variable series to v=0 (block=1) or u=0 (block=0)."""
        if self.nvars % 2:
            raise VariableMismatch("series does not have an even variable split")
        k = self.nvars // 2
        table = {}
        for e, c in self.coeffs.items():
            u, v = e[:k], e[k:]
            if block == 1 and any(v):
                continue
            if block == 0 and any(u):
                continue
            table[u if block == 1 else v] = c
        out = TruncatedSeries(k, self.order, self.field)
        out.coeffs = table
        return out

    def substitute(self, args):
        """Compose: evaluate this series at `args` (one series per variable).

        Every argument must have zero constant term so the composition is
        well defined on truncated data.  The result order is the minimum of
        this order and the argument orders.
        """
        if len(args) != self.nvars:
            raise VariableMismatch(f"expected {self.nvars} arguments, got {len(args)}")
        if self.nvars == 0:
            raise VariableMismatch("cannot substitute into a 0-variable series")
        order = min([self.order] + [a.order for a in args])
        m = args[0].nvars
        for a in args:
            if a.nvars != m:
                raise VariableMismatch("substitution arguments disagree on arity")
            if a.field != self.field:
                raise FieldMismatch("substitution arguments disagree on field")
            if a.constant_term():
                raise ValueError("substitution argument has nonzero constant term")
        pows = [
            {0: TruncatedSeries.constant(1, m, order, self.field)} for _ in args
        ]

        def power(j, e):
            cache = pows[j]
            if e not in cache:
                best = max(k for k in cache if k <= e)
                cur = cache[best]
                for k in range(best + 1, e + 1):
                    cur = cur * args[j].truncate(order)
                    cache[k] = cur
            return cache[e]

        acc = TruncatedSeries.zero(m, order, self.field)
        for exps, c in sorted(self.coeffs.items(), key=lambda kv: grlex_key(kv[0])):
            if sum(exps) >= order:
                continue
            term = TruncatedSeries.constant(c, m, order, self.field)
            for j, e in enumerate(exps):
                if e:
                    term = term * power(j, e)
            acc = acc + term
        return acc

    # -- serialization ------------------------------------------------

    def to_json(self):
        return {
            "nvars": self.nvars,
            "order": self.order,
            "field": self.field,
            "coeffs": [
                [list(e), scalars.scalar_to_json(c)]
                for e, c in sorted(self.coeffs.items(), key=lambda kv: grlex_key(kv[0]))
            ],
        }

    @classmethod
    def from_json(cls, obj):
        field = obj.get("field", RAT)
        coeffs = [
            (tuple(e), scalars.scalar_from_json(c, field)) for e, c in obj["coeffs"]
        ]
        return cls(obj["nvars"], obj["order"], field, coeffs)


def series_arith(a, b, op):
    """Dispatch helper for the wire-level ring operations."""
    if op == "ADD":
        return a + b
    if op == "MUL":
        return a * b
    if isinstance(op, str) and op.startswith("POW_"):
        return a.pow(int(op[4:]))
    raise ValueError(f"unknown series operation {op!r}")


class GermMap:
    """n series in n variables: the Taylor germ of a map at a base point."""

    def __init__(self, components, field=None, provenance=""):
        components = list(components)
        if not components:
            raise ValueError("germ map needs at least one component")
        n = len(components)
        order = components[0].order
        field = field or components[0].field
        for s in components:
            if s.nvars != n:
                raise VariableMismatch(
                    f"component in {s.nvars} variables inside a {n}-dimensional germ"
                )
            if s.order != order:
                raise OrderExceeded("germ components must share a common order")
            if s.field != field:
                raise FieldMismatch("germ components must share the coefficient field")
        self.components = components
        self.dim = n
        self.order = order
        self.field = field
        self.provenance = provenance

    def linear_part(self):
        """The n x n matrix of degree-1 coefficients (rows = components)."""
        n = self.dim
        rows = []
        for s in self.components:
            row = []
            for j in range(n):
                exps = tuple(1 if t == j else 0 for t in range(n))
                row.append(s.coeffs.get(exps, scalars.zero(self.field)))
            rows.append(row)
        return rows

    def conjugation_fixed(self):
        """True iff every coefficient is fixed by complex conjugation."""
        return all(
            scalars.is_real(c) for s in self.components for c in s.coeffs.values()
        )

    def truncate(self, order):
        return GermMap(
            [s.truncate(order) for s in self.components],
            field=self.field,
            provenance=self.provenance,
        )

    def constant_terms(self):
        return [s.constant_term() for s in self.components]

    def to_json(self):
        return {
            "dim": self.dim,
            "order": self.order,
            "field": self.field,
            "provenance": self.provenance,
            "components": [s.to_json() for s in self.components],
        }

    @classmethod
    def from_json(cls, obj):
        comps = [TruncatedSeries.from_json(c) for c in obj["components"]]
        return cls(comps, field=obj.get("field"), provenance=obj.get("provenance", ""))


def invert_germ(m: GermMap) -> GermMap:
    """Exact compositional inverse of a germ with invertible linear part.

    The germ must have zero constant terms.  Returns psi with
    m(psi(x)) = x modulo the germ's order, computed by the contraction
    psi <- L^{-1}(x - h(psi)) where h is the degree >= 2 part of m.
    """
    from . import linalg

    n = m.dim
    order = m.order
    field = m.field
    if any(m.constant_terms()):
        raise ValueError("germ inversion requires zero constant terms")
    lin = m.linear_part()
    lin_inv = linalg.inverse(lin, field)
    if lin_inv is None:
        raise ValueError("germ has singular linear part; not invertible")

    def lin_apply(matrix, vec):
        out = []
        for i in range(n):
            acc = TruncatedSeries.zero(vec[0].nvars, order, field)
            for j in range(n):
                if matrix[i][j]:
                    acc = acc + vec[j].scale(matrix[i][j])
            out.append(acc)
        return out

    xs = [TruncatedSeries.variable(j, n, order, field) for j in range(n)]
    high = []
    for s in m.components:
        tail = TruncatedSeries(n, order, field,
                               {e: c for e, c in s.coeffs.items() if sum(e) >= 2})
        high.append(tail)
    psi = lin_apply(lin_inv, xs)
    for _ in range(order):
        h_at = [t.substitute(psi) for t in high]
        psi = lin_apply(lin_inv, [xs[i] - h_at[i] for i in range(n)])
    return GermMap(psi, field=field, provenance=f"inverse of ({m.provenance})")
