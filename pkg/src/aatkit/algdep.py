"""Algebraic-dependence search over truncated series.

Builds the linear system whose unknowns are polynomial coefficients up to
a total-degree bound and whose equations force the substituted polynomial
to vanish coefficientwise up to a stated order, then extracts the canonical
kernel vector by exact fraction-free elimination.  Every positive verdict
is re-verified by direct substitution before it is returned.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

from . import linalg, scalars
from .errors import ArityMismatch, BudgetExceeded, OrderTooLow, VariableMismatch
from .series import TruncatedSeries, grlex_key, monomials_upto

DEFAULT_MAX_MONOMIALS = 4000

DEPENDENT = "DEPENDENT"
INDEPENDENT_UP_TO = "INDEPENDENT_UP_TO"


def _monomial_cap():
    value = os.environ.get("AATKIT_MAX_MONOMIALS")
    return int(value) if value else DEFAULT_MAX_MONOMIALS


@dataclass
class ResidualReport:
    """Outcome of re-checking an annihilator by substitution."""

    clean: bool
    order: int
    residual_index: Optional[tuple] = None
    residual_value: Optional[object] = None

    @property
    def status(self):
        if self.clean:
            return f"CLEAN({self.order})"
        return f"RESIDUAL(at {self.residual_index}: {self.residual_value})"

    def to_json(self):
        obj = {"clean": self.clean, "order": self.order}
        if not self.clean:
            obj["residual_index"] = list(self.residual_index)
            obj["residual_value"] = scalars.scalar_to_json(self.residual_value)
        return obj


@dataclass
class Annihilator:
    """A primitive polynomial vanishing on the named series to order N."""

    variables: list
    terms: dict                 # exponent tuple -> coefficient, canonical
    degree: int                 # total degree of the polynomial
    order: int                  # order to which the identity was verified
    field: str
    residual_status: str = ""

    def __post_init__(self):
        if not self.terms:
            raise ValueError("annihilator polynomial must be nonzero")

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def to_json(self):
        return {
            "variables": list(self.variables),
            "degree": self.degree,
            "order": self.order,
            "field": self.field,
            "residual_status": self.residual_status,
            "terms": [
                [list(e), scalars.scalar_to_json(c)] for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, obj):
        f = obj["field"]
        terms = {
            tuple(e): scalars.scalar_from_json(c, f) for e, c in obj["terms"]
        }
        return cls(
            variables=list(obj["variables"]),
            terms=terms,
            degree=obj["degree"],
            order=obj["order"],
            field=f,
            residual_status=obj.get("residual_status", ""),
        )


@dataclass
class DependenceVerdict:
    outcome: str                        # DEPENDENT / INDEPENDENT_UP_TO
    degree_bound: int
    order: int
    annihilator: Optional[Annihilator] = None

    @property
    def dependent(self):
        return self.outcome == DEPENDENT

    def to_json(self):
        obj = {
            "outcome": self.outcome,
            "degree_bound": self.degree_bound,
            "order": self.order,
        }
        if self.annihilator is not None:
            obj["annihilator"] = self.annihilator.to_json()
        return obj

    @classmethod
    def from_json(cls, obj):
        ann = obj.get("annihilator")
        return cls(
            outcome=obj["outcome"],
            degree_bound=obj["degree_bound"],
            order=obj["order"],
            annihilator=Annihilator.from_json(ann) if ann else None,
        )


def evaluate_poly(terms, assignment, order):
    """Evaluate a sparse polynomial at the given series, exactly to `order`.

    Unlike series composition, arguments may have nonzero constant terms:
    the polynomial is a finite object so the evaluation stays exact.
    """
    if not assignment:
        raise ArityMismatch("empty assignment")
    nvars = assignment[0].nvars
    fieldtag = assignment[0].field
    for s in assignment:
        if s.nvars != nvars:
            raise VariableMismatch("assignment series disagree on arity")
    order = min([order] + [s.order for s in assignment])
    caches = [{0: TruncatedSeries.constant(1, nvars, order, fieldtag)} for _ in assignment]

    def power(j, e):
        cache = caches[j]
        if e not in cache:
            best = max(k for k in cache if k <= e)
            cur = cache[best]
            base = assignment[j].truncate(order)
            for k in range(best + 1, e + 1):
                cur = cur * base
                cache[k] = cur
        return cache[e]

    acc = TruncatedSeries.zero(nvars, order, fieldtag)
    for exps, c in sorted(terms.items(), key=lambda kv: grlex_key(kv[0])):
        if len(exps) != len(assignment):
            raise ArityMismatch(
                f"polynomial arity {len(exps)} != assignment {len(assignment)}"
            )
        term = TruncatedSeries.constant(c, nvars, order, fieldtag)
        for j, e in enumerate(exps):
            if e:
                term = term * power(j, e)
        acc = acc + term
    return acc


def _monomial_series(series_list, degree_bound, order, max_monomials):
    """Series of every monomial in the inputs up to the degree bound.

    Returned in ascending grlex order of the exponent tuples; computed
    incrementally (each monomial is a previous one times a single series).
    """
    m = len(series_list)
    monomials = monomials_upto(m, degree_bound)
    if len(monomials) > max_monomials:
        raise BudgetExceeded(
            f"{len(monomials)} monomials exceed the cap {max_monomials}"
        )
    nvars = series_list[0].nvars
    fieldtag = series_list[0].field
    table = {}
    for exps in monomials:
        if sum(exps) == 0:
            table[exps] = TruncatedSeries.constant(1, nvars, order, fieldtag)
            continue
        j = max(t for t in range(m) if exps[t])
        prev = exps[:j] + (exps[j] - 1,) + exps[j + 1:]
        table[exps] = table[prev] * series_list[j].truncate(order)
    return monomials, table


def find_annihilator(
    target: TruncatedSeries,
    basis,
    degree_bound: int,
    order: int,
    names=None,
    max_monomials=None,
) -> DependenceVerdict:
    """Search for a polynomial P with P(basis..., target) = 0 to `order`.

    The target is the last polynomial variable.  On success the annihilator
    is re-verified by substitution at the highest order the inputs allow,
    up to `order` + 8.
    """
    series_list = list(basis) + [target]
    return _joint_kernel(series_list, degree_bound, order, names, max_monomials)


def independence_verdict(series_list, degree_bound, order, names=None,
                         max_monomials=None) -> DependenceVerdict:
    """Search for any algebraic relation among the listed series."""
    if names is None:
        names = _default_names(len(series_list), with_target=False)
    return _joint_kernel(list(series_list), degree_bound, order, names, max_monomials)


def _default_names(count, with_target):
    if with_target:
        return [f"x{i + 1}" for i in range(count - 1)] + ["z"]
    return [f"x{i + 1}" for i in range(count)]


def _joint_kernel(series_list, degree_bound, order, names, max_monomials):
    if not series_list:
        raise ArityMismatch("need at least one series")
    if degree_bound < 1:
        raise ValueError("degree bound must be >= 1")
    if order <= degree_bound:
        raise OrderTooLow(f"order {order} must exceed degree bound {degree_bound}")
    nvars = series_list[0].nvars
    fieldtag = series_list[0].field
    for s in series_list:
        if s.nvars != nvars:
            raise VariableMismatch("input series disagree on arity")
        if s.order < order:
            raise OrderTooLow(
                f"series of order {s.order} cannot support a search at order {order}"
            )
    if names is None:
        names = _default_names(len(series_list), with_target=True)
    if len(names) != len(series_list):
        raise ArityMismatch("one variable name per series required")
    cap = max_monomials if max_monomials is not None else _monomial_cap()
    # the emission bar is CLEAN at order + 8 (when the inputs are deep
    # enough), so the system is assembled at that order directly: shallower
    # systems admit spurious kernel vectors that only vanish to `order`
    verify_order = min([order + 8] + [s.order for s in series_list])
    monomials, mono_series = _monomial_series(
        series_list, degree_bound, verify_order, cap
    )

    # equations: one per series-coefficient index, streamed by degree
    indices = sorted(
        {e for s in mono_series.values() for e in s.coeffs},
        key=grlex_key,
    )
    zero = scalars.zero(fieldtag)
    rows = []
    for idx in indices:
        rows.append([mono_series[mn].coeffs.get(idx, zero) for mn in monomials])
    kernel = linalg.first_kernel_vector(rows, len(monomials), fieldtag)
    if kernel is None:
        return DependenceVerdict(INDEPENDENT_UP_TO, degree_bound, verify_order)
    kernel = scalars.content_and_sign_normalize(
        [scalars.promote(c, fieldtag) for c in kernel]
    )
    terms = {
        monomials[i]: c for i, c in enumerate(kernel) if c
    }
    degree = max(sum(e) for e in terms)
    ann = Annihilator(
        variables=list(names),
        terms=terms,
        degree=degree,
        order=order,
        field=fieldtag,
    )
    report = verify_annihilator(ann, series_list, verify_order)
    if not report.clean:
        raise AssertionError(
            f"kernel vector failed re-verification: {report.status}"
        )
    ann.order = verify_order
    ann.residual_status = report.status
    return DependenceVerdict(DEPENDENT, degree_bound, order, ann)


def verify_annihilator(ann: Annihilator, assignment, order) -> ResidualReport:
    """Independent re-check: substitute and report the first residual."""
    if len(assignment) != len(ann.variables):
        raise ArityMismatch(
            f"{len(ann.variables)} variables vs {len(assignment)} series"
        )
    result = evaluate_poly(ann.terms, assignment, order)
    if not result:
        return ResidualReport(clean=True, order=result.order)
    exps, c = result.first_nonzero()
    return ResidualReport(
        clean=False, order=result.order, residual_index=exps, residual_value=c
    )
