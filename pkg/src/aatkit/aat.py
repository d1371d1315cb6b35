"""Germ-level certification of abelian locally Nash structure properties.

Certifies the algebraic addition theorem for a germ map, the invertible
linear part condition, promotion of real germs to complex ones, rational
addition systems, and isomorphism witnesses.  All verdicts carry their
search budgets; absence of a witness within budget is reported as
UNRESOLVED, never as disproof.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import linalg, scalars
from .algdep import (
    Annihilator,
    DependenceVerdict,
    ResidualReport,
    evaluate_poly,
    find_annihilator,
    independence_verdict,
    verify_annihilator,
)
from .errors import DenominatorNotUnit, SingularAlpha, VariableMismatch
from .series import GermMap, TruncatedSeries, invert_germ

PASS = "PASS"
FAIL = "FAIL"
UNRESOLVED = "UNRESOLVED"


def embed_block(s: TruncatedSeries, block: int, nblocks: int = 2) -> TruncatedSeries:
    """View a k-variable series as one in nblocks*k variables (block slot)."""
    k = s.nvars
    zeros_before = (0,) * (k * block)
    zeros_after = (0,) * (k * (nblocks - block - 1))
    table = {zeros_before + e + zeros_after: c for e, c in s.coeffs.items()}
    out = TruncatedSeries(nblocks * k, s.order, s.field)
    out.coeffs = table
    return out


@dataclass
class AatCertificate:
    """Full evidence for (or against) an algebraic addition theorem."""

    germ: GermMap
    component_verdicts: list
    independence: DependenceVerdict
    degree_bound: int
    order: int
    status: str

    def annihilators(self):
        return [v.annihilator for v in self.component_verdicts if v.annihilator]

    def to_json(self):
        return {
            "kind": "aat_certificate",
            "status": self.status,
            "degree_bound": self.degree_bound,
            "order": self.order,
            "germ": self.germ.to_json(),
            "component_verdicts": [v.to_json() for v in self.component_verdicts],
            "independence": self.independence.to_json(),
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            germ=GermMap.from_json(obj["germ"]),
            component_verdicts=[
                DependenceVerdict.from_json(v) for v in obj["component_verdicts"]
            ],
            independence=DependenceVerdict.from_json(obj["independence"]),
            degree_bound=obj["degree_bound"],
            order=obj["order"],
            status=obj["status"],
        )


def _aat_names(n):
    us = [f"x{i + 1}" for i in range(n)]
    vs = [f"y{i + 1}" for i in range(n)]
    return us + vs + ["z"]


def check_aat(m: GermMap, degree_bound: int, order: int) -> AatCertificate:
    """Certify that each component of m(u+v) is algebraic over the field
    generated by the components at u and at v, and that the components
    themselves admit no relation up to the budgets."""
    n = m.dim
    basis = [embed_block(s, 0) for s in m.components] + [
        embed_block(s, 1) for s in m.components
    ]
    names = _aat_names(n)
    verdicts = []
    for s in m.components:
        target = s.block_sum_substitute()
        verdicts.append(
            find_annihilator(target, basis, degree_bound, order, names=names)
        )
    indep = independence_verdict(m.components, degree_bound, order)
    if indep.dependent:
        status = FAIL
    elif all(v.dependent for v in verdicts):
        status = PASS
    else:
        status = UNRESOLVED
    return AatCertificate(
        germ=m,
        component_verdicts=verdicts,
        independence=indep,
        degree_bound=degree_bound,
        order=order,
        status=status,
    )


def check_condition_star(m: GermMap) -> dict:
    """Invertible linear part: the germ witness for being a local
    diffeomorphism after a suitable base shift."""
    d = linalg.det(m.linear_part(), m.field)
    ok = bool(d)
    return {
        "kind": "condition_star",
        "status": PASS if ok else FAIL,
        "determinant": scalars.scalar_to_json(d),
    }


def promote_real_to_complex(m: GermMap) -> dict:
    """A conjugation-fixed germ with invertible linear part also defines a
    structure over the complex field."""
    fixed = m.conjugation_fixed()
    star = check_condition_star(m)
    ok = fixed and star["status"] == PASS
    return {
        "kind": "real_to_complex_promotion",
        "status": PASS if ok else FAIL,
        "conjugation_fixed": fixed,
        "condition_star": star["status"],
    }


# -- rational addition systems ----------------------------------------


@dataclass
class RationalAdditionSystem:
    """Components psi_0..psi_m-1 with rational addition and negation rules.

    `addition[i]` is a (numerator, denominator) pair of sparse polynomials
    in 2m variables (psi at u, then psi at v); `negation[i]` a pair in m
    variables; `relation`, if given, is a polynomial in m variables that
    the components satisfy identically.
    """

    psi: list
    addition: list
    negation: list
    relation: Optional[dict] = None
    names: Optional[list] = None

    def __post_init__(self):
        m = len(self.psi)
        if len(self.addition) != m or len(self.negation) != m:
            raise VariableMismatch("one addition and negation rule per component")
        if self.names is None:
            self.names = [f"psi{i}" for i in range(m)]

    def _poly_json(self, terms):
        from .series import grlex_key
        return [
            [list(e), scalars.scalar_to_json(c)]
            for e, c in sorted(terms.items(), key=lambda kv: grlex_key(kv[0]))
        ]

    def to_json(self):
        obj = {
            "kind": "rational_addition_system",
            "names": self.names,
            "components": [s.to_json() for s in self.psi],
            "addition": [
                {"num": self._poly_json(n), "den": self._poly_json(d)}
                for n, d in self.addition
            ],
            "negation": [
                {"num": self._poly_json(n), "den": self._poly_json(d)}
                for n, d in self.negation
            ],
        }
        if self.relation is not None:
            obj["relation"] = self._poly_json(self.relation)
        return obj

    @classmethod
    def from_json(cls, obj):
        comps = [TruncatedSeries.from_json(c) for c in obj["components"]]
        f = comps[0].field

        def poly(items):
            return {tuple(e): scalars.scalar_from_json(c, f) for e, c in items}

        return cls(
            psi=comps,
            addition=[(poly(p["num"]), poly(p["den"])) for p in obj["addition"]],
            negation=[(poly(p["num"]), poly(p["den"])) for p in obj["negation"]],
            relation=poly(obj["relation"]) if "relation" in obj else None,
            names=obj.get("names"),
        )


@dataclass
class SystemReport:
    checks: list  # (label, ResidualReport)

    @property
    def clean(self):
        return all(r.clean for _, r in self.checks)

    @property
    def order(self):
        return min(r.order for _, r in self.checks) if self.checks else 0

    def first_failure(self):
        for label, r in self.checks:
            if not r.clean:
                return label, r
        return None

    def to_json(self):
        return {
            "kind": "system_report",
            "clean": self.clean,
            "checks": [
                {"label": label, **r.to_json()} for label, r in self.checks
            ],
        }


def verify_rational_system(sys: RationalAdditionSystem, order: int) -> SystemReport:
    """Check every addition rule, negation rule and the optional relation
    coefficientwise to the requested order."""
    m = len(sys.psi)
    psi_u = [embed_block(s, 0) for s in sys.psi]
    psi_v = [embed_block(s, 1) for s in sys.psi]
    two_block = psi_u + psi_v
    checks = []
    for i, (num, den) in enumerate(sys.addition):
        den_eval = evaluate_poly(den, two_block, order)
        if not den_eval.constant_term():
            raise DenominatorNotUnit(
                f"addition denominator {i} vanishes at the base point"
            )
        lhs = sys.psi[i].block_sum_substitute(min(order, sys.psi[i].order))
        num_eval = evaluate_poly(num, two_block, order)
        residual = lhs * den_eval - num_eval
        checks.append((f"addition[{i}]", _residual_report(residual)))
    for i, (num, den) in enumerate(sys.negation):
        den_eval = evaluate_poly(den, sys.psi, order)
        if not den_eval.constant_term():
            raise DenominatorNotUnit(
                f"negation denominator {i} vanishes at the base point"
            )
        lhs = sys.psi[i].negate_argument()
        num_eval = evaluate_poly(num, sys.psi, order)
        residual = lhs * den_eval - num_eval
        checks.append((f"negation[{i}]", _residual_report(residual)))
    if sys.relation is not None:
        residual = evaluate_poly(sys.relation, sys.psi, order)
        checks.append(("relation", _residual_report(residual)))
    return SystemReport(checks=checks)


def _residual_report(residual: TruncatedSeries) -> ResidualReport:
    if not residual:
        return ResidualReport(clean=True, order=residual.order)
    exps, c = residual.first_nonzero()
    return ResidualReport(
        clean=False, order=residual.order, residual_index=exps, residual_value=c
    )


def rational_system_annihilators(sys: RationalAdditionSystem, order: int):
    """Turn CLEAN addition rules into annihilators z*den - num.

    This realizes the containment: a verified rational system is stronger
    than a bare addition-theorem certificate on the same data.
    """
    report = verify_rational_system(sys, order)
    if not report.clean:
        raise ValueError(f"system does not verify: {report.first_failure()}")
    m = len(sys.psi)
    anns = []
    for i, (num, den) in enumerate(sys.addition):
        terms = {}
        for e, c in den.items():
            terms[tuple(e) + (1,)] = c
        for e, c in num.items():
            key = tuple(e) + (0,)
            terms[key] = terms.get(key, scalars.zero(sys.psi[i].field)) - c
            if not terms[key]:
                del terms[key]
        degree = max(sum(e) for e in terms)
        anns.append(
            Annihilator(
                variables=[f"{nm}(u)" for nm in sys.names]
                + [f"{nm}(v)" for nm in sys.names]
                + [f"{sys.names[i]}(u+v)"],
                terms=terms,
                degree=degree,
                order=order,
                field=sys.psi[i].field,
            )
        )
    return anns


# -- isomorphism witnesses --------------------------------------------


@dataclass
class WitnessVerdict:
    status: str
    alpha: list
    degree_bound: int
    order: int
    component_verdicts: list

    def to_json(self):
        return {
            "kind": "isomorphism_witness",
            "status": self.status,
            "alpha": [[scalars.scalar_to_json(c) for c in row] for row in self.alpha],
            "degree_bound": self.degree_bound,
            "order": self.order,
            "component_verdicts": [v.to_json() for v in self.component_verdicts],
        }


def compose_linear(m: GermMap, alpha) -> GermMap:
    """The germ of u -> m(alpha u) for an exact invertible matrix alpha."""
    n = m.dim
    if len(alpha) != n or any(len(row) != n for row in alpha):
        raise VariableMismatch("alpha must be n x n")
    if not linalg.det(alpha, m.field):
        raise SingularAlpha("alpha is singular")
    args = []
    for i in range(n):
        s = TruncatedSeries.zero(n, m.order, m.field)
        for j in range(n):
            if alpha[i][j]:
                s = s + TruncatedSeries.variable(j, n, m.order, m.field).scale(
                    alpha[i][j]
                )
        args.append(s)
    comps = [c.substitute(args) for c in m.components]
    return GermMap(comps, field=m.field, provenance=f"({m.provenance}) o alpha")


def isomorphism_witness_check(
    f: GermMap, g: GermMap, alpha, degree_bound: int, order: int
) -> WitnessVerdict:
    """Check that every component of g(alpha u) is algebraic over the field
    generated by the components of f."""
    if f.dim != g.dim:
        raise VariableMismatch("germ dimensions differ")
    g_alpha = compose_linear(g, alpha)
    names = [f"x{i + 1}" for i in range(f.dim)] + ["z"]
    verdicts = [
        find_annihilator(comp, f.components, degree_bound, order, names=names)
        for comp in g_alpha.components
    ]
    status = PASS if all(v.dependent for v in verdicts) else UNRESOLVED
    return WitnessVerdict(
        status=status,
        alpha=[list(row) for row in alpha],
        degree_bound=degree_bound,
        order=order,
        component_verdicts=verdicts,
    )


# -- group law round trip ---------------------------------------------


def group_law_germ(m: GermMap) -> list:
    """The series of (x, y) -> m(m^{-1}(x) + m^{-1}(y)), recentred so both
    chart variables measure offsets from the base-point image.

    Requires an invertible linear part.  Returns 2n-variable series, one
    per coordinate of the composed map.
    """
    n = m.dim
    consts = m.constant_terms()
    centered = GermMap(
        [
            s - TruncatedSeries.constant(c, n, s.order, s.field)
            for s, c in zip(m.components, consts)
        ],
        field=m.field,
    )
    inv = invert_germ(centered)
    inv_x = [embed_block(s, 0) for s in inv.components]
    inv_y = [embed_block(s, 1) for s in inv.components]
    summed = [inv_x[i] + inv_y[i] for i in range(n)]
    return [s.substitute(summed) for s in m.components]
