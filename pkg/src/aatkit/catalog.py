"""Registry of the concrete one-dimensional structures and their products.

Each entry packages an ODE-generated germ, its declared period group over
a shared symbol table, optional companion data (an extended component with
a rational addition system), and search budgets for its addition-theorem
certificate.  High-precision numeric checks cross-validate the declared
periods against the analytic functions themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

import mpmath
from gmpy2 import mpq

from . import aat, numeric, odegen
from .algdep import find_annihilator, independence_verdict
from .errors import InputError
from .lattice import PeriodGroup, PeriodVector, SymbolTable
from .scalars import GaussianRational as _G
from .scalars import RAT
from .series import GermMap, TruncatedSeries

# 55-digit references: pi, and the real/imaginary parts of the primitive
# period A*exp(i*pi/6) of the lattice with invariants g2 = 0, g3 = -4
# (A = 2^(2/3) Gamma(1/3)^3 / (4 pi); the second generator is 2i*wim).
PI_DECIMAL = "3.141592653589793238462643383279502884197169399375105821"
WRE_DECIMAL = "2.103273157988181391762528618575441203194533308135979144"
WIM_DECIMAL = "1.214325323943790805909970844890465624277517422437454637"

CATALOG_SYMBOLS = SymbolTable(
    names=("pi", "wre", "wim"),
    approximations=(
        ("pi", PI_DECIMAL),
        ("wre", WRE_DECIMAL),
        ("wim", WIM_DECIMAL),
    ),
)

WEIERSTRASS_NAME = "weierstrass_g2_0_g3_m4"


def embed_vars(s: TruncatedSeries, nvars: int, position: int) -> TruncatedSeries:
    """View a 1-variable series as an nvars-variable series in slot
    `position`."""
    table = {
        (0,) * position + e + (0,) * (nvars - position - 1): c
        for e, c in s.coeffs.items()
    }
    out = TruncatedSeries(nvars, s.order, s.field)
    out.coeffs = table
    return out


@dataclass
class GroupDescriptor:
    """One catalog entry: germ recipe, periods, companions, budgets."""

    name: str
    dim: int
    ode_specs: list                      # one OdeSpec per component
    period_group: PeriodGroup
    degree_bound: int
    order: int
    field: str = RAT
    companion_spec: Optional[odegen.OdeSpec] = None
    rational_system_builder: Optional[object] = None
    _certificate: Optional[aat.AatCertificate] = dc_field(
        default=None, repr=False, compare=False
    )

    def germ(self, order: Optional[int] = None) -> GermMap:
        order = order if order is not None else self.order + 8
        comps = [
            embed_vars(odegen.generate_series(spec, order), self.dim, i)
            for i, spec in enumerate(self.ode_specs)
        ]
        return GermMap(comps, provenance=self.name)

    def rational_system(self, order=None):
        if self.rational_system_builder is None:
            return None
        return self.rational_system_builder(order or self.order + 4)

    def certificate(self) -> aat.AatCertificate:
        """The addition-theorem certificate at the stored budgets (cached)."""
        if self._certificate is None:
            if self.dim == 1:
                self._certificate = aat.check_aat(
                    self.germ(), self.degree_bound, self.order
                )
            else:
                self._certificate = _product_certificate(self)
        return self._certificate

    def to_json(self):
        obj = {
            "kind": "group_descriptor",
            "name": self.name,
            "dim": self.dim,
            "field": self.field,
            "degree_bound": self.degree_bound,
            "order": self.order,
            "ode_specs": [s.to_json() for s in self.ode_specs],
            "period_group": self.period_group.to_json(),
        }
        if self.companion_spec is not None:
            obj["companion_spec"] = self.companion_spec.to_json()
        return obj


def _product_certificate(desc: GroupDescriptor) -> aat.AatCertificate:
    """Certificate for a product of one-dimensional entries.

    Each component has an addition theorem in its own coordinate alone, so
    the annihilator is searched factor-by-factor (a 3-variable kernel
    problem) and then re-verified by direct substitution against the full
    product basis — the same acceptance bar as the blind joint search, at
    a fraction of its cost.
    """
    n = desc.dim
    order = desc.order
    germ = desc.germ()
    names = [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)] + ["z"]
    basis = [aat.embed_block(s, 0) for s in germ.components] + [
        aat.embed_block(s, 1) for s in germ.components
    ]
    verdicts = []
    for i, spec in enumerate(desc.ode_specs):
        factor = odegen.generate_series(spec, order + 8)
        verdict = find_annihilator(
            factor.block_sum_substitute(),
            [aat.embed_block(factor, 0), aat.embed_block(factor, 1)],
            desc.degree_bound,
            order,
            names=[f"x{i + 1}", f"y{i + 1}", "z"],
        )
        if verdict.dependent:
            ann = verdict.annihilator
            # re-express the 3-variable annihilator over the product basis
            terms = {}
            for (a, b, c), coeff in ann.terms.items():
                exps = [0] * (2 * n + 1)
                exps[i], exps[n + i], exps[2 * n] = a, b, c
                terms[tuple(exps)] = coeff
            ann.terms = terms
            ann.variables = list(names)
            target = germ.components[i].block_sum_substitute()
            from .algdep import verify_annihilator

            report = verify_annihilator(ann, basis + [target], ann.order)
            if not report.clean:
                raise AssertionError(
                    f"embedded product annihilator dirty: {report.status}"
                )
            ann.residual_status = report.status
        verdicts.append(verdict)
    indep = independence_verdict(germ.components, desc.degree_bound, order)
    if indep.dependent:
        status = aat.FAIL
    elif all(v.dependent for v in verdicts):
        status = aat.PASS
    else:
        status = aat.UNRESOLVED
    return aat.AatCertificate(
        germ=germ,
        component_verdicts=verdicts,
        independence=indep,
        degree_bound=desc.degree_bound,
        order=order,
        status=status,
    )


# -- companion rational systems ---------------------------------------


def _exp_system(order):
    e = odegen.generate_series(odegen.OdeSpec(kind=odegen.EXP), order)
    one = mpq(1)
    return aat.RationalAdditionSystem(
        psi=[e],
        addition=[({(1, 1): one}, {(0, 0): one})],
        negation=[({(0,): one}, {(1,): one})],
        names=["exp"],
    )


def _sin_cos_system(order):
    s = odegen.generate_series(odegen.OdeSpec(kind=odegen.SIN), order)
    c = odegen.generate_series(odegen.OdeSpec(kind=odegen.COS), order)
    one = mpq(1)
    return aat.RationalAdditionSystem(
        psi=[c, s],
        addition=[
            # cos(u+v) = cos u cos v - sin u sin v
            ({(1, 0, 1, 0): one, (0, 1, 0, 1): -one}, {(0, 0, 0, 0): one}),
            # sin(u+v) = sin u cos v + cos u sin v
            ({(0, 1, 1, 0): one, (1, 0, 0, 1): one}, {(0, 0, 0, 0): one}),
        ],
        negation=[
            ({(1, 0): one}, {(0, 0): one}),
            ({(0, 1): -one}, {(0, 0): one}),
        ],
        relation={(2, 0): one, (0, 2): one, (0, 0): -one},
        names=["cos", "sin"],
    )


# -- the registry ------------------------------------------------------


def _vec(*coords):
    return PeriodVector(CATALOG_SYMBOLS, list(coords))


def _group(dim, *vectors):
    return PeriodGroup(CATALOG_SYMBOLS, dim, list(vectors))


def builtin_catalog():
    """The deterministic list of registered structures."""
    identity_spec = odegen.OdeSpec(kind=odegen.CUSTOM, rhs=(), y0=0, y1=1)
    exp_spec = odegen.OdeSpec(kind=odegen.EXP)
    sin_spec = odegen.OdeSpec(kind=odegen.SIN)
    cos_spec = odegen.OdeSpec(kind=odegen.COS)
    wp_spec = odegen.OdeSpec(
        kind=odegen.WEIERSTRASS_P, g2=0, g3=-4, p0=0, p1=2
    )
    wp_prime_spec = odegen.OdeSpec(
        kind=odegen.WEIERSTRASS_P_PRIME, g2=0, g3=-4, p0=0, p1=2
    )
    two_pi_i = _vec({"pi": _G(0, 2)})
    two_pi = _vec({"pi": _G(2)})
    w1 = _vec({"wre": _G(1), "wim": _G(0, 1)})
    w2 = _vec({"wim": _G(0, 2)})
    return [
        GroupDescriptor(
            name="identity",
            dim=1,
            ode_specs=[identity_spec],
            period_group=_group(1),
            degree_bound=2,
            order=10,
        ),
        GroupDescriptor(
            name="exp",
            dim=1,
            ode_specs=[exp_spec],
            period_group=_group(1, two_pi_i),
            degree_bound=2,
            order=10,
            rational_system_builder=_exp_system,
        ),
        GroupDescriptor(
            name="sin",
            dim=1,
            ode_specs=[sin_spec],
            period_group=_group(1, two_pi),
            degree_bound=6,
            order=16,
            companion_spec=cos_spec,
            rational_system_builder=_sin_cos_system,
        ),
        GroupDescriptor(
            name=WEIERSTRASS_NAME,
            dim=1,
            ode_specs=[wp_spec],
            period_group=_group(1, w1, w2),
            degree_bound=12,
            order=48,
            companion_spec=wp_prime_spec,
        ),
        GroupDescriptor(
            name="exp_x_sin",
            dim=2,
            ode_specs=[exp_spec, sin_spec],
            period_group=_group(
                2,
                PeriodVector(CATALOG_SYMBOLS, [{"pi": _G(0, 2)}, {}]),
                PeriodVector(CATALOG_SYMBOLS, [{}, {"pi": _G(2)}]),
            ),
            degree_bound=6,
            order=16,
        ),
        GroupDescriptor(
            name="sin_x_" + WEIERSTRASS_NAME,
            dim=2,
            ode_specs=[sin_spec, wp_spec],
            period_group=_group(
                2,
                PeriodVector(CATALOG_SYMBOLS, [{"pi": _G(2)}, {}]),
                PeriodVector(CATALOG_SYMBOLS, [{}, {"wre": _G(1), "wim": _G(0, 1)}]),
                PeriodVector(CATALOG_SYMBOLS, [{}, {"wim": _G(0, 2)}]),
            ),
            degree_bound=12,
            order=48,
        ),
    ]


def get_descriptor(name: str) -> GroupDescriptor:
    for d in builtin_catalog():
        if d.name == name:
            return d
    raise InputError(f"no catalog entry named {name!r}")


def catalog_manifest():
    return {
        "kind": "catalog_manifest",
        "entries": [d.to_json() for d in builtin_catalog()],
    }


def rank_report(descriptors) -> dict:
    """Tabulate period-group ranks and all pairwise comparison verdicts."""
    from .lattice import compare_rank_invariant

    rows = [
        {"name": d.name, "rank": d.period_group.zrank()} for d in descriptors
    ]
    pairs = []
    for i, a in enumerate(descriptors):
        for b in descriptors[i + 1:]:
            cmp = compare_rank_invariant(a.period_group, b.period_group)
            entry = {
                "left": a.name,
                "right": b.name,
                "verdict": cmp["verdict"],
                "rank_left": cmp["rank_left"],
                "rank_right": cmp["rank_right"],
            }
            if cmp["verdict"] == "EQUAL":
                entry["note"] = "rank does not separate"
            pairs.append(entry)
    return {"kind": "rank_report", "entries": rows, "pairs": pairs}


# -- numeric period validation ----------------------------------------

_GOLDEN_ANGLE = "2.399963229728653"


def _sample_points(count, digits):
    """Deterministic complex sample points in a pole-safe disc."""
    with mpmath.workdps(digits + 10):
        theta0 = mpmath.mpf(_GOLDEN_ANGLE)
        pts = []
        for j in range(count):
            r = mpmath.mpf("0.15") + mpmath.mpf("0.35") * j / max(1, count - 1)
            pts.append(mpmath.mpc(mpmath.cos(theta0 * j), mpmath.sin(theta0 * j)) * r)
        return pts


def numeric_period_check(desc: GroupDescriptor, precision_digits: int,
                         sample_count: int) -> dict:
    """Cross-check the declared generators against the analytic components.

    Reports the maximum over samples u and generators lam of
    |f(u + lam) - f(u)|, componentwise; PASS below 10^(-digits/2).
    """
    digits = precision_digits
    tolerance = mpmath.mpf(10) ** (-mpmath.mpf(digits) / 2)
    samples = _sample_points(sample_count, digits)
    gen_values = [
        numeric.vector_value(g, digits) for g in desc.period_group.generators
    ]
    max_residual = mpmath.mpf(0)
    cache = {}

    def ev(i, z):
        key = (i, str(z))
        if key not in cache:
            cache[key] = numeric.evaluate(desc.ode_specs[i], z, digits)
        return cache[key]

    with mpmath.workdps(digits + 10):
        for u in samples:
            for lam in gen_values:
                for i in range(desc.dim):
                    if not lam[i] and desc.dim > 1:
                        continue
                    res = abs(ev(i, u + lam[i]) - ev(i, u))
                    max_residual = max(max_residual, res)
        status = "PASS" if max_residual < tolerance else "FAIL"
        return {
            "kind": "numeric_period_check",
            "name": desc.name,
            "digits": digits,
            "samples": sample_count,
            "generators": len(gen_values),
            "max_residual": mpmath.nstr(max_residual, 8),
            "tolerance": mpmath.nstr(tolerance, 8),
            "status": status,
        }
