"""Generation of the classical germs from their defining ODEs.

Each supported map is produced as the unique exact Taylor expansion at a
rational base point, driven by the coefficient recurrence of a first- or
second-order polynomial ODE.  The Weierstrass P germ is expanded at a
rational point of its curve, never at the pole.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from gmpy2 import mpq

from .errors import CurveEquationViolated, UnsupportedOde
from .series import TruncatedSeries
from .scalars import RAT

EXP = "EXP"
SIN = "SIN"
COS = "COS"
TAN = "TAN"
WEIERSTRASS_P = "WEIERSTRASS_P"
WEIERSTRASS_P_PRIME = "WEIERSTRASS_P_PRIME"
CUSTOM = "CUSTOM"

_KINDS = {EXP, SIN, COS, TAN, WEIERSTRASS_P, WEIERSTRASS_P_PRIME, CUSTOM}


@dataclass(frozen=True)
class OdeSpec:
    """Which germ to generate, with exact invariants and initial values.

    For the Weierstrass kinds, `g2`, `g3` are the curve invariants and
    (`p0`, `p1`) a rational curve point with p1^2 = 4 p0^3 - g2 p0 - g3.
    For CUSTOM, `rhs` is a sparse polynomial {(i, j): coeff} meaning
    y'' = sum coeff * y^i * (y')^j, with initial values (`y0`, `y1`).
    """

    kind: str
    g2: Optional[object] = None
    g3: Optional[object] = None
    p0: Optional[object] = None
    p1: Optional[object] = None
    rhs: Optional[tuple] = None
    y0: Optional[object] = None
    y1: Optional[object] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise UnsupportedOde(f"unknown ODE kind {self.kind!r}")

    def rhs_dict(self):
        return dict(self.rhs) if self.rhs else {}

    def to_json(self):
        obj = {"kind": self.kind}
        for name in ("g2", "g3", "p0", "p1", "y0", "y1"):
            v = getattr(self, name)
            if v is not None:
                obj[name] = str(mpq(v))
        if self.rhs:
            obj["rhs"] = [[list(e), str(mpq(c))] for e, c in self.rhs]
        return obj

    @classmethod
    def from_json(cls, obj):
        kw = {"kind": obj["kind"]}
        for name in ("g2", "g3", "p0", "p1", "y0", "y1"):
            if name in obj:
                kw[name] = mpq(obj[name])
        if "rhs" in obj:
            kw["rhs"] = tuple((tuple(e), mpq(c)) for e, c in obj["rhs"])
        return cls(**kw)


def _check_curve(spec):
    g2, g3 = mpq(spec.g2 or 0), mpq(spec.g3 or 0)
    p0, p1 = mpq(spec.p0 or 0), mpq(spec.p1 or 0)
    if p1 * p1 != 4 * p0 ** 3 - g2 * p0 - g3:
        raise CurveEquationViolated(
            f"initial point ({p0}, {p1}) is not on y^2 = 4x^3 - {g2}x - {g3}"
        )
    return g2, g3, p0, p1


def _poly_coeff_at(rhs, coeffs, dcoeffs, k):
    """[z^k] of sum rhs[(i,j)] * y^i * (y')^j given coefficient dicts."""
    total = mpq(0)
    for (i, j), c in rhs.items():
        # convolve y^i * (y')^j at degree k; the factor series are short
        powers = [coeffs] * i + [dcoeffs] * j
        if not powers:
            if k == 0:
                total += c
            continue
        # dynamic per-degree convolution of the listed factors
        acc = {0: mpq(1)}
        for f in powers:
            nxt = {}
            for d1, v1 in acc.items():
                for d2, v2 in f.items():
                    d = d1 + d2
                    if d > k:
                        continue
                    nxt[d] = nxt.get(d, mpq(0)) + v1 * v2
            acc = nxt
        if k in acc:
            total += c * acc[k]
    return total


def _second_order(rhs, y0, y1, order):
    """Taylor coefficients of y'' = rhs(y, y') with y(0)=y0, y'(0)=y1."""
    c = {0: mpq(y0), 1: mpq(y1)}
    for k in range(order - 2):
        dcoeffs = {d - 1: v * d for d, v in c.items() if d >= 1}
        ck = _poly_coeff_at(rhs, c, dcoeffs, k)
        c[k + 2] = ck / ((k + 1) * (k + 2))
    return {((d,)): v for d, v in c.items() if d < order and v}


def _first_order(rhs, y0, order):
    """Taylor coefficients of y' = rhs(y) with y(0)=y0."""
    c = {0: mpq(y0)}
    for k in range(order - 1):
        ck = _poly_coeff_at(rhs, c, {}, k)
        c[k + 1] = ck / (k + 1)
    return {((d,)): v for d, v in c.items() if d < order and v}


def generate_series(spec: OdeSpec, order: int) -> TruncatedSeries:
    """Exact Taylor expansion of the germ described by `spec`."""
    if order < 2:
        raise UnsupportedOde("need order >= 2")
    kind = spec.kind
    if kind == EXP:
        table = _first_order({(1, 0): mpq(1)}, 1, order)
    elif kind == SIN:
        table = _second_order({(1, 0): mpq(-1)}, 0, 1, order)
    elif kind == COS:
        table = _second_order({(1, 0): mpq(-1)}, 1, 0, order)
    elif kind == TAN:
        table = _first_order({(0, 0): mpq(1), (2, 0): mpq(1)}, 0, order)
    elif kind in (WEIERSTRASS_P, WEIERSTRASS_P_PRIME):
        g2, g3, p0, p1 = _check_curve(spec)
        rhs = {(2, 0): mpq(6)}
        if g2:
            rhs[(0, 0)] = -g2 / 2
        if kind == WEIERSTRASS_P:
            table = _second_order(rhs, p0, p1, order)
        else:
            p_table = _second_order(rhs, p0, p1, order + 1)
            s = TruncatedSeries(1, order + 1, RAT, p_table)
            return s.derivative()
    elif kind == CUSTOM:
        if spec.rhs is None or spec.y0 is None or spec.y1 is None:
            raise UnsupportedOde("CUSTOM ODE needs rhs and initial values")
        rhs = {tuple(e): mpq(c) for e, c in spec.rhs}
        table = _second_order(rhs, spec.y0, spec.y1, order)
    else:  # pragma: no cover - guarded in OdeSpec
        raise UnsupportedOde(kind)
    return TruncatedSeries(1, order, RAT, table)
