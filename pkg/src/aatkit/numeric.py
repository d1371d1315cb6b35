"""High-precision numeric evaluation of the catalog germs.

The elementary germs go straight to mpmath.  ODE-defined germs (the
Weierstrass family and custom second-order equations) are integrated
along a straight path from the base point by repeated Taylor steps, with
step doubling as the accuracy check.  Everything works in mpmath complex
arithmetic at a caller-chosen precision.
"""

from __future__ import annotations

import mpmath
from gmpy2 import mpq

from . import odegen
from .errors import EvaluationDivergence, MissingApproximation, UnsupportedOde

_TAYLOR_TERMS = 40


def _mp(x):
    """gmpy2 rational (or int/str) to an exact mpmath float at current prec."""
    q = mpq(x)
    return mpmath.mpf(int(q.numerator)) / mpmath.mpf(int(q.denominator))


def _rhs_at(rhs, c, d, k):
    """[t^k] of sum rhs[(i,j)] y^i (y')^j for Taylor coefficient lists.

    c holds y-coefficients up to degree k+1, d the y'-coefficients (so
    d[m] = (m+1) c[m+1]).  Products of up to two factors are convolved
    directly; higher powers build the needed degree-k coefficient by a
    short dynamic convolution.
    """
    total = mpmath.mpc(0)
    for (i, j), coef in rhs.items():
        if i + j == 0:
            if k == 0:
                total += coef
        elif (i, j) == (1, 0):
            total += coef * c[k]
        elif (i, j) == (0, 1):
            total += coef * d[k]
        elif i + j == 2:
            a = c if i else d
            b = c if i == 2 else d
            s = mpmath.mpc(0)
            for m in range(k + 1):
                s += a[m] * b[k - m]
            total += coef * s
        else:
            acc = [mpmath.mpc(1)] + [mpmath.mpc(0)] * k
            for f in [c] * i + [d] * j:
                nxt = [mpmath.mpc(0)] * (k + 1)
                for d1, v1 in enumerate(acc):
                    if v1:
                        for d2 in range(k + 1 - d1):
                            nxt[d1 + d2] += v1 * f[d2]
                acc = nxt
            total += coef * acc[k]
    return total


def _taylor_step(rhs, y, dy, h, terms):
    """One Taylor step for y'' = rhs(y, y'): returns (y(h), y'(h))."""
    c = [mpmath.mpc(y), mpmath.mpc(dy)]
    d = [c[1]]
    for k in range(terms - 2):
        ck2 = _rhs_at(rhs, c, d, k) / ((k + 1) * (k + 2))
        c.append(ck2)
        d.append((k + 2) * ck2)
    val = mpmath.mpc(0)
    for coeff in reversed(c):
        val = val * h + coeff
    dval = mpmath.mpc(0)
    for coeff in reversed(d):
        dval = dval * h + coeff
    return val, dval


def _integrate(rhs, y0, dy0, z, steps, terms):
    y, dy = mpmath.mpc(y0), mpmath.mpc(dy0)
    h = mpmath.mpc(z) / steps
    cap = mpmath.mpf(10) ** (mpmath.mp.dps + 20)
    for _ in range(steps):
        y, dy = _taylor_step(rhs, y, dy, h, terms)
        if not mpmath.isfinite(y) or abs(y) > cap:
            raise EvaluationDivergence(
                "ODE solution left the working range (pole on or near the path?)"
            )
    return y, dy


def _ode_solution(spec: odegen.OdeSpec, z):
    """Value and derivative of the second-order ODE germ at z, with
    accuracy confirmed by step doubling."""
    if spec.kind in (odegen.WEIERSTRASS_P, odegen.WEIERSTRASS_P_PRIME):
        g2 = _mp(spec.g2 or 0)
        rhs = {(2, 0): mpmath.mpc(6)}
        if g2:
            rhs[(0, 0)] = mpmath.mpc(-g2 / 2)
        y0, dy0 = _mp(spec.p0 or 0), _mp(spec.p1 or 0)
    elif spec.kind == odegen.CUSTOM:
        rhs = {tuple(e): _mp(c) for e, c in (spec.rhs or ())}
        y0, dy0 = _mp(spec.y0), _mp(spec.y1)
    else:
        raise UnsupportedOde(spec.kind)
    z = mpmath.mpc(z)
    if not z:
        return mpmath.mpc(y0), mpmath.mpc(dy0)
    tol = mpmath.mpf(10) ** (-(mpmath.mp.dps - 5))
    steps = max(8, int(16 * abs(z)) + 1)
    prev = None
    while steps <= 1 << 14:
        cur = _integrate(rhs, y0, dy0, z, steps, _TAYLOR_TERMS)
        if prev is not None and abs(cur[0] - prev[0]) < tol * (1 + abs(cur[0])):
            return cur
        prev = cur
        steps *= 2
    raise EvaluationDivergence("step doubling failed to converge")


def evaluate(spec: odegen.OdeSpec, z, digits: int):
    """Evaluate the germ described by `spec` at the complex point z."""
    with mpmath.workdps(digits + 10):
        z = mpmath.mpc(z)
        if spec.kind == odegen.EXP:
            result = mpmath.exp(z)
        elif spec.kind == odegen.SIN:
            result = mpmath.sin(z)
        elif spec.kind == odegen.COS:
            result = mpmath.cos(z)
        elif spec.kind == odegen.TAN:
            result = mpmath.tan(z)
        elif spec.kind == odegen.WEIERSTRASS_P_PRIME:
            result = _ode_solution(spec, z)[1]
        else:
            result = _ode_solution(spec, z)[0]
        return +result


def symbol_values(table, digits: int):
    """Resolve every symbol of the table to an mpf from its stored decimals."""
    values = {}
    with mpmath.workdps(digits + 10):
        for name in table.names:
            approx = table.approx(name)
            if approx is None:
                raise MissingApproximation(f"symbol {name!r} has no approximation")
            values[name] = mpmath.mpf(approx)
    return values


def vector_value(vector, digits: int):
    """Numeric value of a period vector as a list of mpc coordinates."""
    values = symbol_values(vector.table, digits)
    values["1"] = mpmath.mpf(1)
    with mpmath.workdps(digits + 10):
        out = []
        for coord in vector.coords:
            acc = mpmath.mpc(0)
            for key, scal in coord.items():
                acc += mpmath.mpc(_mp(scal.re), _mp(scal.im)) * values[key]
            out.append(acc)
        return out
