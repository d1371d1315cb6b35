"""Exact coefficient scalars: rationals and Gaussian rationals.

Two coefficient fields are supported, tagged RAT (a subfield of the reals)
and GAUSS (rationals extended by i).  RAT coefficients are plain gmpy2
rationals; GAUSS coefficients are ``GaussianRational`` pairs.  Both types
support +, -, *, /, bool (nonzero test) so series and elimination code can
stay generic.
"""

from __future__ import annotations

from gmpy2 import mpq, mpz

RAT = "RAT"
GAUSS = "GAUSS"

QQ_ZERO = mpq(0)
QQ_ONE = mpq(1)


def rat(x) -> mpq:
    """Coerce ints, strings like "3/4", Fractions or mpq to mpq."""
    if isinstance(x, str):
        return mpq(x)
    return mpq(x)


class GaussianRational:
    """An element a + b*i with exact rational a, b.

    Denominators are kept positive and coprime to numerators by mpq itself,
    so every value is in canonical form by construction.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = mpq(re)
        self.im = mpq(im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = as_gauss(other)
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        other = as_gauss(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_gauss(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return as_gauss(other) - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        other = as_gauss(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_gauss(other)
        n = other.re * other.re + other.im * other.im
        if not n:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        return as_gauss(other) / self

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        return f"{self.re}+{self.im}i"


def as_gauss(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(mpq(x), 0)


def zero(field: str):
    return QQ_ZERO if field == RAT else GaussianRational()


def one(field: str):
    return QQ_ONE if field == RAT else GaussianRational(1)


def scalar(field: str, re, im=0):
    """Build a coefficient of the given field from rational parts."""
    if field == RAT:
        if im:
            raise ValueError("RAT scalar with nonzero imaginary part")
        return mpq(re)
    return GaussianRational(re, im)


def conj(c):
    """Complex conjugate; the identity on RAT coefficients."""
    if isinstance(c, GaussianRational):
        return c.conjugate()
    return c


def real_part(c) -> mpq:
    return c.re if isinstance(c, GaussianRational) else c


def imag_part(c) -> mpq:
    return c.im if isinstance(c, GaussianRational) else QQ_ZERO


def is_real(c) -> bool:
    return not isinstance(c, GaussianRational) or not c.im


def field_of(c) -> str:
    return GAUSS if isinstance(c, GaussianRational) else RAT


def promote(c, field: str):
    """Re-tag a coefficient into the given field."""
    if field == RAT:
        if isinstance(c, GaussianRational):
            if c.im:
                raise ValueError("cannot demote a non-real scalar to RAT")
            return c.re
        return mpq(c)
    return as_gauss(c)


def _fmt_q(q: mpq) -> str:
    return str(q)


def scalar_to_json(c):
    """Serialize: rationals as "p/q" strings, Gaussian as {"re","im"}."""
    if isinstance(c, GaussianRational):
        return {"re": _fmt_q(c.re), "im": _fmt_q(c.im)}
    return _fmt_q(c)


def scalar_from_json(obj, field: str):
    if isinstance(obj, dict):
        val = GaussianRational(mpq(obj["re"]), mpq(obj.get("im", 0)))
    else:
        val = mpq(obj)
    return promote(val, field)


def content_and_sign_normalize(values):
    """Scale a list of coefficients to primitive canonical form.

    Divides by the rational gcd of all numerators over the lcm of all
    denominators so the entries become coprime integers (Gaussian integers
    with coprime parts for GAUSS), then flips the global sign so the first
    nonzero entry has positive real part (or positive imaginary part when
    its real part is zero).  Returns the new list.
    """
    from math import gcd, lcm

    nums = []
    dens = []
    for c in values:
        for q in (real_part(c), imag_part(c)):
            if q:
                nums.append(abs(int(q.numerator)))
                dens.append(int(q.denominator))
    if not nums:
        return list(values)
    g = 0
    for n in nums:
        g = gcd(g, n)
    l = 1
    for d in dens:
        l = lcm(l, d)
    factor = mpq(l, g)
    scaled = [c * factor for c in values]
    for c in scaled:
        if c:
            r = real_part(c)
            flip = (r < 0) or (not r and imag_part(c) < 0)
            if flip:
                scaled = [-x for x in scaled]
            break
    return scaled
