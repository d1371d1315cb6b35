"""Finitely generated subgroups of C^n with symbolic transcendental entries.

Period coordinates are Gaussian-rational combinations of declared symbols
(real constants assumed algebraically independent over the rationals) and
the unit 1.  Under that declared assumption, rank, discreteness, lattice
and membership questions all reduce to exact linear algebra over the
rationals or the rational function field of the symbols.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm
from typing import Optional

from gmpy2 import mpq

from . import linalg, scalars
from .errors import InputError, SingularAlpha, VariableMismatch
from .scalars import GAUSS, GaussianRational

UNIT = "1"

INDEPENDENCE_ASSUMPTION = (
    "verdict is exact relative to the declared algebraic independence "
    "of the symbol table over the rationals"
)

NOT_CONTAINED = "NOT_CONTAINED"
INFINITE = "INFINITE"


@dataclass(frozen=True)
class SymbolTable:
    """Ordered real constants declared algebraically independent over Q."""

    names: tuple
    approximations: tuple = ()   # (name, decimal-string) pairs

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise InputError("duplicate symbol names")
        for name, _ in self.approximations:
            if name not in self.names:
                raise InputError(f"approximation for unknown symbol {name!r}")

    def approx(self, name) -> Optional[str]:
        for n, v in self.approximations:
            if n == name:
                return v
        return None

    def basis(self):
        """Coordinate basis keys: the unit first, then the symbols."""
        return (UNIT,) + tuple(self.names)

    def to_json(self):
        return {
            "symbols": [
                {"name": n, **({"approx": a} if (a := self.approx(n)) else {})}
                for n in self.names
            ]
        }

    @classmethod
    def from_json(cls, obj):
        names = tuple(s["name"] for s in obj["symbols"])
        approx = tuple(
            (s["name"], s["approx"]) for s in obj["symbols"] if "approx" in s
        )
        return cls(names, approx)


class PeriodVector:
    """An element of C^n over a symbol table, in canonical form."""

    def __init__(self, table: SymbolTable, coords):
        self.table = table
        canon = []
        for coord in coords:
            entry = {}
            for key, value in coord.items():
                if key != UNIT and key not in table.names:
                    raise InputError(f"unknown symbol {key!r}")
                value = scalars.as_gauss(value)
                if value:
                    entry[key] = entry.get(key, GaussianRational()) + value
            canon.append({k: v for k, v in entry.items() if v})
        self.coords = canon
        self.dim = len(canon)

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, PeriodVector)
            and self.table == other.table
            and self.coords == other.coords
        )

    def conjugate(self):
        return PeriodVector(
            self.table,
            [{k: v.conjugate() for k, v in c.items()} for c in self.coords],
        )

    def scaled(self, factor):
        factor = scalars.as_gauss(factor)
        return PeriodVector(
            self.table,
            [{k: v * factor for k, v in c.items()} for c in self.coords],
        )

    def add(self, other):
        coords = []
        for a, b in zip(self.coords, other.coords):
            c = dict(a)
            for k, v in b.items():
                c[k] = c.get(k, GaussianRational()) + v
            coords.append(c)
        return PeriodVector(self.table, coords)

    def rational_expansion(self):
        """Flatten over the Q-basis {b, i b} per coordinate and basis key."""
        basis = self.table.basis()
        out = []
        for coord in self.coords:
            for key in basis:
                v = coord.get(key)
                out.append(v.re if v else mpq(0))
                out.append(v.im if v else mpq(0))
        return out

    def real_imag_rows(self):
        """(Re, Im) of each coordinate as linear polynomials in the symbols.

        Each polynomial is a {basis key: mpq} table.
        """
        out = []
        for coord in self.coords:
            re = {k: v.re for k, v in coord.items() if v.re}
            im = {k: v.im for k, v in coord.items() if v.im}
            out.extend([re, im])
        return out

    def to_json(self):
        return [
            {k: scalars.scalar_to_json(v) for k, v in sorted(coord.items())}
            for coord in self.coords
        ]

    @classmethod
    def from_json(cls, table, obj):
        coords = [
            {k: scalars.scalar_from_json(v, GAUSS) for k, v in coord.items()}
            for coord in obj
        ]
        return cls(table, coords)


def _linear_poly_rank(rows):
    """Rank over the rational function field of the symbols.

    `rows` are lists of {key: mpq} linear polynomials.  A minor vanishes at
    algebraically independent reals iff it is the zero polynomial, so the
    rank is found by exact minor expansion.
    """
    m = len(rows)
    ncols = len(rows[0]) if rows else 0

    def poly_mul(a, b):
        out = {}
        for ka, va in a.items():
            for kb, vb in b.items():
                key = tuple(sorted(ka + kb))
                out[key] = out.get(key, mpq(0)) + va * vb
        return {k: v for k, v in out.items() if v}

    def poly_sub(a, b):
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, mpq(0)) - v
        return {k: v for k, v in out.items() if v}

    def det(row_idx, col_idx):
        if not row_idx:
            return {(): mpq(1)}
        i = row_idx[0]
        total = {}
        for pos, j in enumerate(col_idx):
            entry = rows[i][j]
            if not entry:
                continue
            sign = -1 if pos % 2 else 1
            entry_poly = {(k,): sign * v for k, v in entry.items()}
            sub = det(row_idx[1:], col_idx[:pos] + col_idx[pos + 1:])
            term = poly_mul(entry_poly, sub)
            total = poly_sub(total, {k: -v for k, v in term.items()})
        return total

    from itertools import combinations

    for r in range(min(m, ncols), 0, -1):
        for rset in combinations(range(m), r):
            for cset in combinations(range(ncols), r):
                if det(tuple(rset), tuple(cset)):
                    return r
    return 0


class PeriodGroup:
    """Finitely generated subgroup of C^n, with cached exact verdicts."""

    def __init__(self, table: SymbolTable, dim: int, generators):
        self.table = table
        self.dim = dim
        gens = []
        for g in generators:
            if not isinstance(g, PeriodVector):
                g = PeriodVector(table, g)
            if g.dim != dim:
                raise VariableMismatch("generator dimension mismatch")
            if g.table != table:
                raise InputError("generators must share the symbol table")
            if g:
                gens.append(g)
        self.generators = gens
        self._zrank = None
        self._rdim = None

    # -- rank invariants ----------------------------------------------

    def zrank(self) -> int:
        """Rank of the generated free Z-module (under symbol independence)."""
        if self._zrank is None:
            rows = [g.rational_expansion() for g in self.generators]
            self._zrank = linalg.rank(rows) if rows else 0
        return self._zrank

    def rdim(self) -> int:
        """Dimension of the real span of the generators."""
        if self._rdim is None:
            rows = [g.real_imag_rows() for g in self.generators]
            self._rdim = _linear_poly_rank(rows) if rows else 0
        return self._rdim

    def is_discrete(self) -> bool:
        """Classical criterion: a finitely generated subgroup of R^d is
        discrete iff its Z-rank equals the dimension of its real span."""
        return self.zrank() == self.rdim()

    def is_lattice(self) -> bool:
        return self.is_discrete() and self.zrank() == 2 * self.dim

    # -- integer lattice membership -----------------------------------

    def _integer_rows(self, extra_vectors=()):
        """Common-denominator integer expansions of generators and extras."""
        gen_rows = [g.rational_expansion() for g in self.generators]
        extra_rows = [v.rational_expansion() for v in extra_vectors]
        denom = 1
        for row in gen_rows + extra_rows:
            for c in row:
                if c:
                    denom = lcm(denom, int(c.denominator))
        to_int = lambda row: [int(c * denom) for c in row]
        return [to_int(r) for r in gen_rows], [to_int(r) for r in extra_rows]

    def _hnf_for(self, extra_vectors=()):
        gen_rows, extra_rows = self._integer_rows(extra_vectors)
        hnf, pivots = linalg.hermite_normal_form(gen_rows)
        return hnf, pivots, extra_rows

    def contains(self, vector: PeriodVector) -> bool:
        hnf, pivots, (vec,) = self._hnf_for([vector])
        return linalg.hnf_membership(hnf, pivots, vec) is not None

    def conjugation_closed(self) -> bool:
        """True iff the conjugate of every generator lies in the group."""
        conjs = [g.conjugate() for g in self.generators]
        hnf, pivots, rows = self._hnf_for(conjs)
        return all(linalg.hnf_membership(hnf, pivots, r) is not None for r in rows)

    def to_json(self):
        return {
            "dim": self.dim,
            "table": self.table.to_json(),
            "generators": [g.to_json() for g in self.generators],
        }

    def report(self):
        return {
            "kind": "period_group_report",
            "dim": self.dim,
            "zrank": self.zrank(),
            "rdim": self.rdim(),
            "discrete": self.is_discrete(),
            "lattice": self.is_lattice(),
            "conjugation_closed": self.conjugation_closed(),
            "assumption": INDEPENDENCE_ASSUMPTION,
        }

    @classmethod
    def from_json(cls, obj):
        table = SymbolTable.from_json(obj["table"])
        gens = [PeriodVector.from_json(table, g) for g in obj["generators"]]
        return cls(table, obj["dim"], gens)


def apply_gl(alpha, group: PeriodGroup) -> PeriodGroup:
    """Image of the group under precomposition with the linear map alpha:
    generators are mapped through the exact inverse matrix."""
    n = group.dim
    if len(alpha) != n or any(len(r) != n for r in alpha):
        raise VariableMismatch("alpha must match the group dimension")
    alpha_g = [[scalars.as_gauss(c) for c in row] for row in alpha]
    inv = linalg.inverse(alpha_g, GAUSS)
    if inv is None:
        raise SingularAlpha("alpha is singular")
    new_gens = []
    for g in group.generators:
        coords = []
        for i in range(n):
            entry = {}
            for j in range(n):
                if inv[i][j]:
                    for key, val in g.coords[j].items():
                        entry[key] = entry.get(key, GaussianRational()) + inv[i][j] * val
            coords.append(entry)
        new_gens.append(PeriodVector(group.table, coords))
    return PeriodGroup(group.table, n, new_gens)


def _require_compatible(a: PeriodGroup, b: PeriodGroup):
    if a.table != b.table:
        raise InputError("period groups must share the symbol table")
    if a.dim != b.dim:
        raise VariableMismatch("period groups must share the dimension")


def smallest_scaling_into(src: PeriodGroup, dst: PeriodGroup, n_max: int):
    """Smallest N <= n_max with N*src contained in dst, or None."""
    _require_compatible(src, dst)
    hnf, pivots, src_rows = dst._hnf_for(src.generators)
    for n in range(1, n_max + 1):
        if all(
            linalg.hnf_membership(hnf, pivots, [n * c for c in row]) is not None
            for row in src_rows
        ):
            return n
    return None


def sublattice_index(sub: PeriodGroup, sup: PeriodGroup):
    """Index of sub in sup: an integer, INFINITE, or NOT_CONTAINED."""
    _require_compatible(sub, sup)
    hnf, pivots, sub_rows = sup._hnf_for(sub.generators)
    coeff_rows = []
    for row in sub_rows:
        coeffs = linalg.hnf_membership(hnf, pivots, row)
        if coeffs is None:
            return NOT_CONTAINED
        coeff_rows.append(coeffs)
    r_sup = len(hnf)
    if not coeff_rows or linalg.rank([[mpq(c) for c in r] for r in coeff_rows]) < r_sup:
        return INFINITE
    divisors = linalg.smith_normal_form(coeff_rows)
    index = 1
    for d in divisors:
        index *= d
    return index


def compare_rank_invariant(gf: PeriodGroup, gg: PeriodGroup) -> dict:
    """EQUAL/DIFFERENT rank verdict; DIFFERENT certifies non-isomorphism
    of the corresponding structures."""
    rf, rg = gf.zrank(), gg.zrank()
    return {
        "kind": "rank_comparison",
        "verdict": "EQUAL" if rf == rg else "DIFFERENT",
        "rank_left": rf,
        "rank_right": rg,
        "assumption": INDEPENDENCE_ASSUMPTION,
    }
