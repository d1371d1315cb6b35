"""Period groups: ranks, discreteness, membership, indices."""

import random

import pytest
from gmpy2 import mpq

from aatkit import lattice
from aatkit.errors import InputError, SingularAlpha, VariableMismatch
from aatkit.lattice import (
    INFINITE,
    NOT_CONTAINED,
    PeriodGroup,
    PeriodVector,
    SymbolTable,
    apply_gl,
    compare_rank_invariant,
    smallest_scaling_into,
    sublattice_index,
)
from aatkit.scalars import GaussianRational as G

random.seed(987)

TABLE = SymbolTable(
    ("pi", "sigma"),
    (("pi", "3.14159265358979323846"), ("sigma", "1.41421356237309504880")),
)


def _vec(*coords):
    return PeriodVector(TABLE, list(coords))


def _grp(dim, *vectors):
    return PeriodGroup(TABLE, dim, list(vectors))


def test_one_and_sigma_not_discrete():
    g = _grp(1, _vec({"1": G(1)}), _vec({"sigma": G(1)}))
    assert g.zrank() == 2
    assert g.rdim() == 1
    assert not g.is_discrete()
    assert not g.is_lattice()


def test_rank_two_lattice_in_c1():
    g = _grp(1, _vec({"pi": G(1)}), _vec({"pi": G(0, 1)}))
    assert g.zrank() == 2 and g.rdim() == 2
    assert g.is_lattice()
    assert g.conjugation_closed()


def test_conjugation_closed_detects_asymmetry():
    g = _grp(1, _vec({"pi": G(1, 2)}))
    assert not g.conjugation_closed()


def test_zero_generators_dropped():
    g = _grp(1, _vec({}), _vec({"pi": G(2)}))
    assert len(g.generators) == 1
    assert g.zrank() == 1


def test_smallest_scaling_pi_into_two_pi():
    src = _grp(1, _vec({"pi": G(1)}))
    dst = _grp(1, _vec({"pi": G(2)}))
    assert smallest_scaling_into(src, dst, 8) == 2
    assert smallest_scaling_into(dst, src, 8) == 1
    odd = _grp(1, _vec({"sigma": G(1)}))
    assert smallest_scaling_into(odd, dst, 6) is None


def test_sublattice_index_values():
    z_pi = _grp(1, _vec({"pi": G(1)}))
    z_2pi = _grp(1, _vec({"pi": G(2)}))
    assert sublattice_index(z_2pi, z_pi) == 2
    assert sublattice_index(z_pi, z_2pi) == NOT_CONTAINED
    full = _grp(1, _vec({"pi": G(1)}), _vec({"pi": G(0, 1)}))
    assert sublattice_index(z_pi, full) == INFINITE


def test_scaled_sublattice_index_is_n_pow_rank():
    base = _grp(1, _vec({"pi": G(1)}), _vec({"pi": G(0, 1)}))
    for _ in range(10):
        n = random.randint(1, 7)
        scaled = PeriodGroup(TABLE, 1, [g.scaled(n) for g in base.generators])
        assert sublattice_index(scaled, base) == n ** base.zrank()


def test_zrank_invariant_under_gl():
    g = PeriodGroup(
        TABLE,
        2,
        [
            _vec({"pi": G(2)}, {}),
            _vec({}, {"pi": G(0, 2)}),
            _vec({"sigma": G(1)}, {"1": G(1, 1)}),
        ],
    )
    base = g.zrank()
    for _ in range(50):
        while True:
            alpha = [
                [G(random.randint(-4, 4), random.randint(-4, 4)) for _ in range(2)]
                for _ in range(2)
            ]
            if alpha[0][0] * alpha[1][1] - alpha[0][1] * alpha[1][0]:
                break
        moved = apply_gl(alpha, g)
        assert moved.zrank() == base
        assert moved.rdim() == g.rdim()


def test_apply_gl_uses_inverse():
    g = _grp(1, _vec({"pi": G(2)}))
    half = apply_gl([[G(2)]], g)
    assert half.generators[0].coords[0] == {"pi": G(1)}
    with pytest.raises(SingularAlpha):
        apply_gl([[G(0)]], g)


def test_verdicts_stable_under_unimodular_rewrite():
    g1, g2 = _vec({"pi": G(1)}), _vec({"pi": G(0, 1)})
    a = _grp(1, g1, g2)
    b = _grp(1, g1.add(g2), g2)  # unimodular generator change
    for grp in (a, b):
        assert grp.is_lattice()
    assert sublattice_index(a, b) == 1
    assert sublattice_index(b, a) == 1


def test_compare_rank_invariant():
    a = _grp(1, _vec({"pi": G(2)}))
    b = _grp(1, _vec({"pi": G(1)}), _vec({"pi": G(0, 1)}))
    cmp = compare_rank_invariant(a, b)
    assert cmp["verdict"] == "DIFFERENT"
    assert (cmp["rank_left"], cmp["rank_right"]) == (1, 2)
    same = compare_rank_invariant(a, a)
    assert same["verdict"] == "EQUAL"


def test_input_validation():
    with pytest.raises(InputError):
        SymbolTable(("pi", "pi"))
    with pytest.raises(InputError):
        PeriodVector(TABLE, [{"tau": G(1)}])
    other = SymbolTable(("pi",))
    with pytest.raises(InputError):
        lattice.smallest_scaling_into(
            _grp(1, _vec({"pi": G(1)})),
            PeriodGroup(other, 1, [PeriodVector(other, [{"pi": G(1)}])]),
            4,
        )
    with pytest.raises(VariableMismatch):
        PeriodGroup(TABLE, 2, [_vec({"pi": G(1)})])


def test_json_round_trip():
    g = PeriodGroup(
        TABLE, 2, [_vec({"pi": G(2)}, {"1": G(1, -1)}), _vec({}, {"sigma": G(1)})]
    )
    back = PeriodGroup.from_json(g.to_json())
    assert back.to_json() == g.to_json()
    assert back.zrank() == g.zrank()
    assert back.report() == g.report()
