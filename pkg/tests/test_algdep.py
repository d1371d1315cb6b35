"""Annihilator search: canonical output, re-verification, budgets."""

import pytest
from gmpy2 import mpq

import oracles
from aatkit import OdeSpec, TruncatedSeries, generate_series
from aatkit.algdep import (
    DEPENDENT,
    INDEPENDENT_UP_TO,
    Annihilator,
    evaluate_poly,
    find_annihilator,
    independence_verdict,
    verify_annihilator,
)
from aatkit.errors import BudgetExceeded, OrderTooLow
from aatkit.series import GermMap
from conftest import to_fraction


def _exp_pair(order=18):
    e = generate_series(OdeSpec(kind="EXP"), order)
    u = e.block_sum_substitute()  # exp(u+v) in two variables
    from aatkit.aat import embed_block

    return embed_block(e, 0), embed_block(e, 1), u


def test_exp_annihilator_is_canonical():
    eu, ev, euv = _exp_pair()
    verdict = find_annihilator(euv, [eu, ev], 2, 10)
    assert verdict.outcome == DEPENDENT
    ann = verdict.annihilator
    assert ann.terms == {(0, 0, 1): mpq(1), (1, 1, 0): mpq(-1)}
    assert ann.degree == 2
    assert ann.residual_status == "CLEAN(18)"


def test_verdict_json_round_trip():
    eu, ev, euv = _exp_pair()
    verdict = find_annihilator(euv, [eu, ev], 2, 10)
    from aatkit.algdep import DependenceVerdict

    back = DependenceVerdict.from_json(verdict.to_json())
    assert back.annihilator.terms == verdict.annihilator.terms
    assert back.outcome == verdict.outcome


def test_independence_of_single_exponential():
    e = generate_series(OdeSpec(kind="EXP"), 20)
    verdict = independence_verdict([e], 4, 12)
    assert verdict.outcome == INDEPENDENT_UP_TO
    # the oracle agrees: the dependence system has trivial nullspace
    assert (
        oracles.relation_kernel_dim_1var([], oracles.exp_coeffs(20), 4, 20) == 0
    )


def test_sin_exp_no_low_degree_relation():
    s = generate_series(OdeSpec(kind="SIN"), 30)
    e = generate_series(OdeSpec(kind="EXP"), 30)
    verdict = find_annihilator(e, [s], 6, 20)
    assert verdict.outcome == INDEPENDENT_UP_TO
    dim = oracles.relation_kernel_dim_1var(
        [oracles.sin_coeffs(30)], oracles.exp_coeffs(30), 6, 30
    )
    assert dim == 0


def test_sin_cos_pythagoras_found():
    s = generate_series(OdeSpec(kind="SIN"), 16)
    c = generate_series(OdeSpec(kind="COS"), 16)
    verdict = find_annihilator(c, [s], 2, 10)
    assert verdict.outcome == DEPENDENT
    # canonical form: first coefficient in graded-lex order is positive,
    # so the engine emits 1 - x^2 - z^2
    assert verdict.annihilator.terms == {
        (0, 0): mpq(1),
        (2, 0): mpq(-1),
        (0, 2): mpq(-1),
    }


def test_verify_rejects_wrong_polynomial():
    s = generate_series(OdeSpec(kind="SIN"), 16)
    c = generate_series(OdeSpec(kind="COS"), 16)
    bad = Annihilator(
        variables=["x", "z"],
        terms={(2, 0): mpq(1), (0, 2): mpq(1), (0, 0): mpq(1)},
        degree=2,
        order=10,
        field="RAT",
    )
    report = verify_annihilator(bad, [s, c], 10)
    assert not report.clean
    assert report.residual_index == (0,)
    assert report.residual_value == 2


def test_evaluate_poly_allows_nonzero_constant_terms():
    c = generate_series(OdeSpec(kind="COS"), 12)  # constant term 1
    res = evaluate_poly({(1,): mpq(1), (0,): mpq(-1)}, [c], 12)
    # cos(z) - 1 = -z^2/2 + ...
    assert res.coeffs[(2,)] == mpq(-1, 2)


def test_budget_and_order_guards():
    e = generate_series(OdeSpec(kind="EXP"), 12)
    with pytest.raises(OrderTooLow):
        find_annihilator(e, [e], 4, 4)
    with pytest.raises(OrderTooLow):
        find_annihilator(e, [e], 4, 20)  # series too shallow
    with pytest.raises(BudgetExceeded):
        find_annihilator(e, [e], 8, 10, max_monomials=5)


def test_emitted_annihilators_reverify_at_deeper_order():
    # the search system is assembled beyond the requested order, so the
    # emitted certificate must stay clean when re-checked independently
    s = generate_series(OdeSpec(kind="SIN"), 30)
    su, sv = (
        s.block_sum_substitute(),
        None,
    )
    from aatkit.aat import embed_block

    basis = [embed_block(s, 0), embed_block(s, 1)]
    verdict = find_annihilator(su, basis, 6, 16)
    assert verdict.outcome == DEPENDENT
    report = verify_annihilator(verdict.annihilator, basis + [su], 24)
    assert report.clean

    # and the oracle sees the same polynomial vanish
    terms = {
        e: to_fraction(c) for e, c in verdict.annihilator.terms.items()
    }
    sin2 = oracles.binomial_sum(oracles.sin_coeffs(24), 24)
    xs = {(i, 0): c for (i,), c in enumerate_coeffs(oracles.sin_coeffs(24))}
    ys = {(0, i): c for (i,), c in enumerate_coeffs(oracles.sin_coeffs(24))}
    residual = oracles.eval_poly_on_series_2var(terms, [xs, ys, sin2], 24)
    assert residual == {}


def enumerate_coeffs(coeffs):
    return {(k,): c for k, c in enumerate(coeffs) if c}.items()
