"""Addition-theorem certification, systems, promotion, witnesses."""

import pytest
from gmpy2 import mpq

from aatkit import GaussianRational, GermMap, OdeSpec, TruncatedSeries, generate_series
from aatkit import aat
from aatkit.errors import DenominatorNotUnit, SingularAlpha
from aatkit.scalars import GAUSS, RAT


def _one_dim(kind, order):
    return GermMap([generate_series(OdeSpec(kind=kind), order)])


def test_exp_certificate():
    cert = aat.check_aat(_one_dim("EXP", 18), 2, 10)
    assert cert.status == aat.PASS
    ann = cert.component_verdicts[0].annihilator
    assert ann.terms == {(0, 0, 1): mpq(1), (1, 1, 0): mpq(-1)}
    assert cert.independence.outcome == "INDEPENDENT_UP_TO"


def test_sin_certificate_matches_hand_quartic():
    cert = aat.check_aat(_one_dim("SIN", 24), 6, 16)
    assert cert.status == aat.PASS
    ann = cert.component_verdicts[0].annihilator
    # (z^2 + x1^2 - x2^2)^2 - 4 z^2 x1^2 (1 - x2^2), expanded
    hand = {
        (0, 0, 4): mpq(1),
        (4, 0, 0): mpq(1),
        (0, 4, 0): mpq(1),
        (2, 0, 2): mpq(-2),
        (0, 2, 2): mpq(-2),
        (2, 2, 0): mpq(-2),
        (2, 2, 2): mpq(4),
    }
    assert ann.terms == hand


def test_constant_component_fails():
    one = TruncatedSeries.constant(1, 1, 12, RAT)
    cert = aat.check_aat(GermMap([one]), 2, 10)
    assert cert.status == aat.FAIL
    assert cert.independence.annihilator.terms == {
        (0,): mpq(1),
        (1,): mpq(-1),
    }


def test_certificate_json_round_trip():
    cert = aat.check_aat(_one_dim("EXP", 18), 2, 10)
    back = aat.AatCertificate.from_json(cert.to_json())
    assert back.status == cert.status
    assert (
        back.component_verdicts[0].annihilator.terms
        == cert.component_verdicts[0].annihilator.terms
    )


def test_condition_star():
    assert aat.check_condition_star(_one_dim("EXP", 6))["status"] == aat.PASS
    sq = TruncatedSeries(1, 6, RAT)
    sq.coeffs = {(2,): mpq(1)}
    assert aat.check_condition_star(GermMap([sq]))["status"] == aat.FAIL
    u = TruncatedSeries(2, 6, RAT)
    u.coeffs = {(1, 0): mpq(1), (0, 1): mpq(1)}
    v = TruncatedSeries(2, 6, RAT)
    v.coeffs = {(1, 0): mpq(1), (0, 1): mpq(1)}
    assert aat.check_condition_star(GermMap([u, v]))["status"] == aat.FAIL


def test_promotion():
    assert aat.promote_real_to_complex(_one_dim("SIN", 8))["status"] == aat.PASS
    iz = TruncatedSeries(1, 6, GAUSS)
    iz.coeffs = {(1,): GaussianRational(0, 1)}
    assert aat.promote_real_to_complex(GermMap([iz]))["status"] == aat.FAIL
    sq = TruncatedSeries(1, 6, RAT)
    sq.coeffs = {(2,): mpq(1)}
    assert aat.promote_real_to_complex(GermMap([sq]))["status"] == aat.FAIL


def test_promotion_stable_under_rational_gl():
    m = _one_dim("SIN", 12)
    scaled = aat.compose_linear(m, [[mpq(3)]])
    assert aat.promote_real_to_complex(scaled)["status"] == aat.PASS


def _sin_cos_system(order, sign=1):
    s = generate_series(OdeSpec(kind="SIN"), order)
    c = generate_series(OdeSpec(kind="COS"), order)
    one = mpq(1)
    return aat.RationalAdditionSystem(
        psi=[c, s],
        addition=[
            ({(1, 0, 1, 0): one, (0, 1, 0, 1): -one}, {(0, 0, 0, 0): one}),
            ({(0, 1, 1, 0): one, (1, 0, 0, 1): mpq(sign)}, {(0, 0, 0, 0): one}),
        ],
        negation=[
            ({(1, 0): one}, {(0, 0): one}),
            ({(0, 1): -one}, {(0, 0): one}),
        ],
        relation={(2, 0): one, (0, 2): one, (0, 0): -one},
    )


def test_sin_cos_system_clean():
    report = aat.verify_rational_system(_sin_cos_system(24), 20)
    assert report.clean
    assert report.order == 20


def test_sign_flip_fails_at_first_order():
    report = aat.verify_rational_system(_sin_cos_system(24, sign=-1), 20)
    assert not report.clean
    label, rep = report.first_failure()
    assert rep.residual_index == (0, 1)  # coefficient of u^0 v^1
    assert rep.residual_value == 2


def test_denominator_must_be_unit():
    s = generate_series(OdeSpec(kind="SIN"), 12)
    sys_ = aat.RationalAdditionSystem(
        psi=[s],
        addition=[({(0, 0): mpq(1)}, {(1, 0): mpq(1)})],  # den = sin(u): not a unit
        negation=[({(0,): mpq(-1)}, {(0,): mpq(1)})],
    )
    with pytest.raises(DenominatorNotUnit):
        aat.verify_rational_system(sys_, 10)


def test_system_stronger_than_aat():
    # a clean rational system yields annihilators the verifier accepts
    anns = aat.rational_system_annihilators(_sin_cos_system(24), 16)
    assert anns
    from aatkit.algdep import verify_annihilator
    from aatkit.aat import embed_block

    s = generate_series(OdeSpec(kind="SIN"), 24)
    c = generate_series(OdeSpec(kind="COS"), 24)
    basis = [embed_block(c, 0), embed_block(s, 0), embed_block(c, 1), embed_block(s, 1)]
    targets = [c.block_sum_substitute(), s.block_sum_substitute()]
    for ann, target in zip(anns, targets):
        assert verify_annihilator(ann, basis + [target], 16).clean


def test_exp_system_with_negation():
    e = generate_series(OdeSpec(kind="EXP"), 16)
    sys_ = aat.RationalAdditionSystem(
        psi=[e],
        addition=[({(1, 1): mpq(1)}, {(0, 0): mpq(1)})],
        negation=[({(0,): mpq(1)}, {(1,): mpq(1)})],  # exp(-u) = 1/exp(u)
    )
    report = aat.verify_rational_system(sys_, 12)
    assert report.clean


def test_isomorphism_witness_sin_doubling():
    f = _one_dim("SIN", 20)
    g = _one_dim("SIN", 20)
    verdict = aat.isomorphism_witness_check(f, g, [[mpq(2)]], 4, 12)
    assert verdict.status == aat.PASS
    assert verdict.component_verdicts[0].annihilator.terms == {
        (0, 2): mpq(1),
        (2, 0): mpq(-4),
        (4, 0): mpq(4),
    }


def test_isomorphism_witness_identity_invariant():
    for kind in ("EXP", "SIN"):
        f = _one_dim(kind, 20)
        verdict = aat.isomorphism_witness_check(f, f, [[mpq(1)]], 2, 10)
        assert verdict.status == aat.PASS


def test_singular_alpha_rejected():
    f = _one_dim("SIN", 12)
    with pytest.raises(SingularAlpha):
        aat.isomorphism_witness_check(f, f, [[mpq(0)]], 2, 10)


def test_group_law_round_trip_exp():
    m = _one_dim("EXP", 12)
    law = aat.group_law_germ(m)
    # chart coordinates X = e^u - 1, Y = e^v - 1 give (1 + X)(1 + Y)
    expected = {(0, 0): mpq(1), (1, 0): mpq(1), (0, 1): mpq(1), (1, 1): mpq(1)}
    assert law[0].coeffs == expected


def test_group_law_components_algebraic_over_charts():
    # each coordinate of the group law is algebraic over K(x, y); for the
    # one-dimensional sine germ the law is x sqrt(1-y^2) + y sqrt(1-x^2)
    m = _one_dim("SIN", 16)
    law = aat.group_law_germ(m)
    from aatkit.algdep import find_annihilator
    from aatkit.aat import embed_block

    x = TruncatedSeries(2, 16, RAT)
    x.coeffs = {(1, 0): mpq(1)}
    y = TruncatedSeries(2, 16, RAT)
    y.coeffs = {(0, 1): mpq(1)}
    verdict = find_annihilator(law[0], [x, y], 6, 12)
    assert verdict.outcome == "DEPENDENT"
