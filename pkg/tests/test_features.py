"""Risk features: performance states, thickness, capital, CVA, FV, IRR."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from peal.design import DesignError, normalize_design, horizontal_only_design, vertical_retention_design
from peal.features import (
    FeatureError,
    cva_curve,
    cva_report,
    exposure_performance,
    fair_value,
    irr,
    note_purchase_prices,
    outstanding_series,
    present_value,
    purchase_price,
    regulatory_capital,
    thickness_peal,
    thickness_regulatory,
)
from peal.scenarios import BASE_SCENARIO, EventOccurrence, Scenario


def test_unaffected_exposure_scores_zero(desk_deal):
    e = desk_deal.portfolios[0].exposures[0]
    ep = exposure_performance(desk_deal, e, BASE_SCENARIO)
    assert ep.value == 0 and ep.state == "full-performing"


def test_defaulted_exposure_is_non_performing(desk_deal, desk_default_scenario):
    e = desk_deal.portfolios[0].exposures[0]
    ep = exposure_performance(desk_deal, e, desk_default_scenario, Fraction(2, 100))
    rate = Fraction(2, 100) / 12
    expected = Fraction(-55) / (1 + rate) ** 2 + Fraction(40 - 5) / (1 + rate) ** 3
    assert ep.value == expected
    assert ep.state == "non-performing"


def test_generous_prepayment_is_super_performing(desk_deal):
    e = desk_deal.portfolios[0].exposures[0]
    scn = Scenario(
        0, 1,
        {(1, 1): (
            EventOccurrence("pe", 2, capital_time=2, interest_time=2,
                            spot_amount=60, spot_time=2),
        )},
    )
    ep = exposure_performance(desk_deal, e, scn, Fraction(2, 100))
    assert ep.value > 0 and ep.state == "super-performing"


def test_outstanding_series_tail_sums():
    assert outstanding_series([0, 10, 20, 30]) == [60, 50, 30, 0]


def test_regulatory_thickness_two_columns():
    gdm = [[0, 20, 40], [0, 10, 30]]
    d = normalize_design(horizontal_only_design(3))
    # Shape mismatch is irrelevant here: only vs gates the computation.
    th = thickness_regulatory(gdm, d)
    # At t=0: OB = {60, 40}.
    assert th.ob[0][0] == 60 and th.ob[1][0] == 40
    assert th.ap[0][0] == Fraction(40, 100) and th.ap[1][0] == 0
    assert th.dp[0][0] == 1 and th.dp[1][0] == Fraction(40, 100)
    assert th.thp[0][0] == Fraction(60, 100) and th.thp[1][0] == Fraction(40, 100)
    # TH_p(t) = OB_p(t) identically.
    for p in range(2):
        for t in range(3):
            assert th.th[p][t] == th.ob[p][t]


def test_single_column_thickness_is_everything():
    d = normalize_design(horizontal_only_design(3))
    th = thickness_regulatory([[0, 50, 50]], d)
    assert th.thp[0][0] == 1 and th.th[0][0] == 100


def test_regulatory_thickness_refuses_vertical_designs(retention_design):
    with pytest.raises(DesignError, match="horizontal"):
        thickness_regulatory([[0, 1]] * 5, retention_design)


def test_peal_thickness_matches_tail_sums():
    gn = [[0, 10, 10], [0, 5, 15]]
    thn = thickness_peal(gn)
    assert thn[0] == [20, 10, 0]
    assert thn[1] == [20, 15, 0]


def test_regulatory_capital_products(retention_design):
    gv = [[0, 0]] * 7 + [[0, 1000]]
    rw = {"senior": Fraction(15, 100), "mezzanine": Fraction(1, 2), "junior": Fraction(1)}
    rcn = regulatory_capital(retention_design, gv, rw, Fraction(8, 100))
    # Only VC8 (junior, mapped to note 4) carries balance: 1000 * 1.0 * 0.08.
    assert rcn[3][0] == 80
    assert rcn[0][0] == 0
    zero = regulatory_capital(retention_design, gv, {"senior": 0, "mezzanine": 0, "junior": 0}, Fraction(8, 100))
    assert all(set(row) == {0} for row in zero)


def test_regulatory_capital_missing_weight(retention_design):
    gv = [[0, 1]] * 8
    with pytest.raises(FeatureError, match="missing risk weight"):
        regulatory_capital(retention_design, gv, {"senior": 1}, Fraction(8, 100))


def test_cva_zero_for_loss_free_sets():
    gn = [[0, 10, 10], [0, 5, 5]]
    nn_rows = [[list(row) for row in gn]] * 3
    report = cva_report([], gn, [], nn_rows, tp=2)
    for curve in report.curves.values():
        assert set(curve) == {0}
    assert not report.crossing


def test_cva_crossing_detection():
    gn = [[0, 10, 10], [0, 10, 10]]
    # N1 carries an uncured early shortfall, N2 ends deeper under water:
    # the cumulative curves cross on (0, TP].
    nn_rows = [[[0, 9, 10], [0, 10, 8]]]
    report = cva_report([], gn, [], nn_rows, tp=2)
    assert report.crossing and ("N1", "N2") in report.crossing_pairs


def test_cva_cured_debt_does_not_cross():
    gn = [[0, 10, 10], [0, 10, 10]]
    # N1's month-1 due arrives one month late and is fully cured, N2 is
    # untouched: the late payment alone must not count as a crossing.
    nn_rows = [[[0, 0, 20], [0, 10, 10]]]
    report = cva_report([], gn, [], nn_rows, tp=2)
    assert not report.crossing
    assert report.cumulative["N1"][-1] == 0


def test_cva_curve_zero_thickness():
    with pytest.raises(FeatureError, match="thickness"):
        cva_curve([0, 0], [0, 0], 0)


def test_fair_value_closed_forms():
    flat = [[0] * 12 + [100]]
    assert fair_value(flat, 0).mean == 100
    eta = Fraction(2, 100)
    fv = fair_value(flat, eta)
    assert fv.mean == Fraction(100) / (1 + eta / 12) ** 12
    two = fair_value([[0] * 12 + [100], [0] * 13], 0)
    assert two.mean == 50
    assert two.quantile_of(100) == 1
    assert two.quantile_of(0) == Fraction(1, 2)


def test_fair_value_from_month_t():
    fv = fair_value([[0, 50, 50]], 0, t=2)
    assert fv.mean == 50


def test_irr_closed_form():
    flows = [0] * 12 + [110]
    result = irr(flows, 100)
    assert result.converged
    assert abs(result.annual - 0.10) < 1e-8
    assert abs(result.monthly - (1.1 ** (1 / 12) - 1)) < 1e-12


def test_irr_zero_rate_on_spot_settlement():
    result = irr([100, 0, 0], 100)
    assert result.converged and result.monthly == 0


def test_irr_negative_when_overpaying():
    result = irr([0, 0, 100], 105)
    assert result.converged and result.monthly < 0


def test_irr_rejects_degenerate_inputs():
    with pytest.raises(FeatureError):
        irr([0, 10], 0)
    with pytest.raises(FeatureError):
        irr([0, 0], 10)
    assert not irr([50, 0], 100).converged


def test_purchase_prices():
    assert purchase_price(100, 90) == 90
    assert purchase_price(80, 90) == 80
    shares = note_purchase_prices(100, [Fraction(2, 5), Fraction(3, 5)])
    assert shares == [40, 60]
    with pytest.raises(FeatureError, match="100%"):
        note_purchase_prices(100, [Fraction(1, 2)])


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_irr_reproduces_price(seed):
    rng = random.Random(seed)
    length = rng.randint(2, 30)
    flows = [0] * length
    for _ in range(rng.randint(1, 6)):
        flows[rng.randint(1, length - 1)] += rng.randint(1, 10_000)
    price = rng.randint(1, sum(flows) * 2)
    result = irr(flows, price)
    assert result.converged
    assert abs(present_value(flows, result.monthly) - price) <= 1e-8 * price
