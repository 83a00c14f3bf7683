"""Composite blocks and the empirical tranching partition."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from peal.blocks import gross_asset, scenario_blocks
from peal.embedded import sse
from peal.scenarios import BASE_SCENARIO
from peal.tranching import (
    empirical_quantile,
    icf,
    net_loss,
    substantial_margin,
    taf,
    total_loss,
    total_net_loss,
    tranche,
)


def test_icf_equals_ga_without_endowment(desk_deal):
    ga = gross_asset(desk_deal)
    assert icf(ga, [0, 0, 0, 0], 3) == [0, 92, 87, 41]
    assert icf(ga, [10, 0, 0, 0], 3) == [10, 92, 87, 41]


def test_taf_desk_default(desk_deal, desk_default_scenario):
    _, a, _, e_series = scenario_blocks(desk_deal, desk_default_scenario)
    assert taf(a, e_series, [0] * 4, 3) == [0, 92, 32, 81]


def test_taf_base_equals_ga(desk_deal):
    ga, a, _, e_series = scenario_blocks(desk_deal, BASE_SCENARIO)
    assert taf(a, e_series, [0] * 4, 3) == ga


def test_total_net_loss_desk_default(desk_deal, desk_default_scenario):
    ga, a, loss, e_series = scenario_blocks(desk_deal, desk_default_scenario)
    icf_series = icf(ga, [0] * 4, 3)
    taf_series = taf(a, e_series, [0] * 4, 3)
    sse_series = sse(desk_deal, desk_default_scenario)
    assert total_net_loss(icf_series, taf_series, sse_series, 3) == [0, 0, 55, -35]
    assert net_loss(loss, e_series, 3) == [0, 0, 55, -40]
    tl = total_loss(loss, [0] * 4, [0] * 4, sse_series, 3)
    tnl = total_net_loss(icf_series, taf_series, sse_series, 3)
    # TL and TNL differ exactly by the spot recoveries.
    assert tl == [n + e for n, e in zip(tnl, e_series)]


def test_quantile_lower_rank():
    assert empirical_quantile([0, 55], Fraction(1, 2)) == 55
    assert empirical_quantile([3, 1, 2], Fraction(1, 2)) == 2
    assert empirical_quantile([5, 5, 5], Fraction(99, 100)) == 5
    with pytest.raises(ValueError):
        empirical_quantile([1, 2], 1)


def test_two_point_tranche_example():
    """TNL(2) in {55, 0} at alpha=0.5: mu=27.5, VaR=55, SLT=27.5."""
    rows = [[0, 0, 55, -35], [0, 0, 0, 0]]
    icf_series = [0, 92, 87, 41]
    tr = tranche(rows, icf_series, Fraction(1, 2))
    assert tr.mu[2] == Fraction(55, 2)
    assert tr.flt[2] == Fraction(55, 2)
    assert tr.var[2] == 55
    assert tr.slt[2] == Fraction(55, 2)
    assert tr.clt[2] == 87 - 55
    # Negative mean month clamps FLT to zero.
    assert tr.mu[3] < 0 and tr.flt[3] == 0


def test_tranche_partition_is_exact():
    rows = [[0, 10, 20, 5], [0, 0, 60, -10], [0, 5, 5, 5]]
    icf_series = [0, 92, 87, 41]
    tr = tranche(rows, icf_series, Fraction(2, 3))
    for t in range(4):
        assert tr.flt[t] + tr.slt[t] + tr.clt[t] == icf_series[t]
        assert tr.flt[t] >= 0 and tr.slt[t] >= 0


def test_all_base_scenarios_put_everything_complementary():
    rows = [[0, 0, 0, 0]] * 3
    tr = tranche(rows, [0, 92, 87, 41], Fraction(99, 100))
    assert set(tr.flt) == {0} and set(tr.slt) == {0}
    assert list(tr.clt) == [0, 92, 87, 41]


def test_tranche_needs_two_scenarios():
    with pytest.raises(ValueError, match="two scenarios"):
        tranche([[0]], [0], Fraction(1, 2))


def test_substantial_margin_passes_on_identical_scenarios():
    rows = [[0, 10, 10], [0, 10, 10]]
    tr = tranche(rows, [0, 20, 20], Fraction(1, 2))
    margin = substantial_margin(rows, tr.flt)
    assert margin.applicable and margin.sigma_tflt == 0
    assert margin.sm == 0 and margin.passed


def test_substantial_margin_with_clipped_negatives():
    """Per-month negatives clipped in FLT but kept in TFLT force sm >= 0."""
    rows = [[0, 30, -10], [0, 10, -5]]
    tr = tranche(rows, [0, 50, 50], Fraction(1, 2))
    margin = substantial_margin(rows, tr.flt)
    assert margin.applicable
    assert margin.sm is not None and margin.sm >= 0


def test_substantial_margin_not_applicable_on_gain():
    rows = [[0, -5, 0], [0, -10, 0]]
    tr = tranche(rows, [0, 10, 10], Fraction(1, 2))
    margin = substantial_margin(rows, tr.flt)
    assert not margin.applicable and not margin.passed


tnl_rows = st.lists(
    st.lists(st.integers(-100, 100), min_size=4, max_size=4),
    min_size=2,
    max_size=12,
)


@given(tnl_rows)
def test_partition_property(rows):
    icf_series = [200] * 4
    tr = tranche(rows, icf_series, Fraction(3, 4))
    for t in range(4):
        assert tr.flt[t] + tr.slt[t] + tr.clt[t] == 200
        assert tr.flt[t] >= 0 and tr.slt[t] >= 0
        # VaR is the mean of an upper tail, so it can never sit below mu.
        assert tr.var[t] >= tr.mu[t]
