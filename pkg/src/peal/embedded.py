"""Embedded positions: super-senior (EC, CR, ER) and super-junior (buffer).

All are identically zero in the base scenario.  The super-senior series SSE
behaves as an additional loss; the buffer is excess cash (A above GA) routed
to the last payment-priority column.
"""

from __future__ import annotations

from fractions import Fraction

from .assets import Deal, Exposure, Series
from .blocks import asset_block, gross_asset
from .scenarios import Scenario


def cost_of_recovery(e: Exposure, scn: Scenario, horizon: int, offset: int = 0) -> Series:
    """CR(t) for one exposure on the deal timeline."""
    cr = [0] * (horizon + 1)
    for occ in scn.for_exposure(e.portfolio_index, e.exposure_index):
        if occ.recovery_cost and occ.cost_time is not None:
            t = occ.cost_time + offset
            if t <= horizon:
                cr[t] += occ.recovery_cost
    return cr


def excessive_recovery(e: Exposure, scn: Scenario, horizon: int, offset: int = 0) -> Series:
    """ER(t): recovered value above outstanding capital plus recovery costs.

    The outstanding capital is taken entering the default month; the excess
    lands exactly at the recovery month.
    """
    er = [0] * (horizon + 1)
    cr = cost_of_recovery(e, scn, horizon, offset)
    for occ in scn.for_exposure(e.portfolio_index, e.exposure_index):
        if occ.kind != "de" or occ.spot_time is None or occ.spot_amount == 0:
            continue
        t_rec = occ.spot_time + offset
        if t_rec > horizon:
            continue
        oc_at_default = e.outstanding_capital(occ.time - 1)
        cum_cost = sum(cr[: t_rec + 1])
        er[t_rec] += max(0, occ.spot_amount - oc_at_default - cum_cost)
    return er


def sse(deal: Deal, scn: Scenario) -> Series:
    """SSE^(s)(t) = EC(t) + sum over exposures of CR(t) + ER(t)."""
    horizon = deal.horizon
    out = [0] * (horizon + 1)
    for t, amount in scn.extra_costs:
        if 0 <= t <= horizon:
            out[t] += amount
    for p, e in deal.exposures():
        cr = cost_of_recovery(e, scn, horizon, p.pooling_month)
        er = excessive_recovery(e, scn, horizon, p.pooling_month)
        for t in range(horizon + 1):
            out[t] += cr[t] + er[t]
    return out


def sse_mean(sse_rows: list[Series]) -> list[Fraction]:
    """Average super-senior embedded series over a scenario set, exact."""
    if not sse_rows:
        raise ValueError("at least one scenario required")
    count = len(sse_rows)
    length = len(sse_rows[0])
    return [Fraction(sum(row[t] for row in sse_rows), count) for t in range(length)]


def buffer(deal: Deal, scn: Scenario) -> Series:
    """B^(s)(t) = max(0, A(t) - GA(t)): excess cash from positive variations."""
    ga = gross_asset(deal)
    a = asset_block(deal, scn)
    return [max(0, x - g) for g, x in zip(ga, a)]
