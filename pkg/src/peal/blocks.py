"""Basic inbound building blocks: gross asset, asset, loss and event recovery.

All functions are pure in (deal, scenario) and return integer series indexed
by deal month t = 0..T, so scenarios can be processed in parallel.  Exposure
occurrence times are local to the exposure; the portfolio pooling month
shifts them onto the deal timeline.
"""

from __future__ import annotations

from .assets import Deal, Exposure, Series
from .scenarios import EVENT_CATALOGUE, BASE_SCENARIO, EventOccurrence, Scenario, ScenarioError


def gross_asset(deal: Deal) -> Series:
    """GA(t): base-scenario inbound cash flows, summed over all exposures."""
    ga = [0] * (deal.horizon + 1)
    for p, e in deal.exposures():
        for t in range(e.duration + 1):
            ga[t + p.pooling_month] += e.installment(t)
    return ga


def _leg_gates(occs: tuple[EventOccurrence, ...]) -> tuple[int | None, int | None, int | None]:
    """First capital gate, first interest gate, and first reactivation month."""
    cap = [o.capital_time for o in occs if o.capital_time is not None]
    intr = [o.interest_time for o in occs if o.interest_time is not None]
    rtl = [o.time for o in occs if o.kind == "trl"]
    gate_c = min(cap) if cap else None
    gate_i = min(intr) if intr else None
    t_rtl = min(rtl) if rtl else None
    return gate_c, gate_i, t_rtl


def scenario_installment(e: Exposure, scn: Scenario) -> Series:
    """R^(s)(t) for one exposure, local time: installments after event gating.

    Continuous events zero the affected leg from their first occurrence; a
    return-to-life occurrence reactivates both legs from its month on.  A
    euribor occurrence shifts the interest leg additively from its month.
    """
    occs = scn.for_exposure(e.portfolio_index, e.exposure_index)
    gate_c, gate_i, t_rtl = _leg_gates(occs)
    if t_rtl is not None:
        anchor = gate_c if gate_c is not None else gate_i
        if anchor is not None and t_rtl < anchor:
            raise ScenarioError("return-to-life before the gating event")
    shifts = [(o.time, o.interest_shift) for o in occs if o.interest_shift != 0]

    out = [0] * (e.duration + 1)
    for t in range(e.duration + 1):
        interest = e.interest[t]
        for t_eu, shift in shifts:
            if t >= t_eu and interest > 0:
                interest = max(0, interest + shift)
        alive_c = gate_c is None or t < gate_c or (t_rtl is not None and t >= t_rtl)
        alive_i = gate_i is None or t < gate_i or (t_rtl is not None and t >= t_rtl)
        out[t] = (e.capital[t] if alive_c else 0) + (interest if alive_i else 0)
    return out


def asset_block(deal: Deal, scn: Scenario) -> Series:
    """A^(s)(t): scenario inbound cash flows over all exposures."""
    a = [0] * (deal.horizon + 1)
    for p, e in deal.exposures():
        r = scenario_installment(e, scn)
        for t, value in enumerate(r):
            a[t + p.pooling_month] += value
    return a


def loss_block(deal: Deal, scn: Scenario) -> Series:
    """L^(s)(t) = GA(t) - A^(s)(t)."""
    ga = gross_asset(deal)
    a = asset_block(deal, scn)
    return [g - x for g, x in zip(ga, a)]


def loss_block_mece(deal: Deal, scn: Scenario) -> Series:
    """L^(s)(t) computed from base installments and gating indicators.

    Valid when at most one continuous event affects each exposure and there
    is no reactivation; cross-checks the subtraction form exactly.
    """
    loss = [0] * (deal.horizon + 1)
    for p, e in deal.exposures():
        occs = scn.for_exposure(e.portfolio_index, e.exposure_index)
        gates = [
            o.time
            for o in occs
            if o.capital_time is not None or o.interest_time is not None
        ]
        if len(gates) > 1 or any(o.kind == "trl" for o in occs):
            raise ScenarioError("MECE loss form needs at most one gating event per exposure")
        for t in range(e.duration + 1):
            hit = sum(1 for g in gates if t >= g)
            loss[t + p.pooling_month] += e.installment(t) * hit
    return loss


def cumulative_loss(deal: Deal, scn: Scenario) -> int:
    """L^(s): lifetime total of the loss series."""
    return sum(loss_block(deal, scn))


def event_recovery(deal: Deal, scn: Scenario) -> Series:
    """E^(s)(t): spot recoveries (prepayment payouts, collateral recoveries, ...)."""
    e_series = [0] * (deal.horizon + 1)
    for p, e in deal.exposures():
        for occ in scn.for_exposure(e.portfolio_index, e.exposure_index):
            if occ.spot_amount and occ.spot_time is not None:
                t = occ.spot_time + p.pooling_month
                if t <= deal.horizon:
                    e_series[t] += occ.spot_amount
    return e_series


def base_blocks(deal: Deal) -> tuple[Series, Series, Series, Series]:
    """(GA, A, L, E) in the base scenario: A=GA, L=0, E=0."""
    ga = gross_asset(deal)
    zero = [0] * len(ga)
    return ga, list(ga), list(zero), list(zero)


def scenario_blocks(deal: Deal, scn: Scenario) -> tuple[Series, Series, Series, Series]:
    """(GA, A, L, E) for one scenario; L = GA - A by construction."""
    if scn.is_base:
        return base_blocks(deal)
    ga = gross_asset(deal)
    a = asset_block(deal, scn)
    loss = [g - x for g, x in zip(ga, a)]
    return ga, a, loss, event_recovery(deal, scn)
