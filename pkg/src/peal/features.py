"""Ongoing risk features: exposure performance, thickness, regulatory
capital, CVA with the subordination compliance test, fair value and IRR.

Discounting uses a flat annual inflation rate eta with monthly rate eta/12.
Statistics over scenario sets are exact rational means; only IRR resorts to
floating-point root finding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from scipy.optimize import brentq

from .assets import Deal, Exposure
from .blocks import gross_asset, scenario_installment
from .design import DesignError, WaterfallDesign
from .embedded import cost_of_recovery, excessive_recovery
from .scenarios import Scenario, ScenarioSet


class FeatureError(ValueError):
    """A feature cannot be computed on this input."""


DEFAULT_ETA = Fraction(2, 100)  # 2% annual


def _monthly_rate(eta) -> Fraction:
    return Fraction(eta) / 12


# ---------------------------------------------------------------------------
# Exposure performance


EP_STATES = ("full-performing", "performing", "non-performing", "super-performing")


@dataclass(frozen=True)
class ExposurePerformance:
    value: Fraction
    state: str


def exposure_performance(
    deal: Deal, e: Exposure, scn: Scenario, eta=DEFAULT_ETA, offset: int = 0
) -> ExposurePerformance:
    """Discounted net effect of the scenario on one exposure, with its state.

    Sums, up to the liability horizon, the installment deltas plus spot
    recoveries net of recovery expenses, each discounted at the monthly rate.
    Unaffected exposures score exactly zero and are full-performing.
    """
    occs = scn.for_exposure(e.portfolio_index, e.exposure_index)
    tp = deal.tp
    if not occs or min(o.time for o in occs) + offset >= tp:
        return ExposurePerformance(Fraction(0), "full-performing")
    rate = _monthly_rate(eta)
    r_s = scenario_installment(e, scn)
    cr = cost_of_recovery(e, scn, deal.horizon, offset)
    er = excessive_recovery(e, scn, deal.horizon, offset)
    spot = [0] * (deal.horizon + 1)
    for occ in occs:
        if occ.spot_amount and occ.spot_time is not None:
            t = occ.spot_time + offset
            if t <= deal.horizon:
                spot[t] += occ.spot_amount
    total = Fraction(0)
    for local_t in range(e.duration + 1):
        t = local_t + offset
        if t > tp:
            break
        delta = r_s[local_t] - e.installment(local_t)
        total += Fraction(delta) / (1 + rate) ** t
    for t in range(min(tp, deal.horizon) + 1):
        total += Fraction(spot[t] - cr[t] - er[t]) / (1 + rate) ** t
    if total < 0:
        state = "non-performing"
    elif total > 0:
        state = "super-performing"
    else:
        state = "performing"
    return ExposurePerformance(total, state)


def ep_histogram(deal: Deal, sset: ScenarioSet, eta=DEFAULT_ETA):
    """Per-exposure state counts over the scenario set."""
    hist: dict[tuple[int, int], dict[str, int]] = {}
    for p, e in deal.exposures():
        counts = dict.fromkeys(EP_STATES, 0)
        for scn in sset.scenarios:
            ep = exposure_performance(deal, e, scn, eta, p.pooling_month)
            counts[ep.state] += 1
        hist[(p.index, e.exposure_index)] = counts
    return hist


# ---------------------------------------------------------------------------
# Thickness


def outstanding_series(series):
    """OB(t) = sum of the series strictly after t (tail sums)."""
    length = len(series)
    out = [series[0] * 0] * length
    acc = series[0] * 0
    for t in range(length - 1, -1, -1):
        out[t] = acc
        acc += series[t]
    return out


@dataclass(frozen=True)
class RegulatoryThickness:
    ob: tuple  # per column: tuple over t
    obp: tuple
    ap: tuple
    dp: tuple
    thp: tuple
    th: tuple


def thickness_regulatory(gdm, d: WaterfallDesign) -> RegulatoryThickness:
    """Attachment/detachment thickness per column of a horizontal design.

    Refuses designs with vertical splits, where positions are not columns
    and the attachment-point construction is ill-posed; use thickness_peal.
    """
    if any(count > 1 for count in d.vs):
        raise DesignError(
            "regulatory thickness needs a strictly horizontal design; "
            "use the per-position tail-sum thickness for vertical slices"
        )
    width = len(gdm)
    length = len(gdm[0])
    ob = [outstanding_series(col) for col in gdm]
    obp = [sum(ob[p][t] for p in range(width)) for t in range(length)]
    ap = [[Fraction(0)] * length for _ in range(width)]
    dp = [[Fraction(0)] * length for _ in range(width)]
    thp = [[Fraction(0)] * length for _ in range(width)]
    th = [[Fraction(0)] * length for _ in range(width)]
    for t in range(length):
        if obp[t] <= 0:
            continue
        for p in range(width):
            junior_mass = sum(ob[i][t] for i in range(p + 1, width))
            ap[p][t] = Fraction(junior_mass) / Fraction(obp[t])
            dp[p][t] = Fraction(1) if p == 0 else ap[p - 1][t]
            thp[p][t] = dp[p][t] - ap[p][t]
            th[p][t] = thp[p][t] * Fraction(obp[t])
    return RegulatoryThickness(
        tuple(tuple(col) for col in ob),
        tuple(obp),
        tuple(tuple(col) for col in ap),
        tuple(tuple(col) for col in dp),
        tuple(tuple(col) for col in thp),
        tuple(tuple(col) for col in th),
    )


def thickness_peal(gross_rows):
    """TH per position as the tail sum of its gross dues; any design shape."""
    return [outstanding_series(row) for row in gross_rows]


# ---------------------------------------------------------------------------
# Regulatory capital


def _risk_weight(rw_table, i: int, quality: str):
    if (i, quality) in rw_table:
        return rw_table[(i, quality)]
    if quality in rw_table:
        return rw_table[quality]
    raise FeatureError(f"missing risk weight for vertical component {i} ({quality})")


def regulatory_capital(d: WaterfallDesign, gv, rw_table, car) -> list[list[Fraction]]:
    """RCN_y(t) = sum over the note's slices of OB_i(t) * RW_(i,q) * CAR.

    Cost positions carry a zero risk weight ex post and are not reported.
    """
    car = Fraction(car)
    ob = [outstanding_series(col) for col in gv]
    length = len(gv[0]) if gv else 0
    rcn = []
    for group in d.note_map:
        row = [Fraction(0)] * length
        for i in group:
            rw = Fraction(_risk_weight(rw_table, i, d.quality_of_vc(i)))
            for t in range(length):
                row[t] += Fraction(ob[i - 1][t]) * rw * car
        rcn.append(row)
    return rcn


# ---------------------------------------------------------------------------
# CVA and the subordination compliance test


@dataclass(frozen=True)
class CvaReport:
    curves: dict[str, tuple]  # position label -> CVA(t) series (per month)
    cumulative: dict[str, tuple]  # running shortfall curves
    settled: dict[str, tuple]  # never-recovered shortfall; drives the verdict
    skipped: tuple[str, ...]  # zero-thickness positions (no curve)
    crossing: bool
    crossing_pairs: tuple[tuple[str, str], ...]


def _mean_rows(rows):
    count = len(rows)
    length = len(rows[0])
    return [Fraction(sum(r[t] for r in rows)) / count for t in range(length)]


def cva_curve(gross, net_mean, th0):
    """CVA(t) = (G(t) - mean net(t)) / TH(0): normalized expected shortfall."""
    if th0 == 0:
        raise FeatureError("zero total thickness: CVA undefined")
    return [(Fraction(g) - Fraction(n)) / Fraction(th0) for g, n in zip(gross, net_mean)]


def _curves_cross(a, b, tp: int) -> bool:
    """True iff the difference changes strict sign somewhere on (0, TP]."""
    signs = set()
    for t in range(1, min(tp, len(a) - 1) + 1):
        diff = a[t] - b[t]
        if diff > 0:
            signs.add(1)
        elif diff < 0:
            signs.add(-1)
    return signs == {1, -1}


def cva_report(gc, gn, nc_rows, nn_rows, tp: int) -> CvaReport:
    """CVA curves for every position plus the pairwise crossing verdict.

    The per-month curves follow the printed formula, but they flip sign at
    every debt cure (a due paid one period late), so the verdict is computed
    on the settled shortfall instead: the running shortfall net of whatever
    is recovered later (its suffix minimum).  A transient hump that is fully
    cured is liquidity timing and vanishes; what remains at month t is loss
    never made good, so an intersection genuinely means a lower tier ended
    less hurt at some time and more hurt at another.
    """
    labeled: list[tuple[str, list, list]] = []
    for x, row in enumerate(gc, start=1):
        labeled.append((f"C{x}", row, _mean_rows([r[x - 1] for r in nc_rows])))
    for y, row in enumerate(gn, start=1):
        labeled.append((f"N{y}", row, _mean_rows([r[y - 1] for r in nn_rows])))
    curves: dict[str, tuple] = {}
    cumulative: dict[str, tuple] = {}
    settled: dict[str, tuple] = {}
    skipped: list[str] = []
    for label, gross, net_mean in labeled:
        th0 = sum(gross[1:])
        if th0 == 0:
            skipped.append(label)
            continue
        monthly = cva_curve(gross, net_mean, th0)
        curves[label] = tuple(monthly)
        running: list[Fraction] = []
        acc = Fraction(0)
        for value in monthly:
            acc += value
            running.append(acc)
        cumulative[label] = tuple(running)
        floor: list[Fraction] = list(running)
        for t in range(len(floor) - 2, -1, -1):
            floor[t] = min(floor[t], floor[t + 1])
        settled[label] = tuple(floor)
    crossing_pairs = []
    labels = list(settled)
    for a in range(len(labels)):
        for b in range(a + 1, len(labels)):
            if _curves_cross(settled[labels[a]], settled[labels[b]], tp):
                crossing_pairs.append((labels[a], labels[b]))
    return CvaReport(
        curves, cumulative, settled, tuple(skipped),
        bool(crossing_pairs), tuple(crossing_pairs),
    )


# ---------------------------------------------------------------------------
# Fair value


@dataclass(frozen=True)
class FairValue:
    mean: Fraction
    values: tuple  # per-scenario discounted values, scenario order

    def quantile_of(self, price) -> Fraction:
        """Empirical CDF at the price: share of scenarios valued <= price."""
        price = Fraction(price)
        return Fraction(sum(1 for v in self.values if v <= price), len(self.values))

    def cdf_samples(self, points: int = 101):
        """(value, quantile) pairs over the sorted support for reporting."""
        ordered = sorted(self.values)
        count = len(ordered)
        samples = []
        for k in range(points):
            rank = min(count - 1, (k * (count - 1)) // max(1, points - 1))
            samples.append((ordered[rank], Fraction(rank + 1, count)))
        return samples


def fair_value(nn_rows_y, eta=DEFAULT_ETA, t: int = 0) -> FairValue:
    """Mean discounted remaining note cash flows from month t onward."""
    rate = _monthly_rate(eta)
    values = []
    for row in nn_rows_y:
        total = Fraction(0)
        for tau in range(t, len(row)):
            total += Fraction(row[tau]) / (1 + rate) ** tau
        values.append(total)
    mean = sum(values) / len(values)
    return FairValue(mean, tuple(values))


# ---------------------------------------------------------------------------
# IRR


@dataclass(frozen=True)
class IrrResult:
    monthly: float | None
    annual: float | None
    converged: bool


def present_value(cashflows, monthly_rate: float) -> float:
    return sum(float(cf) / (1.0 + monthly_rate) ** t for t, cf in enumerate(cashflows))


def irr(cashflows, price) -> IrrResult:
    """Monthly rate equating the discounted cash flows to the price.

    Bracketed root finding starting on (-0.99, 10); the upper end doubles
    until the objective changes sign, so deeply discounted prices still
    resolve.  Reports both the monthly root and its compound annualization.
    No sign change in the bracket means no solution exists.
    """
    price = float(price)
    if price <= 0:
        raise FeatureError("price must be positive")
    flows = [float(cf) for cf in cashflows]
    if not any(flows):
        raise FeatureError("cash flows are all zero")
    if all(cf == 0 for cf in flows[1:]):
        # Degenerate: value is rate-independent; r=0 iff it matches the price.
        if math.isclose(flows[0], price, rel_tol=1e-12, abs_tol=1e-9):
            return IrrResult(0.0, 0.0, True)
        return IrrResult(None, None, False)

    def objective(r: float) -> float:
        return present_value(flows, r) - price

    lo, hi = -0.99, 10.0
    f_lo, f_hi = objective(lo), objective(hi)
    while f_lo * f_hi > 0 and f_hi > 0 and hi < 1e9:
        hi *= 2.0
        f_hi = objective(hi)
    if f_lo == 0.0:
        root = lo
    elif f_hi == 0.0:
        root = hi
    elif f_lo * f_hi > 0:
        return IrrResult(None, None, False)
    else:
        root = brentq(objective, lo, hi, xtol=1e-14, rtol=1e-15, maxiter=200)
    annual = (1.0 + root) ** 12 - 1.0
    return IrrResult(root, annual, True)


def purchase_price(c0, fvy0):
    """CY0 = min(C0, FVY(0)): what the investor pool actually pays."""
    return min(Fraction(c0), Fraction(fvy0))


def note_purchase_prices(cy0, cpy):
    """CY_(0,y) = cpy_y * CY0; the shares must partition the purchase."""
    shares = [Fraction(c) for c in cpy]
    if sum(shares) != 1:
        raise FeatureError(f"purchase shares sum to {sum(shares)}, not 100%")
    return [share * Fraction(cy0) for share in shares]


@dataclass(frozen=True)
class GrossNetIrr:
    girr: IrrResult
    nirr: IrrResult


def gross_net_irr(gn_y, nn_y_mean, price_y) -> GrossNetIrr:
    """Scheduled vs realized annual growth rate of one note at its price."""
    return GrossNetIrr(irr(gn_y, price_y), irr(nn_y_mean, price_y))
