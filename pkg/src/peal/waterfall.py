"""Net dimensioning: the recursive waterfall allocating realized funds.

The gross dimensioning matrix (GDM) holds the amounts due per horizontal
component in strict payment priority, with the embedded super-senior layer
as the first column.  Per month, available funds (TAF plus advances carried
forward) meet total dues (TGP plus outstanding debts) through the TNP
recursion; TNP is then poured left to right into the columns, accumulating
per-column debts for unpaid dues.  All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .design import WaterfallDesign


def gross_dimensioning_matrix(gh, buffer_credit=None):
    """GDM columns in priority order; an optional buffer credit raises the
    last column's dues so excess scenario cash reaches the lowest tier."""
    columns = [list(col) for col in gh]
    if buffer_credit is not None:
        last = columns[-1]
        for t, amount in enumerate(buffer_credit[: len(last)]):
            last[t] += amount
    return columns


def total_gross_position(gdm):
    """TGP(t): row sums of the gross dimensioning matrix."""
    length = len(gdm[0])
    return [sum(col[t] for col in gdm) for t in range(length)]


def step_indicator(x) -> int:
    """h(x): 1 iff x > 0 — marks months where payments occur."""
    return 1 if x > 0 else 0


@dataclass(frozen=True)
class NetPositionState:
    tnp: tuple
    adv: tuple
    dbt: tuple
    paf: tuple
    tad: tuple


def total_net_position(taf, tgp) -> NetPositionState:
    """TNP recursion: funds meet dues with advances and debts carried.

    PAF(t) = TAF(t) + ADV(t-1); TAD(t) = TGP(t) + DBT(t-1)*h(TGP(t));
    TNP = min(PAF, TAD); ADV carries the surplus, DBT the shortfall (debts
    update only at payment months and carry otherwise).
    """
    length = len(taf)
    tnp, adv, dbt, paf_s, tad_s = [], [], [], [], []
    adv_prev = 0
    dbt_prev = 0
    for t in range(length):
        paf = taf[t] + adv_prev
        pays = step_indicator(tgp[t])
        tad = tgp[t] + dbt_prev * pays
        net = min(paf, tad)
        adv_prev = max(paf - tad, 0)
        dbt_prev = tad - net if pays else dbt_prev
        tnp.append(net)
        adv.append(adv_prev)
        dbt.append(dbt_prev)
        paf_s.append(paf)
        tad_s.append(tad)
    return NetPositionState(tuple(tnp), tuple(adv), tuple(dbt), tuple(paf_s), tuple(tad_s))


@dataclass(frozen=True)
class AllocationResult:
    tgp: tuple
    state: NetPositionState
    ndm: tuple  # per column: tuple over t
    dbt_columns: tuple  # per column: tuple over t
    leftover: tuple  # RNP after the last column, per t

    @property
    def tnp(self) -> tuple:
        return self.state.tnp


def net_dimensioning_matrix(state: NetPositionState, gdm) -> AllocationResult:
    """Pour TNP(t) into the columns left to right, debts cured when funded.

    At a payment month each column may receive its current due plus its
    outstanding debt, capped by the funds remaining after senior columns;
    the unpaid remainder becomes the column's new debt.
    """
    width = len(gdm)
    length = len(gdm[0])
    tgp = total_gross_position(gdm)
    ndm = [[0] * length for _ in range(width)]
    dbt_cols = [[0] * length for _ in range(width)]
    leftover = [0] * length
    debts = [0] * width
    for t in range(length):
        remaining = state.tnp[t]
        if step_indicator(tgp[t]):
            for j in range(width):
                due = gdm[j][t] + debts[j]
                paid = min(due, remaining)
                debts[j] = due - paid
                remaining -= paid
                ndm[j][t] = paid
                dbt_cols[j][t] = debts[j]
        else:
            for j in range(width):
                dbt_cols[j][t] = debts[j]
        leftover[t] = remaining
    return AllocationResult(
        tuple(tgp),
        state,
        tuple(tuple(col) for col in ndm),
        tuple(tuple(col) for col in dbt_cols),
        tuple(leftover),
    )


def allocate(taf, gdm) -> AllocationResult:
    """Full per-scenario waterfall: TNP recursion plus column allocation."""
    tgp = total_gross_position(gdm)
    state = total_net_position(taf, tgp)
    return net_dimensioning_matrix(state, gdm)


def net_verticals(result: AllocationResult, d: WaterfallDesign):
    """NV_i(t) = NDM_j(t) * v_i: pari-passu split within each column."""
    length = len(result.ndm[0])
    nv = []
    for i in range(1, d.v + 1):
        j = d.hc_of_vc(i)
        v_i = Fraction(d.vc_fraction(i))
        nv.append([v_i * result.ndm[j - 1][t] for t in range(length)])
    return nv


def net_positions(nv, d: WaterfallDesign):
    """NC_x / NN_y: mapped sums of net-dimensioned vertical components."""
    length = len(nv[0]) if nv else 0

    def mapped(groups):
        return [
            [sum(nv[i - 1][t] for i in group) for t in range(length)]
            for group in groups
        ]

    return mapped(d.cost_map), mapped(d.note_map)


def position_losses(gross, net):
    """LC_x / LN_y: per-month gross due minus net received."""
    return [
        [g - n for g, n in zip(g_row, n_row)]
        for g_row, n_row in zip(gross, net)
    ]
