"""Composite inbound blocks and the empirical loss tranching.

ICF/TAF/TL/NL/TNL are exact integer (or rational) series on the liability
horizon 0..TP.  The tranching partitions ICF(t) into first-loss (expected),
second-loss (tail mean above an empirical quantile) and complementary
tranches; all statistics are computed with rational arithmetic so the
partition FLT+SLT+CLT = ICF holds exactly at every month.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

Num = Fraction | int
NumSeries = list


def _clip(series, tp: int):
    """Restrict a series to the liability horizon 0..TP, zero-padding."""
    out = list(series[: tp + 1])
    out += [0] * (tp + 1 - len(out))
    return out


def icf(ga, z_b, tp: int):
    """ICF(t) = GA(t) + z_b(t): maximum endowment given the base inputs."""
    ga = _clip(ga, tp)
    z_b = _clip(z_b, tp)
    return [g + z for g, z in zip(ga, z_b)]


def taf(a, e_series, z_s, tp: int):
    """TAF^(s)(t) = A(t) + E(t) + z_s(t); zero beyond TP by construction."""
    a = _clip(a, tp)
    e_series = _clip(e_series, tp)
    z_s = _clip(z_s, tp)
    return [x + e + z for x, e, z in zip(a, e_series, z_s)]


def net_loss(loss, e_series, tp: int):
    """NL^(s)(t) = L(t) - E(t)."""
    loss = _clip(loss, tp)
    e_series = _clip(e_series, tp)
    return [l - e for l, e in zip(loss, e_series)]


def total_loss(loss, z_b, z_s, sse_s, tp: int):
    """TL^(s)(t) = L(t) + [z_b(t) - z_s(t)] + SSE(t)."""
    loss = _clip(loss, tp)
    z_b = _clip(z_b, tp)
    z_s = _clip(z_s, tp)
    sse_s = _clip(sse_s, tp)
    return [l + (zb - zs) + s for l, zb, zs, s in zip(loss, z_b, z_s, sse_s)]


def total_net_loss(icf_series, taf_series, sse_s, tp: int):
    """TNL^(s)(t) = ICF(t) - TAF(t) + SSE(t)."""
    icf_series = _clip(icf_series, tp)
    taf_series = _clip(taf_series, tp)
    sse_s = _clip(sse_s, tp)
    return [i - a + s for i, a, s in zip(icf_series, taf_series, sse_s)]


@dataclass(frozen=True)
class Tranching:
    """FLT/SLT/CLT time series partitioning ICF(t), plus the tail statistics."""

    flt: tuple[Fraction, ...]
    slt: tuple[Fraction, ...]
    clt: tuple[Fraction, ...]
    mu: tuple[Fraction, ...]
    var: tuple[Fraction, ...]
    alpha: Fraction


def empirical_quantile(values, alpha: Fraction) -> Num:
    """Lower-rank empirical quantile: first order statistic above the alpha mass.

    Guarantees the upper-tail set {x >= q} is non-empty for alpha < 1.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    ordered = sorted(values)
    rank = int(math.floor(alpha * len(ordered)))
    return ordered[min(rank, len(ordered) - 1)]


def tranche(tnl_rows, icf_series, alpha) -> Tranching:
    """Partition ICF(t) into loss tranches from per-scenario TNL series.

    FLT(t) is the clamped expected loss; SLT(t) the tail mean above the
    empirical alpha-quantile minus FLT, clamped at zero; CLT the remainder.
    """
    if len(tnl_rows) < 2:
        raise ValueError("tranching needs at least two scenarios")
    alpha = Fraction(alpha) if not isinstance(alpha, Rational) else alpha
    count = len(tnl_rows)
    length = len(icf_series)
    flt, slt, clt, mu_series, var_series = [], [], [], [], []
    for t in range(length):
        column = [row[t] for row in tnl_rows]
        mu = Fraction(sum(column), count)
        q = empirical_quantile(column, alpha)
        tail = [x for x in column if x >= q]
        var = Fraction(sum(tail), len(tail))
        f = max(Fraction(0), mu)
        s = max(Fraction(0), var - f)
        flt.append(f)
        slt.append(s)
        clt.append(Fraction(icf_series[t]) - s - f)
        mu_series.append(mu)
        var_series.append(Fraction(var))
    return Tranching(tuple(flt), tuple(slt), tuple(clt), tuple(mu_series), tuple(var_series), Fraction(alpha))


@dataclass(frozen=True)
class SubstantialMargin:
    tflt: Fraction
    sigma_tflt: float
    sm: float | None
    applicable: bool
    passed: bool


def substantial_margin(tnl_rows, flt) -> SubstantialMargin:
    """Check that the ongoing FLT covers the historic total-FLT by a margin.

    TFLT is the mean over scenarios of the summed TNL; the margin passes when
    sm = sum FLT / TFLT - 1 covers at least one standard deviation of TFLT.
    Non-positive TFLT makes the test not applicable.
    """
    count = len(tnl_rows)
    totals = [sum(row) for row in tnl_rows]
    tflt = Fraction(sum(totals), count)
    mean_sq = Fraction(sum(x * x for x in totals), count)
    variance = mean_sq - tflt * tflt
    sigma = math.sqrt(float(variance)) if variance > 0 else 0.0
    if tflt <= 0:
        return SubstantialMargin(tflt, sigma, None, applicable=False, passed=False)
    sm = float(Fraction(sum(flt)) / tflt - 1)
    passed = sm >= sigma / float(tflt)
    return SubstantialMargin(tflt, sigma, sm, applicable=True, passed=passed)
