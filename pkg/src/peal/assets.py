"""Asset-side model: exposures, portfolios and the deal timeline.

Money is held as integers in minor currency units so that every conservation
identity downstream can be checked with exact equality.  Time is a discrete
month index on a shared timeline whose origin is the earliest pooling month.
Exposure schedules are stored local to the exposure (index 0 = pooling month
of its portfolio, installments start at index 1); aggregate operations shift
them onto the deal timeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any

Series = list[int]


class DealError(ValueError):
    """A deal violates a structural invariant."""


@dataclass(frozen=True)
class Exposure:
    """A single income-generating asset with a monthly capital/interest schedule."""

    portfolio_index: int
    exposure_index: int
    capital: tuple[int, ...]
    interest: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.capital) != len(self.interest):
            raise DealError(
                f"exposure ({self.portfolio_index},{self.exposure_index}): "
                "capital and interest schedules must have equal length"
            )
        if len(self.capital) < 2:
            raise DealError("exposure schedules need at least months 0..1")
        if self.capital[0] != 0 or self.interest[0] != 0:
            raise DealError("first installment is due at month 1; index 0 must be zero")
        if any(c < 0 for c in self.capital) or any(i < 0 for i in self.interest):
            raise DealError("schedule values must be non-negative")

    @property
    def duration(self) -> int:
        """T_kn: last month index of the schedule."""
        return len(self.capital) - 1

    def installment(self, t: int) -> int:
        if t < 0 or t > self.duration:
            return 0
        return self.capital[t] + self.interest[t]

    @property
    def total_capital(self) -> int:
        return sum(self.capital)

    @property
    def total_interest(self) -> int:
        return sum(self.interest)

    def outstanding_capital(self, t: int) -> int:
        """Capital still due strictly after month t (local time)."""
        if t < 0:
            return self.total_capital
        return sum(self.capital[t + 1 :])

    def outstanding_interest(self, t: int) -> int:
        if t < 0:
            return self.total_interest
        return sum(self.interest[t + 1 :])


@dataclass(frozen=True)
class ScheduleAggregates:
    total_capital: int
    total_interest: int
    outstanding_capital: tuple[int, ...]
    outstanding_interest: tuple[int, ...]


def schedule_aggregates(e: Exposure) -> ScheduleAggregates:
    """Totals and outstanding (tail-sum) series of one exposure, local time."""
    oc = [e.outstanding_capital(t) for t in range(e.duration + 1)]
    oi = [e.outstanding_interest(t) for t in range(e.duration + 1)]
    return ScheduleAggregates(e.total_capital, e.total_interest, tuple(oc), tuple(oi))


@dataclass(frozen=True)
class Portfolio:
    """One cluster: exposures sharing a single risk profile."""

    index: int
    pooling_month: int
    exposures: tuple[Exposure, ...]
    profile: Any = None  # ClusterProfile; untyped here to avoid a cycle

    def __post_init__(self) -> None:
        if self.pooling_month < 0:
            raise DealError(f"portfolio {self.index}: pooling month must be >= 0")
        if not self.exposures:
            raise DealError(f"portfolio {self.index}: at least one exposure required")

    @property
    def size(self) -> int:
        return len(self.exposures)

    @property
    def duration(self) -> int:
        """T_k: portfolio duration on the deal timeline."""
        return max(e.duration for e in self.exposures) + self.pooling_month


@dataclass(frozen=True)
class Deal:
    """The asset side plus the liability horizon TP."""

    portfolios: tuple[Portfolio, ...]
    tp: int
    islamic: bool = False
    exposure_type: str = "CL"

    def __post_init__(self) -> None:
        if not self.portfolios:
            raise DealError("K >= 1 required: a deal needs at least one portfolio")
        if self.tp < 1:
            raise DealError("TP must be >= 1")
        if self.tp > self.horizon:
            raise DealError(f"TP={self.tp} exceeds the exposures' maximum duration T={self.horizon}")
        if self.islamic:
            for p in self.portfolios:
                for e in p.exposures:
                    if any(i != 0 for i in e.interest):
                        raise DealError(
                            f"islamic deal but exposure ({e.portfolio_index},"
                            f"{e.exposure_index}) has nonzero interest"
                        )

    @property
    def k(self) -> int:
        return len(self.portfolios)

    @property
    def horizon(self) -> int:
        """T: maximum duration over all portfolios, deal timeline."""
        return max(p.duration for p in self.portfolios)

    @property
    def pooling_origin(self) -> int:
        return min(p.pooling_month for p in self.portfolios)

    @property
    def rolling(self) -> bool:
        months = {p.pooling_month for p in self.portfolios}
        return len(months) > 1

    def exposures(self):
        """Iterate (portfolio, exposure) pairs in deterministic order."""
        for p in self.portfolios:
            for e in p.exposures:
                yield p, e


def total_exposure_count(deal: Deal) -> int:
    """N: total number of exposures across all portfolios."""
    return sum(p.size for p in deal.portfolios)


def deal_outstanding_balance(deal: Deal, t: int) -> int:
    """OB(t): total outstanding capital plus interest at deal month t."""
    if t < 0 or t > deal.horizon:
        raise DealError(f"t={t} outside 0..{deal.horizon}")
    total = 0
    for p, e in deal.exposures():
        local = t - p.pooling_month
        total += e.outstanding_capital(local) + e.outstanding_interest(local)
    return total


def normalize_timeline(deal: Deal) -> Deal:
    """Shift pooling months so the earliest one becomes the timeline origin."""
    origin = deal.pooling_origin
    if origin == 0:
        return deal
    portfolios = tuple(
        replace(p, pooling_month=p.pooling_month - origin) for p in deal.portfolios
    )
    return replace(deal, portfolios=portfolios)


def build_deal(
    schedules: list[list[tuple[list[int], list[int]]]],
    tp: int,
    pooling_months: list[int] | None = None,
    islamic: bool = False,
    exposure_type: str = "CL",
    profiles: list[Any] | None = None,
) -> Deal:
    """Assemble a deal from raw (capital, interest) schedule pairs per portfolio."""
    portfolios = []
    for k, exposures in enumerate(schedules, start=1):
        pool = pooling_months[k - 1] if pooling_months else 0
        profile = profiles[k - 1] if profiles else None
        exps = tuple(
            Exposure(k, n, tuple(cap), tuple(intr))
            for n, (cap, intr) in enumerate(exposures, start=1)
        )
        portfolios.append(Portfolio(k, pool, exps, profile))
    return normalize_timeline(Deal(tuple(portfolios), tp, islamic, exposure_type))
