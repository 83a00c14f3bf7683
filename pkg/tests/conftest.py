"""Shared fixtures: the two-exposure desk deal and canonical designs."""

from __future__ import annotations

from fractions import Fraction

import pytest

from peal.assets import build_deal
from peal.design import normalize_design, vertical_retention_design
from peal.frequencies import FrequencySchedule
from peal.scenarios import ClusterProfile, EventOccurrence, Scenario


@pytest.fixture
def desk_deal():
    """Two exposures, three months, TP=3: the hand-checked reference deal."""
    return build_deal(
        [[
            ([0, 50, 50, 0], [0, 10, 5, 0]),
            ([0, 30, 30, 40], [0, 2, 2, 1]),
        ]],
        tp=3,
    )


@pytest.fixture
def desk_default_scenario():
    """Default on exposure 1 at month 2, RV=40 at month 3, cost 5 at month 3."""
    occ = EventOccurrence(
        "de", 2, capital_time=2, interest_time=2,
        spot_amount=40, spot_time=3, recovery_cost=5, cost_time=3,
    )
    return Scenario(id=0, seed=1, occurrences={(1, 1): (occ,)})


@pytest.fixture
def retention_design():
    """The worked V=8 structure with a 5% vertical retention note."""
    return normalize_design(vertical_retention_design(Fraction(5, 100)))


@pytest.fixture
def monthly_schedule(retention_design):
    return FrequencySchedule.uniform(12, retention_design.v)


def loss_profile(hazard: float = 0.05, **overrides) -> ClusterProfile:
    """A plain default-risk profile for generator-based tests."""
    params = dict(
        hazards={"de": hazard},
        recovery_fraction=0.4,
        recovery_lag=2,
        recovery_cost=0,
    )
    params.update(overrides)
    return ClusterProfile(**params)
