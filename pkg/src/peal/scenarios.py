"""Event calculus and Monte Carlo scenario generation.

An event either gates an exposure's future installments (continuous) or pays
a one-off amount (spot).  A scenario is one joint assignment of event
occurrences across all exposures; the base scenario has none.  Generation is
deterministic given (config, master seed): every scenario draws from its own
seeded stream, so the set can be regenerated or parallelized bit-identically.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from .assets import Deal, Exposure, Portfolio


class ScenarioError(ValueError):
    """Invalid event configuration or occurrence."""


@dataclass(frozen=True)
class EventKind:
    """One entry of the list of events: code plus how it acts on cash flows."""

    code: str
    temporal_class: str  # "spot" | "continuous"
    affects: str = "both"  # "capital" | "interest" | "both"
    polarity: str = "negative"  # "negative" | "positive" | "hybrid"
    extreme: bool = False


EVENT_CATALOGUE: dict[str, EventKind] = {
    k.code: k
    for k in [
        EventKind("pe", "continuous", "both", "negative"),
        EventKind("de", "continuous", "both", "negative"),
        EventKind("dh", "continuous", "both", "negative"),
        EventKind("npd", "continuous", "both", "negative"),
        EventKind("jl", "continuous", "both", "negative"),
        EventKind("cd", "spot", "both", "negative"),
        EventKind("eu", "continuous", "interest", "hybrid"),
        EventKind("fr", "continuous", "both", "negative"),
        EventKind("imp", "continuous", "both", "negative"),
        EventKind("rr", "spot", "both", "hybrid"),
        EventKind("sp", "spot", "both", "hybrid"),
        EventKind("tm", "continuous", "both", "negative", extreme=True),
        EventKind("trl", "continuous", "both", "positive"),
        EventKind("tr", "spot", "both", "hybrid"),
        EventKind("ts", "spot", "both", "hybrid"),
        EventKind("nr", "continuous", "both", "hybrid"),
        EventKind("oi", "continuous", "both", "negative", extreme=True),
        EventKind("en", "continuous", "both", "negative", extreme=True),
    ]
}

# Events applicable per exposure type: (regular, extreme).
TYPE_EVENTS: dict[str, tuple[frozenset[str], frozenset[str]]] = {
    "QP": (frozenset({"pe", "dh"}), frozenset({"tm", "oi"})),
    "QS": (frozenset({"pe", "dh", "npd", "jl"}), frozenset({"tm", "oi"})),
    "CL": (frozenset({"pe", "de", "eu", "trl"}), frozenset({"tm"})),
    "EA": (frozenset({"imp", "fr", "ts", "sp"}), frozenset({"en"})),
    "NE": (frozenset({"fr", "trl", "rr", "tr"}), frozenset({"tm"})),
    "EE": (frozenset({"npd", "fr", "ts", "sp"}), frozenset({"tm", "en"})),
    "CC": (frozenset({"de", "fr", "eu", "trl"}), frozenset({"tm", "oi"})),
    "SL": (frozenset({"pe", "de", "dh", "eu", "trl"}), frozenset({"tm"})),
    "ML": (frozenset({"pe", "de", "cd", "eu", "trl"}), frozenset({"tm"})),
    "AL": (frozenset({"pe", "de", "cd", "eu", "trl"}), frozenset({"tm"})),
    "RE": (frozenset({"npd", "fr", "cd", "ts", "sp", "nr"}), frozenset({"tm", "en"})),
}


def kronecker(a: int, b: int) -> int:
    return 1 if a == b else 0


def heaviside(a: int, b: int) -> int:
    return 1 if a >= b else 0


def scenario_count_if(deal: Deal, ne: int) -> int:
    """Number of scenarios when only IF an event hits matters: prod_k NE^N_k."""
    if ne < 1:
        raise ScenarioError("NE must be >= 1")
    result = 1
    for p in deal.portfolios:
        result *= ne**p.size
    return result


def scenario_count_when(deal: Deal, ne: int) -> int:
    """Number of scenarios when timing matters: prod_k ((NE-1)*T_k + 1)^N_k.

    Requires every exposure in a portfolio to share the same duration, since
    the closed form is stated for homogeneous portfolios.
    """
    if ne < 1:
        raise ScenarioError("NE must be >= 1")
    result = 1
    for p in deal.portfolios:
        durations = {e.duration for e in p.exposures}
        if len(durations) != 1:
            raise ScenarioError(
                f"portfolio {p.index}: mixed durations, the timing count formula needs a common T_k"
            )
        t_k = durations.pop()
        result *= ((ne - 1) * t_k + 1) ** p.size
    return result


@dataclass(frozen=True)
class EventOccurrence:
    """One event hitting one exposure at a (local) month.

    capital_time / interest_time are the gating months per leg (None = the
    leg is unaffected).  Spot cash lands in the event-recovery block at
    spot_time; recovery costs are super-senior embedded expenses.
    """

    kind: str
    time: int
    capital_time: int | None = None
    interest_time: int | None = None
    spot_amount: int = 0
    spot_time: int | None = None
    recovery_cost: int = 0
    cost_time: int | None = None
    interest_shift: int = 0

    def __post_init__(self) -> None:
        if self.time < 0:
            raise ScenarioError("occurrence time must be >= 0")
        if self.kind not in EVENT_CATALOGUE:
            raise ScenarioError(f"unknown event code {self.kind!r}")


@dataclass(frozen=True)
class Scenario:
    """One sampled world: event occurrences per exposure, sorted by time."""

    id: int
    seed: int
    occurrences: dict[tuple[int, int], tuple[EventOccurrence, ...]] = field(
        default_factory=dict
    )
    extra_costs: tuple[tuple[int, int], ...] = ()  # (month, amount) fines etc.

    def for_exposure(self, k: int, n: int) -> tuple[EventOccurrence, ...]:
        return self.occurrences.get((k, n), ())

    @property
    def is_base(self) -> bool:
        return not any(self.occurrences.values()) and not self.extra_costs


BASE_SCENARIO = Scenario(id=-1, seed=0)


def first_event_time(scn: Scenario, exposure: tuple[int, int]) -> int | None:
    """First (local) month at which any event affects the exposure."""
    occs = scn.for_exposure(*exposure)
    if not occs:
        return None
    return min(o.time for o in occs)


@dataclass(frozen=True)
class ClusterProfile:
    """Risk-profile parameters of one cluster (portfolio).

    hazards maps event codes to independent monthly hazard rates.  Defaults
    carry a recovery payload (fraction of outstanding capital, a lag, a flat
    per-default recovery cost) and an optional return-to-life reactivation.
    """

    hazards: dict[str, float] = field(default_factory=dict)
    recovery_fraction: float = 0.0
    recovery_lag: int = 1
    recovery_cost: int = 0
    rtl_probability: float = 0.0
    rtl_lag: int = 1
    euribor_shift: int = 0
    spot_payload_fraction: float = 0.0
    default_correlation: float = 0.0


@dataclass(frozen=True)
class GeneratorConfig:
    count: int
    master_seed: int
    include_extreme: bool = False


@dataclass(frozen=True)
class ScenarioSet:
    scenarios: tuple[Scenario, ...]
    config: GeneratorConfig

    @property
    def size(self) -> int:
        return len(self.scenarios)


def scenario_seed(master_seed: int, scenario_id: int) -> int:
    """Stable per-scenario seed so generation is order- and worker-independent."""
    digest = hashlib.sha256(f"{master_seed}:{scenario_id}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _first_hit_month(u: float, hazard: float) -> int:
    """Month >= 1 of the first success of a monthly hazard, via inverse CDF."""
    if hazard >= 1.0:
        return 1
    return int(math.floor(math.log(1.0 - u) / math.log(1.0 - hazard))) + 1


def _validate_profile(deal: Deal, p: Portfolio, include_extreme: bool) -> ClusterProfile:
    profile = p.profile
    if profile is None:
        raise ScenarioError(f"portfolio {p.index}: missing cluster risk profile")
    regular, extreme = TYPE_EVENTS[deal.exposure_type]
    allowed = regular | (extreme if include_extreme else frozenset())
    for code in profile.hazards:
        if code not in EVENT_CATALOGUE:
            raise ScenarioError(f"unknown event code {code!r}")
        if code not in allowed:
            raise ScenarioError(
                f"event {code!r} is not applicable to type {deal.exposure_type}"
                + ("" if code in regular | extreme else "")
            )
        if not 0.0 <= profile.hazards[code] <= 1.0:
            raise ScenarioError(f"hazard for {code!r} must be in [0,1]")
    return profile


def _sample_exposure(
    rng: np.random.Generator,
    e: Exposure,
    profile: ClusterProfile,
    z_default: float | None,
) -> tuple[EventOccurrence, ...]:
    occs: list[EventOccurrence] = []
    t_max = e.duration
    for code in sorted(profile.hazards):
        hazard = profile.hazards[code]
        if hazard <= 0.0:
            continue
        if code == "de" and z_default is not None:
            u = float(norm.cdf(z_default))
        else:
            u = float(rng.random())
        month = _first_hit_month(u, hazard)
        if month > t_max:
            continue
        kind = EVENT_CATALOGUE[code]
        if code == "pe":
            payout = e.outstanding_capital(month - 1)
            occs.append(
                EventOccurrence(
                    "pe", month, capital_time=month, interest_time=month,
                    spot_amount=payout, spot_time=month,
                )
            )
        elif code == "de":
            oc_at_default = e.outstanding_capital(month - 1)
            t_rec = month + max(1, profile.recovery_lag)
            rv = int(round(profile.recovery_fraction * oc_at_default))
            reactivates = (
                profile.rtl_probability > 0.0
                and rng.random() < profile.rtl_probability
            )
            t_rtl = month + max(1, profile.rtl_lag)
            if reactivates and t_rtl < t_rec and t_rtl <= t_max:
                # Return to life before the recovery month: no spot recovery.
                occs.append(
                    EventOccurrence("de", month, capital_time=month, interest_time=month)
                )
                occs.append(EventOccurrence("trl", t_rtl))
            else:
                occs.append(
                    EventOccurrence(
                        "de", month, capital_time=month, interest_time=month,
                        spot_amount=rv, spot_time=t_rec,
                        recovery_cost=profile.recovery_cost, cost_time=t_rec,
                    )
                )
        elif code == "eu":
            occs.append(EventOccurrence("eu", month, interest_shift=profile.euribor_shift))
        elif code == "trl":
            # Standalone reactivation hazard (negative-event exposures).
            occs.append(EventOccurrence("trl", month))
        elif kind.temporal_class == "continuous":
            gate_c = month if kind.affects in ("capital", "both") else None
            gate_i = month if kind.affects in ("interest", "both") else None
            occs.append(
                EventOccurrence(code, month, capital_time=gate_c, interest_time=gate_i)
            )
        else:
            payout = int(round(profile.spot_payload_fraction * e.outstanding_capital(month - 1)))
            occs.append(EventOccurrence(code, month, spot_amount=payout, spot_time=month))
    # An exposure terminates at its first prepayment or default; a later
    # terminal event cannot hit a closed exposure, so it is dropped along
    # with its payload (otherwise recoveries could exceed the actual loss).
    terminals = [o for o in occs if o.kind in ("de", "pe")]
    if len(terminals) > 1:
        first = min(terminals, key=lambda o: (o.time, o.kind))
        losers = {id(o) for o in terminals if o is not first}
        if first.kind == "pe":
            losers |= {id(o) for o in occs if o.kind == "trl"}
        occs = [o for o in occs if id(o) not in losers]
    occs.sort(key=lambda o: (o.time, o.kind))
    return tuple(occs)


def generate_scenario(deal: Deal, config: GeneratorConfig, scenario_id: int) -> Scenario:
    """Sample one scenario from its own seeded stream."""
    seed = scenario_seed(config.master_seed, scenario_id)
    rng = np.random.Generator(np.random.PCG64(seed))
    occurrences: dict[tuple[int, int], tuple[EventOccurrence, ...]] = {}
    for p in deal.portfolios:
        profile = _validate_profile(deal, p, config.include_extreme)
        rho = profile.default_correlation
        factor = float(rng.standard_normal()) if rho > 0.0 else 0.0
        for e in p.exposures:
            z = None
            if rho > 0.0 and profile.hazards.get("de", 0.0) > 0.0:
                eps = float(rng.standard_normal())
                z = math.sqrt(rho) * factor + math.sqrt(1.0 - rho) * eps
            occs = _sample_exposure(rng, e, profile, z)
            if occs:
                occurrences[(p.index, e.exposure_index)] = occs
    return Scenario(id=scenario_id, seed=seed, occurrences=occurrences)


def generate_scenarios(deal: Deal, config: GeneratorConfig) -> ScenarioSet:
    """Sample |S| scenarios; bit-identical for equal (config, master seed)."""
    if config.count < 1:
        raise ScenarioError("scenario count must be >= 1")
    for p in deal.portfolios:
        _validate_profile(deal, p, config.include_extreme)
    scenarios = tuple(
        generate_scenario(deal, config, sid) for sid in range(config.count)
    )
    return ScenarioSet(scenarios, config)


def scenario_dump_rows(sset: ScenarioSet):
    """Audit rows (scenario_id, k, n, event, t, payload) in stable order."""
    for scn in sset.scenarios:
        for (k, n) in sorted(scn.occurrences):
            for occ in scn.occurrences[(k, n)]:
                yield (scn.id, k, n, occ.kind, occ.time, occ.spot_amount)
