"""Structuring search: improve a chosen feature by varying the endowment,
the retention split and the frequency schedule under the compliance rules.

Candidates are evaluated on one shared scenario set (common random numbers),
so identical candidates always score identically and comparisons are free of
Monte Carlo noise.  The search is a plain grid over the candidate axes;
structural rule violations disqualify a candidate before simulation, and the
g-check / CVA non-crossing verdicts disqualify it after.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .dealfile import DealPackage, OptimizationSpec
from .design import WaterfallDesign, validate_design
from .frequencies import FrequencySchedule, validate_frequencies
from .pipeline import FeatureBundle, SimulationResult, compute_features, simulate
from .scenarios import generate_scenarios


class OptimizationError(ValueError):
    """The optimization problem is malformed."""


@dataclass(frozen=True)
class Candidate:
    z0: int
    retention: Fraction | None
    frequencies: tuple[int, ...] | None

    def params(self) -> dict:
        return {
            "z0": self.z0,
            "retention": None if self.retention is None else str(self.retention),
            "frequencies": None if self.frequencies is None else list(self.frequencies),
        }


@dataclass(frozen=True)
class TraceEntry:
    candidate_id: int
    candidate: Candidate
    objective: float | None
    feasible: bool
    violations: tuple[str, ...]


@dataclass(frozen=True)
class OptimizationOutcome:
    best: TraceEntry | None
    trace: tuple[TraceEntry, ...]
    objective: str

    @property
    def feasible(self) -> bool:
        return self.best is not None and self.best.feasible


def apply_retention(d: WaterfallDesign, retention: Fraction) -> WaterfallDesign:
    """Re-split every two-slice layer as (1-r, r): the retained fraction."""
    if not 0 < retention < 1:
        raise OptimizationError("retention must lie in (0,1)")
    v_weights = tuple(
        (1 - retention, retention) if len(row) == 2 else row
        for row in d.v_weights
    )
    return replace(d, v_weights=v_weights)


def _objective_value(name: str, sim: SimulationResult, features: FeatureBundle) -> float:
    """Scalar to minimize.  Maximizing objectives are negated."""
    if name == "min_tflt":
        return float(sim.margin.tflt)
    if name == "min_total_rcn":
        if not features.rcn:
            raise OptimizationError("min_total_rcn needs a risk_weights table")
        return float(sum(sum(row) for row in features.rcn))
    if name == "min_total_ln":
        return float(sum(sum(row) for row in sim.ln_mean))
    if name.startswith("max_nirr:"):
        label = name.split(":", 1)[1]
        y = int(label.lstrip("N"))
        result = features.irr[y - 1]
        if result is None or not result.nirr.converged:
            return float("inf")
        return -result.nirr.annual
    if name.startswith("max_fv:"):
        label = name.split(":", 1)[1]
        y = int(label.lstrip("N"))
        return -float(features.fair_values[y - 1].mean)
    raise OptimizationError(f"unknown objective {name!r}")


def enumerate_candidates(spec: OptimizationSpec) -> list[Candidate]:
    z_values = [0]
    if spec.z_max > 0:
        steps = max(1, spec.z_steps)
        z_values = sorted({(spec.z_max * i) // steps for i in range(steps + 1)})
    retentions: list[Fraction | None] = list(spec.retention_grid) or [None]
    freqs: list[tuple[int, ...] | None] = list(spec.frequency_candidates) or [None]
    return [
        Candidate(z, r, f)
        for z in z_values
        for r in retentions
        for f in freqs
    ]


def optimize(pkg: DealPackage, budget: int | None = None) -> OptimizationOutcome:
    """Grid search over the optimization spec; deterministic given the seed.

    Returns the best feasible candidate, or the least-violating one flagged
    infeasible when nothing satisfies every constraint.
    """
    spec = pkg.optimization
    if spec is None:
        raise OptimizationError("the deal package has no optimization block")
    sset = generate_scenarios(pkg.deal, pkg.generator)
    candidates = enumerate_candidates(spec)
    if budget is not None:
        candidates = candidates[:budget]

    trace: list[TraceEntry] = []
    for cid, cand in enumerate(candidates):
        design = pkg.design
        if cand.retention is not None:
            design = apply_retention(design, cand.retention)
        fs = pkg.frequencies
        if cand.frequencies is not None:
            fs = FrequencySchedule(cand.frequencies)
        violations = [
            *validate_design(design),
            *validate_frequencies(design, fs, pkg.deal.tp),
        ]
        if violations:
            trace.append(TraceEntry(cid, cand, None, False, tuple(violations)))
            continue
        z_b = [cand.z0] + [0] * pkg.deal.tp
        sim = simulate(pkg.deal, design, fs, sset, pkg.alpha, z_b)
        features = compute_features(sim, pkg)
        if not sim.gcheck.passed:
            violations.extend(sim.gcheck.violations)
        if features.cva.crossing:
            violations.append(
                "CVA crossing between " + ", ".join("/".join(p) for p in features.cva.crossing_pairs)
            )
        objective = _objective_value(spec.objective, sim, features)
        trace.append(TraceEntry(cid, cand, objective, not violations, tuple(violations)))

    feasible = [e for e in trace if e.feasible]
    if feasible:
        best = min(feasible, key=lambda e: (e.objective, e.candidate_id))
    elif trace:
        best = min(trace, key=lambda e: (len(e.violations), e.candidate_id))
    else:
        best = None
    return OptimizationOutcome(best, tuple(trace), spec.objective)


def trace_rows(outcome: OptimizationOutcome):
    """CSV-ready rows: candidate id, params, objective, feasibility."""
    for entry in outcome.trace:
        p = entry.candidate.params()
        yield (
            entry.candidate_id,
            p["z0"],
            p["retention"] or "",
            "" if p["frequencies"] is None else " ".join(map(str, p["frequencies"])),
            "" if entry.objective is None else entry.objective,
            entry.feasible,
            "; ".join(entry.violations),
        )
