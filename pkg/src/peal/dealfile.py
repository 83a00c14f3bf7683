"""Deal definition files: a versioned JSON document holding the whole run.

One file carries the asset side (portfolios with explicit monthly schedules
in minor currency units), the waterfall design, the frequency schedule, the
scenario generator block, and the pricing/capital configuration.  Rates and
percentages are written as strings ("0.05") and parsed to exact fractions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .assets import Deal, DealError, Exposure, Portfolio, normalize_timeline
from .design import WaterfallDesign, normalize_design, validate_design
from .features import DEFAULT_ETA
from .frequencies import FrequencySchedule, FrequencyError, validate_frequencies
from .scenarios import ClusterProfile, GeneratorConfig

SCHEMA_VERSION = "1"


class DealFileError(ValueError):
    """The deal file is invalid; carries the full list of problems."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass(frozen=True)
class OptimizationSpec:
    objective: str  # e.g. "min_total_rcn", "max_nirr:N1", "min_tflt"
    z_max: int = 0
    z_steps: int = 5
    retention_grid: tuple[Fraction, ...] = ()
    frequency_candidates: tuple[tuple[int, ...], ...] = ()


@dataclass(frozen=True)
class DealPackage:
    """Everything a run needs, as parsed from one deal file."""

    deal: Deal
    design: WaterfallDesign
    frequencies: FrequencySchedule
    generator: GeneratorConfig
    alpha: Fraction = Fraction(99, 100)
    eta: Fraction = DEFAULT_ETA
    risk_weights: dict = field(default_factory=dict)
    car: Fraction = Fraction(8, 100)
    c0: int = 0
    cpy: tuple[Fraction, ...] = ()
    optimization: OptimizationSpec | None = None


def _fraction(value, where: str, errors: list[str]) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        errors.append(f"{where}: cannot parse {value!r} as a rational number")
        return Fraction(0)


def _int_series(values, where: str, errors: list[str]) -> tuple[int, ...]:
    out = []
    for idx, v in enumerate(values):
        if not isinstance(v, int) or isinstance(v, bool):
            errors.append(f"{where}[{idx}]: expected an integer amount in minor units, got {v!r}")
            out.append(0)
        else:
            out.append(v)
    return tuple(out)


def _parse_profile(doc, where: str, errors: list[str]) -> ClusterProfile:
    hazards = {}
    for code, rate in doc.get("hazards", {}).items():
        try:
            hazards[code] = float(rate)
        except (TypeError, ValueError):
            errors.append(f"{where}.hazards.{code}: not a number")
    return ClusterProfile(
        hazards=hazards,
        recovery_fraction=float(doc.get("recovery_fraction", 0.0)),
        recovery_lag=int(doc.get("recovery_lag", 1)),
        recovery_cost=int(doc.get("recovery_cost", 0)),
        rtl_probability=float(doc.get("rtl_probability", 0.0)),
        rtl_lag=int(doc.get("rtl_lag", 1)),
        euribor_shift=int(doc.get("euribor_shift", 0)),
        spot_payload_fraction=float(doc.get("spot_payload_fraction", 0.0)),
        default_correlation=float(doc.get("default_correlation", 0.0)),
    )


def _parse_design(doc, errors: list[str]) -> WaterfallDesign | None:
    try:
        design = WaterfallDesign(
            hs=tuple(doc["hs"]),
            vs=tuple(doc["vs"]),
            cost_map=tuple(tuple(g) for g in doc["cost_map"]),
            note_map=tuple(tuple(g) for g in doc["note_map"]),
            h_weights=tuple(
                tuple(_fraction(w, "design.h_weights", errors) for w in row)
                for row in doc.get("h_weights", [])
            ),
            v_weights=tuple(
                tuple(_fraction(w, "design.v_weights", errors) for w in row)
                for row in doc.get("v_weights", [])
            ),
            notes=tuple(doc.get("notes", [])),
        )
    except (KeyError, TypeError) as exc:
        errors.append(f"design: missing or malformed field ({exc})")
        return None
    design = normalize_design(design)
    errors.extend(f"design: {v}" for v in validate_design(design))
    return design


def parse_deal_document(doc) -> DealPackage:
    """Build the full object graph from a parsed JSON document.

    All problems are collected and raised together so a file can be fixed in
    one pass; locations use dotted JSON paths.
    """
    errors: list[str] = []
    version = doc.get("peal_version")
    if version != SCHEMA_VERSION:
        raise DealFileError([f"peal_version: expected {SCHEMA_VERSION!r}, got {version!r}"])

    portfolios = []
    for k, pdoc in enumerate(doc.get("portfolios", []), start=1):
        where = f"portfolios[{k - 1}]"
        exposures = []
        for n, edoc in enumerate(pdoc.get("exposures", []), start=1):
            cap = _int_series(edoc.get("capital", []), f"{where}.exposures[{n - 1}].capital", errors)
            intr = _int_series(edoc.get("interest", []), f"{where}.exposures[{n - 1}].interest", errors)
            try:
                exposures.append(Exposure(k, n, cap, intr))
            except DealError as exc:
                errors.append(f"{where}.exposures[{n - 1}]: {exc}")
        profile = _parse_profile(pdoc.get("profile", {}), f"{where}.profile", errors)
        try:
            portfolios.append(
                Portfolio(k, int(pdoc.get("pooling_month", 0)), tuple(exposures), profile)
            )
        except DealError as exc:
            errors.append(f"{where}: {exc}")
    deal = None
    if portfolios:
        try:
            deal = normalize_timeline(
                Deal(
                    tuple(portfolios),
                    int(doc.get("tp", 0)),
                    bool(doc.get("islamic", False)),
                    str(doc.get("exposure_type", "CL")),
                )
            )
        except DealError as exc:
            errors.append(str(exc))
    else:
        errors.append("K >= 1 required: a deal needs at least one portfolio")

    design = _parse_design(doc.get("design", {}), errors)

    frequencies = None
    try:
        frequencies = FrequencySchedule(tuple(int(w) for w in doc.get("frequencies", [])))
    except (FrequencyError, TypeError, ValueError) as exc:
        errors.append(f"frequencies: {exc}")
    if design is not None and frequencies is not None:
        tp = deal.tp if deal is not None else None
        errors.extend(
            f"frequencies: {v}" for v in validate_frequencies(design, frequencies, tp)
        )

    sdoc = doc.get("scenarios", {})
    generator = GeneratorConfig(
        count=int(sdoc.get("count", 0)),
        master_seed=int(sdoc.get("master_seed", 0)),
        include_extreme=bool(sdoc.get("include_extreme", False)),
    )
    if generator.count < 1:
        errors.append("scenarios.count: must be >= 1")

    alpha = _fraction(doc.get("alpha", "0.99"), "alpha", errors)
    if not 0 < alpha < 1:
        errors.append(f"alpha: must lie in (0,1), got {alpha}")
    eta = _fraction(doc.get("eta", "0.02"), "eta", errors)

    risk_weights = {
        q: _fraction(v, f"risk_weights.{q}", errors)
        for q, v in doc.get("risk_weights", {}).items()
    }
    car = _fraction(doc.get("car", "0.08"), "car", errors)

    pricing = doc.get("pricing", {})
    c0 = int(pricing.get("c0", 0))
    cpy = tuple(
        _fraction(v, "pricing.cpy", errors) for v in pricing.get("cpy", [])
    )
    if design is not None and cpy and len(cpy) != design.y:
        errors.append(f"pricing.cpy: expected {design.y} note shares, got {len(cpy)}")
    if cpy and sum(cpy) != 1:
        errors.append(f"pricing.cpy: shares sum to {sum(cpy)}, not 100%")

    optimization = None
    odoc = doc.get("optimization")
    if odoc is not None:
        optimization = OptimizationSpec(
            objective=str(odoc.get("objective", "min_total_rcn")),
            z_max=int(odoc.get("z_max", 0)),
            z_steps=int(odoc.get("z_steps", 5)),
            retention_grid=tuple(
                _fraction(v, "optimization.retention_grid", errors)
                for v in odoc.get("retention_grid", [])
            ),
            frequency_candidates=tuple(
                tuple(int(w) for w in cand)
                for cand in odoc.get("frequency_candidates", [])
            ),
        )

    if errors:
        raise DealFileError(errors)
    assert deal is not None and design is not None and frequencies is not None
    return DealPackage(
        deal, design, frequencies, generator, alpha, eta,
        risk_weights, car, c0, cpy, optimization,
    )


def parse_deal(path) -> DealPackage:
    """Load and validate a deal file from disk."""
    raw = Path(path).read_text()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DealFileError([f"not valid JSON: {exc}"]) from exc
    return parse_deal_document(doc)


def validate_document(doc) -> list[str]:
    """Validation verdict without raising; used by the HTTP service."""
    try:
        parse_deal_document(doc)
    except DealFileError as exc:
        return exc.errors
    return []


def _frac_str(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def serialize_package(pkg: DealPackage) -> dict:
    """Deal package back to its JSON document form (lossless round trip)."""
    doc = {
        "peal_version": SCHEMA_VERSION,
        "tp": pkg.deal.tp,
        "islamic": pkg.deal.islamic,
        "exposure_type": pkg.deal.exposure_type,
        "alpha": _frac_str(pkg.alpha),
        "eta": _frac_str(pkg.eta),
        "portfolios": [
            {
                "pooling_month": p.pooling_month,
                "profile": {
                    "hazards": dict(sorted(p.profile.hazards.items())) if p.profile else {},
                    "recovery_fraction": p.profile.recovery_fraction if p.profile else 0.0,
                    "recovery_lag": p.profile.recovery_lag if p.profile else 1,
                    "recovery_cost": p.profile.recovery_cost if p.profile else 0,
                    "rtl_probability": p.profile.rtl_probability if p.profile else 0.0,
                    "rtl_lag": p.profile.rtl_lag if p.profile else 1,
                    "euribor_shift": p.profile.euribor_shift if p.profile else 0,
                    "spot_payload_fraction": p.profile.spot_payload_fraction if p.profile else 0.0,
                    "default_correlation": p.profile.default_correlation if p.profile else 0.0,
                },
                "exposures": [
                    {"capital": list(e.capital), "interest": list(e.interest)}
                    for e in p.exposures
                ],
            }
            for p in pkg.deal.portfolios
        ],
        "design": {
            "hs": list(pkg.design.hs),
            "vs": list(pkg.design.vs),
            "h_weights": [[_frac_str(w) for w in row] for row in pkg.design.h_weights],
            "v_weights": [[_frac_str(w) for w in row] for row in pkg.design.v_weights],
            "cost_map": [list(g) for g in pkg.design.cost_map],
            "note_map": [list(g) for g in pkg.design.note_map],
            "notes": list(pkg.design.notes),
        },
        "frequencies": list(pkg.frequencies.omegas),
        "scenarios": {
            "count": pkg.generator.count,
            "master_seed": pkg.generator.master_seed,
            "include_extreme": pkg.generator.include_extreme,
        },
        "risk_weights": {q: _frac_str(v) for q, v in sorted(pkg.risk_weights.items())},
        "car": _frac_str(pkg.car),
        "pricing": {"c0": pkg.c0, "cpy": [_frac_str(v) for v in pkg.cpy]},
    }
    if pkg.optimization is not None:
        doc["optimization"] = {
            "objective": pkg.optimization.objective,
            "z_max": pkg.optimization.z_max,
            "z_steps": pkg.optimization.z_steps,
            "retention_grid": [_frac_str(v) for v in pkg.optimization.retention_grid],
            "frequency_candidates": [list(c) for c in pkg.optimization.frequency_candidates],
        }
    return doc


def dump_deal(pkg: DealPackage, path) -> None:
    Path(path).write_text(json.dumps(serialize_package(pkg), indent=2, sort_keys=True) + "\n")
