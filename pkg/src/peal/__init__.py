"""Securitization structuring engine.

Asset-side exposures are simulated through event-driven Monte Carlo
scenarios; realized inbound cash flows are tranched empirically and poured
through a gross/net waterfall into cost and note positions, with the ongoing
risk features (thickness, regulatory capital, CVA, fair value, IRR) and a
compliance layer for the structural payment rules.
"""

__version__ = "0.1.0"

from .assets import Deal, DealError, Exposure, Portfolio, build_deal, normalize_timeline
from .blocks import asset_block, event_recovery, gross_asset, loss_block, scenario_blocks
from .dealfile import DealFileError, DealPackage, parse_deal, parse_deal_document
from .design import DesignError, WaterfallDesign, validate_design, vertical_retention_design
from .frequencies import FrequencyError, FrequencySchedule, g_check, validate_frequencies
from .pipeline import RunRecord, SimulationResult, compute_features, run_pipeline, simulate
from .scenarios import (
    BASE_SCENARIO,
    ClusterProfile,
    GeneratorConfig,
    Scenario,
    ScenarioError,
    ScenarioSet,
    generate_scenarios,
    scenario_count_if,
    scenario_count_when,
)
from .tranching import Tranching, substantial_margin, tranche
from .waterfall import AllocationResult, allocate, total_net_position

__all__ = [
    "BASE_SCENARIO",
    "AllocationResult",
    "ClusterProfile",
    "Deal",
    "DealError",
    "DealFileError",
    "DealPackage",
    "DesignError",
    "Exposure",
    "FrequencyError",
    "FrequencySchedule",
    "GeneratorConfig",
    "Portfolio",
    "RunRecord",
    "Scenario",
    "ScenarioError",
    "ScenarioSet",
    "SimulationResult",
    "Tranching",
    "WaterfallDesign",
    "allocate",
    "asset_block",
    "build_deal",
    "compute_features",
    "event_recovery",
    "g_check",
    "generate_scenarios",
    "gross_asset",
    "loss_block",
    "normalize_timeline",
    "parse_deal",
    "parse_deal_document",
    "run_pipeline",
    "scenario_blocks",
    "scenario_count_if",
    "scenario_count_when",
    "simulate",
    "substantial_margin",
    "total_net_position",
    "tranche",
    "validate_design",
    "validate_frequencies",
    "vertical_retention_design",
]
