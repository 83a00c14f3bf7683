"""Run orchestration: simulation, feature computation and report persistence.

A run executes the whole structuring sequence on a parsed deal package:
scenario generation, inbound blocks, tranching, design evaluation, gross and
net dimensioning, and the feature reports.  Runs are content-addressed by
(deal document, master seed, scenario count, engine version) and re-running
an identical configuration writes byte-identical artifacts.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .assets import Deal
from .blocks import scenario_blocks
from .dealfile import DealPackage, serialize_package
from .design import (
    WaterfallDesign,
    assemble_positions,
    horizontal_components,
    vertical_components,
    virtual_positions,
)
from .embedded import buffer as buffer_block
from .embedded import sse, sse_mean
from .features import (
    CvaReport,
    FairValue,
    GrossNetIrr,
    cva_report,
    ep_histogram,
    fair_value,
    gross_net_irr,
    note_purchase_prices,
    purchase_price,
    regulatory_capital,
    thickness_peal,
)
from .frequencies import (
    FrequencySchedule,
    GCheckResult,
    freq_transform,
    g_check,
    gross_horizontals,
    gross_positions,
    gross_verticals,
    hc_omegas,
)
from .scenarios import GeneratorConfig, ScenarioSet, generate_scenarios
from .tranching import (
    SubstantialMargin,
    Tranching,
    icf,
    substantial_margin,
    taf,
    total_net_loss,
    tranche,
)
from .waterfall import (
    allocate,
    gross_dimensioning_matrix,
    net_positions,
    net_verticals,
    position_losses,
)


@dataclass(frozen=True)
class SimulationResult:
    """Everything produced by Steps 2-8 for one (deal, design, scenario set)."""

    deal: Deal
    design: WaterfallDesign
    frequencies: FrequencySchedule
    sset: ScenarioSet
    ga: list
    icf: list
    taf_rows: list
    tnl_rows: list
    sse_rows: list
    tranching: Tranching
    margin: SubstantialMargin
    hc: list
    vc: list
    gv: list
    gh: list
    gcheck: GCheckResult
    gc: list
    gn: list
    nc_rows: list
    nn_rows: list
    allocations: list  # per scenario AllocationResult
    lc_mean: list
    ln_mean: list


def _mean_rows(rows):
    count = len(rows)
    length = len(rows[0])
    return [Fraction(sum(r[t] for r in rows)) / count for t in range(length)]


def simulate(
    deal: Deal,
    design: WaterfallDesign,
    frequencies: FrequencySchedule,
    sset: ScenarioSet,
    alpha=Fraction(99, 100),
    z_b=None,
) -> SimulationResult:
    """Run Steps 2-8 on an existing scenario set (common random numbers)."""
    tp = deal.tp
    horizon = deal.horizon
    z_b = list(z_b) if z_b is not None else [0] * (tp + 1)
    from .blocks import gross_asset

    ga = gross_asset(deal)
    icf_series = icf(ga, z_b, tp)

    taf_rows, tnl_rows, sse_rows, buffer_rows = [], [], [], []
    for scn in sset.scenarios:
        _, a, _, e_series = scenario_blocks(deal, scn)
        sse_s = sse(deal, scn)
        # The endowment is spent in-scenario exactly as granted (z_s = z_b).
        taf_s = taf(a, e_series, z_b, tp)
        taf_rows.append(taf_s)
        sse_rows.append(sse_s[: tp + 1] + [0] * max(0, tp + 1 - len(sse_s)))
        tnl_rows.append(total_net_loss(icf_series, taf_s, sse_s, tp))
        buffer_rows.append(buffer_block(deal, scn)[: tp + 1])

    tr = tranche(tnl_rows, icf_series, alpha)
    margin = substantial_margin(tnl_rows, tr.flt)

    sse_bar = sse_mean(sse_rows)
    vp = virtual_positions(tr)
    hc = horizontal_components(vp, design, sse_bar)
    vc = vertical_components(hc, design)
    gv = gross_verticals(vc, frequencies)
    gh = gross_horizontals(gv, design)
    gcheck = g_check(gv, gh, design, frequencies)
    gc, gn = gross_positions(gv, design)

    last_omega = hc_omegas(design, frequencies)[-1]
    nc_rows, nn_rows, allocations = [], [], []
    for taf_s, buf in zip(taf_rows, buffer_rows):
        credit = freq_transform(buf, last_omega) if any(buf) else None
        gdm = gross_dimensioning_matrix(gh, credit)
        result = allocate(taf_s, gdm)
        allocations.append(result)
        nv = net_verticals(result, design)
        nc, nn = net_positions(nv, design)
        nc_rows.append(nc)
        nn_rows.append(nn)

    nc_mean = [_mean_rows([row[x] for row in nc_rows]) for x in range(design.x)]
    nn_mean = [_mean_rows([row[y] for row in nn_rows]) for y in range(design.y)]
    lc_mean = position_losses(gc, nc_mean)
    ln_mean = position_losses(gn, nn_mean)

    return SimulationResult(
        deal, design, frequencies, sset, ga, icf_series,
        taf_rows, tnl_rows, sse_rows, tr, margin,
        hc, vc, gv, gh, gcheck, gc, gn,
        nc_rows, nn_rows, allocations, lc_mean, ln_mean,
    )


@dataclass(frozen=True)
class FeatureBundle:
    ep: dict
    thc: list
    thn: list
    rcn: list
    cva: CvaReport
    fair_values: list[FairValue]
    note_prices: list
    irr: list[GrossNetIrr | None]


def compute_features(sim: SimulationResult, pkg: DealPackage) -> FeatureBundle:
    """Step 9 on a finished simulation."""
    ep = ep_histogram(sim.deal, sim.sset, pkg.eta)
    thc = thickness_peal(sim.gc)
    thn = thickness_peal(sim.gn)
    rcn = regulatory_capital(sim.design, sim.gv, pkg.risk_weights, pkg.car) if pkg.risk_weights else []
    cva = cva_report(sim.gc, sim.gn, sim.nc_rows, sim.nn_rows, sim.deal.tp)
    fair_values = [
        fair_value([row[y] for row in sim.nn_rows], pkg.eta, 0)
        for y in range(sim.design.y)
    ]
    irr_results: list[GrossNetIrr | None] = [None] * sim.design.y
    note_prices: list = []
    if pkg.c0 and pkg.cpy:
        total_fv = sum(fv.mean for fv in fair_values)
        cy0 = purchase_price(pkg.c0, total_fv)
        note_prices = note_purchase_prices(cy0, pkg.cpy)
        nn_mean = [_mean_rows([row[y] for row in sim.nn_rows]) for y in range(sim.design.y)]
        for y in range(sim.design.y):
            # Zero-size notes (e.g. loss tranches of a loss-free pool) have
            # no cash flows to discount; they simply carry no IRR.
            if note_prices[y] > 0 and any(sim.gn[y]):
                irr_results[y] = gross_net_irr(sim.gn[y], nn_mean[y], note_prices[y])
    return FeatureBundle(ep, thc, thn, rcn, cva, fair_values, note_prices, irr_results)


# ---------------------------------------------------------------------------
# Persistence


def _f(value) -> float:
    return float(value)


def _csv_bytes(header, rows) -> bytes:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return out.getvalue().encode()


def _json_bytes(doc) -> bytes:
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()


def run_id_for(pkg: DealPackage) -> str:
    """Content address: deal document + seed + count + engine version."""
    payload = json.dumps(
        {
            "deal": serialize_package(pkg),
            "engine": __version__,
        },
        sort_keys=True,
    ).encode()
    return hashlib.sha256(payload).hexdigest()[:16]


@dataclass(frozen=True)
class RunRecord:
    run_id: str
    deal_hash: str
    master_seed: int
    scenario_count: int
    engine_version: str
    artifacts: dict[str, str] = field(default_factory=dict)
    verdicts: dict[str, bool] = field(default_factory=dict)

    def to_document(self) -> dict:
        return {
            "run_id": self.run_id,
            "deal_hash": self.deal_hash,
            "master_seed": self.master_seed,
            "scenario_count": self.scenario_count,
            "engine_version": self.engine_version,
            # File names only: the document must not depend on where the
            # run directory happens to live.
            "artifacts": sorted(self.artifacts),
            "verdicts": dict(sorted(self.verdicts.items())),
        }


def tranching_report(sim: SimulationResult) -> bytes:
    rows = [
        (t, _f(sim.tranching.flt[t]), _f(sim.tranching.slt[t]), _f(sim.tranching.clt[t]),
         _f(sim.tranching.mu[t]), _f(sim.tranching.var[t]))
        for t in range(len(sim.icf))
    ]
    return _csv_bytes(["t", "flt", "slt", "clt", "mu", "var"], rows)


def gdm_report(sim: SimulationResult) -> bytes:
    header = ["t"] + [f"gh{j}" for j in range(1, sim.design.h + 1)]
    rows = [
        [t] + [_f(col[t]) for col in sim.gh]
        for t in range(len(sim.gh[0]))
    ]
    return _csv_bytes(header, rows)


def ndm_mean_report(sim: SimulationResult) -> bytes:
    width = sim.design.h
    length = len(sim.gh[0])
    count = len(sim.allocations)
    header = ["t"] + [f"ndm{j}" for j in range(1, width + 1)]
    rows = []
    for t in range(length):
        row = [t]
        for j in range(width):
            row.append(_f(Fraction(sum(a.ndm[j][t] for a in sim.allocations)) / count))
        rows.append(row)
    return _csv_bytes(header, rows)


def cva_csv(features: FeatureBundle, length: int) -> bytes:
    labels = sorted(features.cva.curves)
    header = ["t"] + labels
    rows = [
        [t] + [_f(features.cva.curves[label][t]) for label in labels]
        for t in range(length)
    ]
    return _csv_bytes(header, rows)


def feature_report(sim: SimulationResult, features: FeatureBundle) -> bytes:
    doc = {
        "ep": {
            f"{k}:{n}": counts for (k, n), counts in sorted(features.ep.items())
        },
        "thickness": {
            "costs": [[_f(v) for v in row] for row in features.thc],
            "notes": [[_f(v) for v in row] for row in features.thn],
        },
        "regulatory_capital": [[_f(v) for v in row] for row in features.rcn],
        "cva": {
            "curves": {label: [_f(v) for v in curve] for label, curve in features.cva.curves.items()},
            "cumulative": {
                label: [_f(v) for v in curve]
                for label, curve in features.cva.cumulative.items()
            },
            "settled": {
                label: [_f(v) for v in curve]
                for label, curve in features.cva.settled.items()
            },
            "skipped": list(features.cva.skipped),
            "crossing": features.cva.crossing,
            "crossing_pairs": [list(pair) for pair in features.cva.crossing_pairs],
        },
        "fair_value": [
            {
                "mean": _f(fv.mean),
                "cdf": [[_f(v), _f(q)] for v, q in fv.cdf_samples()],
            }
            for fv in features.fair_values
        ],
        "note_prices": [_f(p) for p in features.note_prices],
        "irr": [
            None
            if r is None
            else {
                "girr_annual": r.girr.annual,
                "nirr_annual": r.nirr.annual,
                "girr_converged": r.girr.converged,
                "nirr_converged": r.nirr.converged,
            }
            for r in features.irr
        ],
        "substantial_margin": {
            "tflt": _f(sim.margin.tflt),
            "sigma": sim.margin.sigma_tflt,
            "sm": sim.margin.sm,
            "applicable": sim.margin.applicable,
            "passed": sim.margin.passed,
        },
        "g_check": {
            "passed": sim.gcheck.passed,
            "violations": list(sim.gcheck.violations),
        },
    }
    return _json_bytes(doc)


def run_pipeline(pkg: DealPackage, out_root) -> RunRecord:
    """Execute Steps 2-9 and write the report set under a content address.

    Re-running an identical package is idempotent: the run directory is
    rewritten with byte-identical artifacts.
    """
    sset = generate_scenarios(pkg.deal, pkg.generator)
    sim = simulate(pkg.deal, pkg.design, pkg.frequencies, sset, pkg.alpha)
    features = compute_features(sim, pkg)

    run_id = run_id_for(pkg)
    run_dir = Path(out_root) / run_id
    run_dir.mkdir(parents=True, exist_ok=True)

    artifacts = {
        "deal.json": _json_bytes(serialize_package(pkg)),
        "tranching.csv": tranching_report(sim),
        "gdm.csv": gdm_report(sim),
        "ndm_mean.csv": ndm_mean_report(sim),
        "cva.csv": cva_csv(features, len(sim.icf)),
        "features.json": feature_report(sim, features),
    }
    for name, payload in artifacts.items():
        (run_dir / name).write_bytes(payload)

    deal_hash = hashlib.sha256(_json_bytes(serialize_package(pkg))).hexdigest()
    record = RunRecord(
        run_id=run_id,
        deal_hash=deal_hash,
        master_seed=pkg.generator.master_seed,
        scenario_count=pkg.generator.count,
        engine_version=__version__,
        artifacts={name: str(run_dir / name) for name in artifacts},
        verdicts={
            "g_check": sim.gcheck.passed,
            "cva_non_crossing": not features.cva.crossing,
        },
    )
    (run_dir / "run.json").write_bytes(_json_bytes(record.to_document()))
    return record
