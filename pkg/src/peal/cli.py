"""Command-line front end: validate, simulate, tranche, features, optimize,
report and serve.

Every verb takes --deal pointing at a deal file; output goes under --out-dir
(default: $PEAL_OUT_DIR or ./runs).  With --enforce, the exit code is nonzero
whenever any compliance verdict (frequency rules, g-check, CVA crossing)
fails.
"""

from __future__ import annotations

import csv
import json
import os
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import click

from .dealfile import DealFileError, parse_deal
from .optimize import optimize as run_optimize
from .optimize import trace_rows
from .pipeline import run_pipeline
from .scenarios import GeneratorConfig


def _out_dir(value: str | None) -> Path:
    return Path(value or os.environ.get("PEAL_OUT_DIR", "runs"))


def _load(deal_path: str, seed: int | None, scenarios: int | None, alpha: str | None):
    pkg = parse_deal(deal_path)
    gen = pkg.generator
    if seed is not None:
        gen = GeneratorConfig(gen.count, seed, gen.include_extreme)
    if scenarios is not None:
        gen = GeneratorConfig(scenarios, gen.master_seed, gen.include_extreme)
    pkg = replace(pkg, generator=gen)
    if alpha is not None:
        pkg = replace(pkg, alpha=Fraction(alpha))
    return pkg


deal_option = click.option("--deal", "deal_path", required=True, type=click.Path(exists=True))
seed_option = click.option("--seed", type=int, default=None, help="override the master seed")
scenarios_option = click.option("--scenarios", type=int, default=None, help="override the scenario count")
alpha_option = click.option("--alpha", type=str, default=None, help="tranching quantile, e.g. 0.99")
out_option = click.option("--out-dir", type=click.Path(), default=None)
enforce_option = click.option("--enforce", is_flag=True, help="exit nonzero on any compliance failure")


@click.group()
def main() -> None:
    """Securitization structuring engine."""


@main.command()
@deal_option
def validate(deal_path: str) -> None:
    """Parse and validate a deal file; list every problem found."""
    try:
        parse_deal(deal_path)
    except DealFileError as exc:
        for problem in exc.errors:
            click.echo(f"error: {problem}", err=True)
        sys.exit(1)
    click.echo("ok")


def _run(deal_path, seed, scenarios, alpha, out_dir, enforce):
    try:
        pkg = _load(deal_path, seed, scenarios, alpha)
    except DealFileError as exc:
        for problem in exc.errors:
            click.echo(f"error: {problem}", err=True)
        sys.exit(1)
    try:
        record = run_pipeline(pkg, _out_dir(out_dir))
    except ValueError as exc:  # engine errors: infeasible design, bad inputs
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(json.dumps(record.to_document(), indent=2, sort_keys=True))
    if enforce and not all(record.verdicts.values()):
        sys.exit(2)
    return record


@main.command()
@deal_option
@seed_option
@scenarios_option
@alpha_option
@out_option
@enforce_option
def simulate(deal_path, seed, scenarios, alpha, out_dir, enforce) -> None:
    """Run the full pipeline and write the report set."""
    _run(deal_path, seed, scenarios, alpha, out_dir, enforce)


@main.command()
@deal_option
@seed_option
@scenarios_option
@alpha_option
@out_option
def tranche(deal_path, seed, scenarios, alpha, out_dir) -> None:
    """Run the pipeline and print the tranching report."""
    record = _run(deal_path, seed, scenarios, alpha, out_dir, False)
    click.echo(Path(record.artifacts["tranching.csv"]).read_text(), nl=False)


@main.command()
@deal_option
@seed_option
@scenarios_option
@alpha_option
@out_option
@enforce_option
def features(deal_path, seed, scenarios, alpha, out_dir, enforce) -> None:
    """Run the pipeline and print the feature report."""
    record = _run(deal_path, seed, scenarios, alpha, out_dir, enforce)
    click.echo(Path(record.artifacts["features.json"]).read_text(), nl=False)


@main.command()
@deal_option
@seed_option
@scenarios_option
@out_option
@click.option("--budget", type=int, default=None, help="max candidate evaluations")
def optimize(deal_path, seed, scenarios, out_dir, budget) -> None:
    """Run the structuring search and write the evaluation trace."""
    try:
        pkg = _load(deal_path, seed, scenarios, None)
    except DealFileError as exc:
        for problem in exc.errors:
            click.echo(f"error: {problem}", err=True)
        sys.exit(1)
    try:
        outcome = run_optimize(pkg, budget)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    out = _out_dir(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    trace_path = out / "optimization_trace.csv"
    with trace_path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["candidate", "z0", "retention", "frequencies", "objective", "feasible", "violations"])
        writer.writerows(trace_rows(outcome))
    if outcome.best is None:
        click.echo("no candidates evaluated", err=True)
        sys.exit(1)
    click.echo(
        json.dumps(
            {
                "objective": outcome.objective,
                "feasible": outcome.feasible,
                "best": outcome.best.candidate.params(),
                "value": outcome.best.objective,
                "violations": list(outcome.best.violations),
                "trace": str(trace_path),
            },
            indent=2,
            sort_keys=True,
        )
    )
    if not outcome.feasible:
        sys.exit(2)


@main.command()
@deal_option
@seed_option
@scenarios_option
@alpha_option
@out_option
def report(deal_path, seed, scenarios, alpha, out_dir) -> None:
    """Run the pipeline and print where every artifact was written."""
    record = _run(deal_path, seed, scenarios, alpha, out_dir, False)
    for name, path in sorted(record.artifacts.items()):
        click.echo(f"{name}\t{path}")


@main.command()
@click.option("--port", type=int, default=8000)
@click.option("--host", type=str, default="127.0.0.1")
@out_option
def serve(port: int, host: str, out_dir) -> None:
    """Start the HTTP service used by the designer UI."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(_out_dir(out_dir)), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
