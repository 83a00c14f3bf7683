"""Run the bundled demo deal end to end and print a structuring summary.

Usage:  python3 scripts/run_demo.py [path/to/deal.json]
Reports land under runs/<run_id>/ next to the repository root.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from peal.dealfile import parse_deal
from peal.pipeline import run_pipeline

ROOT = Path(__file__).resolve().parent.parent


def main() -> None:
    deal_path = Path(sys.argv[1]) if len(sys.argv) > 1 else ROOT / "deals" / "demo.json"
    pkg = parse_deal(deal_path)
    record = run_pipeline(pkg, ROOT / "runs")
    run_dir = ROOT / "runs" / record.run_id

    features = json.loads((run_dir / "features.json").read_text())
    print(f"deal      {deal_path}")
    print(f"run       {record.run_id}  ({pkg.generator.count} scenarios, seed {pkg.generator.master_seed})")
    print(f"reports   {run_dir}")
    print()
    print("verdicts")
    for name, passed in sorted(record.verdicts.items()):
        print(f"  {name:<18} {'pass' if passed else 'FAIL'}")
    margin = features["substantial_margin"]
    print(f"  substantial margin sm={margin['sm']:.3f} "
          f"(threshold {margin['sigma'] / margin['tflt']:.3f})"
          if margin["applicable"] else "  substantial margin n/a (no first-loss mass)")
    print()
    print("notes")
    for label, fv, price, rates in zip(
        pkg.design.notes or [f"N{y+1}" for y in range(pkg.design.y)],
        features["fair_value"],
        features["note_prices"] or [None] * pkg.design.y,
        features["irr"],
    ):
        line = f"  {label:<12} fair value {fv['mean']:>14,.2f}"
        if price is not None:
            line += f"  price {price:>14,.2f}"
        if rates is not None:
            line += f"  gross irr {rates['girr_annual']:>7.2%}  net irr {rates['nirr_annual']:>7.2%}"
        print(line)
    crossing = features["cva"]["crossing_pairs"]
    if crossing:
        print()
        print("cva crossings: " + ", ".join("/".join(p) for p in crossing))


if __name__ == "__main__":
    main()
