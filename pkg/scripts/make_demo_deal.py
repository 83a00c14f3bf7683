"""Build the bundled demo deal file: one consumer-loan cluster poured
through the V=8 vertical-retention structure.

Run from the repository root:  python3 scripts/make_demo_deal.py
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from peal.assets import build_deal
from peal.dealfile import DealPackage, dump_deal
from peal.design import normalize_design, vertical_retention_design
from peal.frequencies import FrequencySchedule
from peal.scenarios import ClusterProfile, GeneratorConfig

TERM = 24  # months
RATE = Fraction(6, 100)  # annual interest on the outstanding balance


def level_schedule(principal: int, term: int) -> tuple[list[int], list[int]]:
    """Straight-line amortization with simple monthly interest, in cents."""
    capital = [0] + [principal // term] * term
    capital[-1] += principal - sum(capital)
    interest = [0]
    outstanding = principal
    monthly = RATE / 12
    for t in range(1, term + 1):
        interest.append(int(outstanding * monthly))
        outstanding -= capital[t]
    return capital, interest


def demo_package() -> DealPackage:
    principals = [120_000_00, 90_000_00, 150_000_00, 60_000_00,
                  200_000_00, 80_000_00, 110_000_00, 95_000_00]
    profile = ClusterProfile(
        hazards={"de": 0.005, "pe": 0.003},
        recovery_fraction=0.6,
        recovery_lag=3,
        recovery_cost=250_00,
        default_correlation=0.15,
    )
    deal = build_deal(
        [[level_schedule(p, TERM) for p in principals]],
        tp=TERM,
        profiles=[profile],
    )
    design = normalize_design(vertical_retention_design(Fraction(5, 100)))
    # Per layer: cost and senior monthly, mezzanine quarterly, junior annual.
    frequencies = FrequencySchedule((12, 12, 4, 4, 4, 4, 1, 1))
    return DealPackage(
        deal=deal,
        design=design,
        frequencies=frequencies,
        generator=GeneratorConfig(count=400, master_seed=20_24),
        alpha=Fraction(95, 100),
        eta=Fraction(2, 100),
        risk_weights={
            "senior": Fraction(15, 100),
            "mezzanine": Fraction(60, 100),
            "junior": Fraction(1),
        },
        car=Fraction(8, 100),
        # Slightly below the pool's aggregate fair value, split roughly along
        # the fair-value shares of the four notes.
        c0=600_000_00,
        cpy=(Fraction(46, 100), Fraction(44, 100), Fraction(5, 100), Fraction(5, 100)),
    )


def main() -> None:
    out = Path(__file__).resolve().parent.parent / "deals" / "demo.json"
    out.parent.mkdir(exist_ok=True)
    dump_deal(demo_package(), out)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
