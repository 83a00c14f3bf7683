"""Payment frequencies, the frequency transformation and the g-check.

Each vertical component pays omega times per year (period tau = 12/omega
months).  Three structural rules bind the schedule to the design: priority
layers pay no less often than lower ones (vertical rule), at frequencies that
are exact multiples (multiple rule), and pari-passu slices of one layer share
a frequency (horizontal rule).  The g-check verifies the horizontal rule on
the dimensioned series themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .design import WaterfallDesign

ALLOWED_OMEGAS = (1, 2, 3, 4, 6, 12)


class FrequencyError(ValueError):
    """Invalid frequency schedule."""


@dataclass(frozen=True)
class FrequencySchedule:
    """omega per vertical component, 1-based index i -> omegas[i-1]."""

    omegas: tuple[int, ...]

    def __post_init__(self) -> None:
        for i, w in enumerate(self.omegas, start=1):
            if w not in ALLOWED_OMEGAS:
                raise FrequencyError(f"VC{i}: omega must be one of {ALLOWED_OMEGAS}, got {w}")

    def omega(self, i: int) -> int:
        return self.omegas[i - 1]

    def tau(self, i: int) -> int:
        """Months between payments of vertical component i."""
        return 12 // self.omegas[i - 1]

    @classmethod
    def uniform(cls, omega: int, count: int) -> "FrequencySchedule":
        return cls(tuple([omega] * count))


def hc_omegas(d: WaterfallDesign, fs: FrequencySchedule) -> list[int]:
    """Representative omega per horizontal component (its first slice's)."""
    return [fs.omega(d.vcs_of_hc(j)[0]) for j in range(1, d.h + 1)]


def validate_frequencies(d: WaterfallDesign, fs: FrequencySchedule, tp: int | None = None) -> list[str]:
    """Check the vertical, multiple and horizontal rules; empty iff compliant."""
    violations: list[str] = []
    if len(fs.omegas) != d.v:
        violations.append(f"schedule must cover V={d.v} vertical components, got {len(fs.omegas)}")
        return violations
    for j in range(1, d.h + 1):
        slice_omegas = {fs.omega(i) for i in d.vcs_of_hc(j)}
        if len(slice_omegas) > 1:
            violations.append(
                f"horizontal rule: HC{j} slices pay at mixed frequencies {sorted(slice_omegas)}"
            )
    per_hc = hc_omegas(d, fs)
    for j in range(d.h - 1):
        upper, lower = per_hc[j], per_hc[j + 1]
        if upper < lower:
            violations.append(
                f"vertical rule: HC{j + 1} pays {upper}/yr, below HC{j + 2} at {lower}/yr"
            )
        elif upper % lower != 0:
            violations.append(
                f"multiple rule: HC{j + 1} frequency {upper} is not a multiple of HC{j + 2}'s {lower}"
            )
    if tp is not None:
        for j, w in enumerate(per_hc, start=1):
            tau = 12 // w
            if tp % tau != 0:
                violations.append(
                    f"TP={tp} is not divisible by HC{j}'s payment period of {tau} months"
                )
    return violations


def freq_transform(cf, omega: int):
    """Bulk a monthly series into payments every tau = 12/omega months.

    The payment at t = i*tau collects the window (t-tau, t]; the window at
    the origin is clipped at month 0.
    """
    if 12 % omega != 0:
        raise FrequencyError(f"omega {omega} does not divide the year")
    tau = 12 // omega
    out = [cf[0] * 0] * len(cf)
    for t in range(0, len(cf), tau):
        out[t] = sum(cf[max(0, t - tau + 1) : t + 1])
    return out


def gross_vertical(vc_i, omega: int):
    """GV_i = F(VC_i, omega_i)."""
    return freq_transform(vc_i, omega)


def gross_verticals(vc, fs: FrequencySchedule):
    return [gross_vertical(series, fs.omega(i)) for i, series in enumerate(vc, start=1)]


def gross_horizontals(gv, d: WaterfallDesign):
    """GH_j = sum of the gross-dimensioned slices of horizontal component j."""
    out = []
    for j in range(1, d.h + 1):
        members = d.vcs_of_hc(j)
        length = len(gv[0])
        col = [sum(gv[i - 1][t] for i in members) for t in range(length)]
        out.append(col)
    return out


def gross_positions(gv, d: WaterfallDesign):
    """GC_x / GN_y: mapped sums of gross-dimensioned vertical components."""
    length = len(gv[0]) if gv else 0

    def mapped(groups):
        series = []
        for group in groups:
            series.append([sum(gv[i - 1][t] for i in group) for t in range(length)])
        return series

    return mapped(d.cost_map), mapped(d.note_map)


@dataclass(frozen=True)
class GCheckResult:
    passed: bool
    ratios: dict[int, dict[int, Fraction]]  # vc index -> {payment month -> g_i(t)}
    violations: tuple[str, ...]


def g_check(gv, gh, d: WaterfallDesign, fs: FrequencySchedule) -> GCheckResult:
    """Verify g_i(t) = GV_i(t)/GH_j(t) equals v_i at every payment month.

    Months where the whole layer pays nothing (0/0) carry no information and
    count as vacuously consistent.
    """
    ratios: dict[int, dict[int, Fraction]] = {}
    violations: list[str] = []
    length = len(gv[0]) if gv else 0
    for i in range(1, d.v + 1):
        j = d.hc_of_vc(i)
        v_i = Fraction(d.vc_fraction(i))
        tau = fs.tau(i)
        per_month: dict[int, Fraction] = {}
        for t in range(0, length, tau):
            denom = gh[j - 1][t]
            if denom == 0:
                if gv[i - 1][t] != 0:
                    violations.append(
                        f"VC{i}: pays {gv[i - 1][t]} at t={t} while HC{j} totals zero"
                    )
                per_month[t] = v_i
                continue
            g = Fraction(gv[i - 1][t]) / Fraction(denom)
            per_month[t] = g
            if g != v_i:
                violations.append(f"VC{i}: g({t})={g} differs from v={v_i}")
        ratios[i] = per_month
    return GCheckResult(not violations, ratios, tuple(violations))
