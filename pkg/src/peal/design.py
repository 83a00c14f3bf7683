"""Waterfall design: virtual positions, horizontal/vertical slicing, mapping.

The three virtual positions (complementary / second / first loss tranche) are
cut into horizontal components (payment-priority layers), each horizontal
component into vertical components (pari-passu slices), and the vertical
components are mapped onto cost and note positions.  Percentages are exact
rationals; the full chain conserves ICF(t) at every month.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .tranching import Tranching

QUALITIES = ("senior", "mezzanine", "junior")


class DesignError(ValueError):
    """A waterfall design violates a structural invariant."""


@dataclass(frozen=True)
class WaterfallDesign:
    """Slicing superstructure over the three virtual positions.

    hs[p] is the number of horizontal slices of virtual position p+1; the
    first slice of VP1 is always the average super-senior embedded series, so
    h_weights[0] carries only the remaining hs[0]-1 weights (fractions of
    VP1 minus that series).  vs[j] and v_weights[j] slice horizontal
    component j+1 vertically; the first horizontal component cannot be
    subdivided.  cost_map/note_map hold 1-based vertical-component indices.
    """

    hs: tuple[int, int, int]
    vs: tuple[int, ...]
    cost_map: tuple[tuple[int, ...], ...]
    note_map: tuple[tuple[int, ...], ...]
    h_weights: tuple[tuple[Fraction, ...], ...] = ()
    v_weights: tuple[tuple[Fraction, ...], ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def h(self) -> int:
        """H: total number of horizontal slices."""
        return sum(self.hs)

    @property
    def v(self) -> int:
        """V: total number of vertical components (rectangles)."""
        return sum(self.vs)

    @property
    def x(self) -> int:
        return len(self.cost_map)

    @property
    def y(self) -> int:
        return len(self.note_map)

    @property
    def p(self) -> int:
        return self.x + self.y

    def vp_of_hc(self, j: int) -> int:
        """Parent virtual position (1-based) of horizontal component j (1-based)."""
        bound = 0
        for p, count in enumerate(self.hs, start=1):
            bound += count
            if j <= bound:
                return p
        raise DesignError(f"horizontal component {j} out of range 1..{self.h}")

    def hc_of_vc(self, i: int) -> int:
        """Parent horizontal component (1-based) of vertical component i (1-based)."""
        bound = 0
        for j, count in enumerate(self.vs, start=1):
            bound += count
            if i <= bound:
                return j
        raise DesignError(f"vertical component {i} out of range 1..{self.v}")

    def quality_of_vc(self, i: int) -> str:
        """Senior/mezzanine/junior tag inherited from the ancestor virtual position."""
        return QUALITIES[self.vp_of_hc(self.hc_of_vc(i)) - 1]

    def vc_fraction(self, i: int) -> Fraction:
        """v_i: the vertical percentage of component i within its parent."""
        j = self.hc_of_vc(i)
        offset = i - 1 - sum(self.vs[: j - 1])
        return self.v_weights[j - 1][offset]

    def vcs_of_hc(self, j: int) -> tuple[int, ...]:
        start = sum(self.vs[: j - 1]) + 1
        return tuple(range(start, start + self.vs[j - 1]))


def _default_weights(counts) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(
        tuple([Fraction(1, c)] * c) if c > 0 else () for c in counts
    )


def normalize_design(d: WaterfallDesign) -> WaterfallDesign:
    """Fill in equal-split weights wherever the design omits them."""
    h_weights = d.h_weights or _default_weights([d.hs[0] - 1, d.hs[1], d.hs[2]])
    v_weights = d.v_weights or _default_weights(d.vs)
    return WaterfallDesign(d.hs, d.vs, d.cost_map, d.note_map, h_weights, v_weights, d.notes)


def validate_design(d: WaterfallDesign) -> list[str]:
    """Structural checks; returns human-readable violations (empty iff valid)."""
    violations: list[str] = []
    if len(d.hs) != 3:
        violations.append(f"NP must be 3 virtual positions, got {len(d.hs)}")
        return violations
    if any(c < 1 for c in d.hs):
        violations.append(f"each virtual position needs >= 1 horizontal slice, got HS={d.hs}")
        return violations
    if len(d.vs) != d.h:
        violations.append(f"VS must have H={d.h} entries, got {len(d.vs)}")
        return violations
    if any(c < 1 for c in d.vs):
        violations.append(f"each horizontal component needs >= 1 vertical slice, got VS={d.vs}")
        return violations
    if d.vs[0] != 1:
        violations.append("the first horizontal component cannot be subdivided (VS[1] must be 1)")
    expected_h = (d.hs[0] - 1, d.hs[1], d.hs[2])
    if len(d.h_weights) != 3:
        violations.append("h_weights must have one tuple per virtual position")
    else:
        for p, (weights, want) in enumerate(zip(d.h_weights, expected_h), start=1):
            if len(weights) != want:
                violations.append(
                    f"VP{p}: expected {want} horizontal weights, got {len(weights)}"
                )
                continue
            if want and sum(weights) != 1:
                violations.append(f"VP{p}: horizontal percentages sum to {sum(weights)}, not 100%")
            if any(w < 0 for w in weights):
                violations.append(f"VP{p}: negative horizontal percentage")
    if len(d.v_weights) != len(d.vs):
        violations.append("v_weights must have one tuple per horizontal component")
    else:
        for j, (weights, count) in enumerate(zip(d.v_weights, d.vs), start=1):
            if len(weights) != count:
                violations.append(f"HC{j}: expected {count} vertical weights, got {len(weights)}")
                continue
            if sum(weights) != 1:
                violations.append(f"HC{j}: vertical percentages sum to {sum(weights)}, not 100%")
            if any(w < 0 for w in weights):
                violations.append(f"HC{j}: negative vertical percentage")
    if d.x < 1:
        violations.append("at least one cost position required (X >= 1)")
    if d.y < 1:
        violations.append("at least one note position required (Y >= 1)")
    seen: dict[int, str] = {}
    for label, groups in (("C", d.cost_map), ("N", d.note_map)):
        for idx, group in enumerate(groups, start=1):
            for i in group:
                if not 1 <= i <= d.v:
                    violations.append(f"{label}{idx}: vertical component {i} out of range 1..{d.v}")
                elif i in seen:
                    violations.append(
                        f"vertical component {i} mapped by both {seen[i]} and {label}{idx}"
                    )
                else:
                    seen[i] = f"{label}{idx}"
    missing = [i for i in range(1, d.v + 1) if i not in seen]
    if missing:
        violations.append(f"vertical components not mapped to any position: {missing}")
    return violations


def virtual_positions(tr: Tranching) -> list[list[Fraction]]:
    """VP1=CLT, VP2=SLT, VP3=FLT: the outbound mirror of the tranching."""
    return [list(tr.clt), list(tr.slt), list(tr.flt)]


def horizontal_components(vp, d: WaterfallDesign, sse_mean) -> list[list[Fraction]]:
    """HC series in priority order; HC1 is pinned to the average SSE series.

    The first slice of VP1 equals sse_mean(t); the remaining VP1 slices share
    VP1(t) - sse_mean(t) by their weights.  Infeasible when the embedded
    series exceeds VP1 at some month.
    """
    length = len(vp[0])
    sse_mean = list(sse_mean) + [Fraction(0)] * (length - len(sse_mean))
    for t in range(length):
        if sse_mean[t] > vp[0][t]:
            raise DesignError(
                f"design infeasible at t={t}: mean embedded series {sse_mean[t]} "
                f"exceeds VP1 {vp[0][t]}"
            )
    out: list[list[Fraction]] = []
    out.append([Fraction(x) for x in sse_mean[:length]])
    remainder = [Fraction(vp[0][t]) - sse_mean[t] for t in range(length)]
    for w in d.h_weights[0]:
        out.append([w * r for r in remainder])
    for p in (1, 2):
        for w in d.h_weights[p]:
            out.append([w * Fraction(x) for x in vp[p]])
    return out


def vertical_components(hc, d: WaterfallDesign) -> list[list[Fraction]]:
    """VC_i(t) = HC_parent(t) * v_i."""
    out: list[list[Fraction]] = []
    for j, weights in enumerate(d.v_weights, start=1):
        for w in weights:
            out.append([w * x for x in hc[j - 1]])
    return out


def assemble_positions(vc, d: WaterfallDesign):
    """Sum mapped vertical components into cost and note position series."""
    length = len(vc[0]) if vc else 0

    def mapped(groups):
        series = []
        for group in groups:
            row = [Fraction(0)] * length
            for i in group:
                for t in range(length):
                    row[t] += vc[i - 1][t]
            series.append(row)
        return series

    return mapped(d.cost_map), mapped(d.note_map)


def vertical_retention_design(retention: Fraction = Fraction(5, 100)) -> WaterfallDesign:
    """The worked V=8 structure: one cost, three tranche notes, one retention note.

    HS={3,1,1}; VS={1,1,2,2,2}.  The retention note spans all three tranches
    by taking the same vertical fraction of every loss-bearing horizontal
    component, so it absorbs losses pari passu across the stack.
    """
    retention = Fraction(retention)
    if not 0 < retention < 1:
        raise DesignError("retention fraction must lie in (0,1)")
    keep = 1 - retention
    return WaterfallDesign(
        hs=(3, 1, 1),
        vs=(1, 1, 2, 2, 2),
        cost_map=((1, 2),),
        note_map=((3,), (5,), (7,), (4, 6, 8)),
        h_weights=((Fraction(1, 2), Fraction(1, 2)), (Fraction(1),), (Fraction(1),)),
        v_weights=(
            (Fraction(1),),
            (Fraction(1),),
            (keep, retention),
            (keep, retention),
            (keep, retention),
        ),
        notes=("senior", "mezzanine", "junior", "retention"),
    )


def horizontal_only_design(note_count: int = 3) -> WaterfallDesign:
    """Classical design: one cost layer plus one note per loss layer, no splits."""
    if note_count < 3:
        raise DesignError("need at least one note per virtual position")
    extra = note_count - 2  # slices of VP1 beyond the embedded layer and the cost
    hs = (1 + extra, 1, 1)
    h = sum(hs)
    weights0 = tuple([Fraction(1, extra)] * extra) if extra else ()
    return WaterfallDesign(
        hs=hs,
        vs=tuple([1] * h),
        cost_map=((1,),),
        note_map=tuple((i,) for i in range(2, h + 1)),
        h_weights=(weights0, (Fraction(1),), (Fraction(1),)),
        v_weights=tuple([(Fraction(1),)] * h),
    )
