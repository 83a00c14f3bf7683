"""Waterfall design: slicing chain, validation, conservation."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from peal.design import (
    DesignError,
    WaterfallDesign,
    assemble_positions,
    horizontal_components,
    horizontal_only_design,
    normalize_design,
    validate_design,
    vertical_components,
    vertical_retention_design,
    virtual_positions,
)
from peal.tranching import tranche

ICF = [0, 92, 87, 41]


def small_tranching():
    rows = [[0, 0, 55, -35], [0, 0, 0, 0]]
    return tranche(rows, ICF, Fraction(1, 2))


def test_virtual_positions_partition_icf():
    tr = small_tranching()
    vp = virtual_positions(tr)
    assert len(vp) == 3
    for t in range(4):
        assert vp[0][t] + vp[1][t] + vp[2][t] == ICF[t]


def test_zero_loss_gives_single_virtual_position():
    tr = tranche([[0, 0, 0, 0]] * 2, ICF, Fraction(1, 2))
    vp = virtual_positions(tr)
    assert set(vp[1]) == {0} and set(vp[2]) == {0}
    assert vp[0] == [Fraction(x) for x in ICF]


def test_retention_design_is_valid(retention_design):
    assert retention_design.h == 5
    assert retention_design.v == 8
    assert validate_design(retention_design) == []


def test_first_horizontal_component_tracks_embedded_mean(retention_design):
    tr = small_tranching()
    vp = virtual_positions(tr)
    sse_mean = [Fraction(0), Fraction(0), Fraction(0), Fraction(5, 2)]
    hc = horizontal_components(vp, retention_design, sse_mean)
    assert len(hc) == 5
    assert hc[0] == sse_mean
    # Equal split of the remainder across the two other VP1 slices.
    assert hc[1] == hc[2]
    assert hc[3] == vp[1] and hc[4] == vp[2]


def test_infeasible_when_embedded_exceeds_senior_tranche(retention_design):
    tr = small_tranching()
    vp = virtual_positions(tr)
    with pytest.raises(DesignError, match="infeasible"):
        horizontal_components(vp, retention_design, [Fraction(1)] + [Fraction(0)] * 3)


def test_vertical_components_split_by_weights(retention_design):
    tr = small_tranching()
    vp = virtual_positions(tr)
    hc = horizontal_components(vp, retention_design, [Fraction(0)] * 4)
    vc = vertical_components(hc, retention_design)
    assert len(vc) == 8
    r = Fraction(5, 100)
    for t in range(4):
        assert vc[2][t] == (1 - r) * hc[2][t]
        assert vc[3][t] == r * hc[2][t]


def test_positions_conserve_icf(retention_design):
    tr = small_tranching()
    vp = virtual_positions(tr)
    sse_mean = [Fraction(0)] + [Fraction(1, 2)] * 3
    hc = horizontal_components(vp, retention_design, sse_mean)
    vc = vertical_components(hc, retention_design)
    costs, notes = assemble_positions(vc, retention_design)
    assert len(costs) == 1 and len(notes) == 4
    for t in range(4):
        total = sum(row[t] for row in costs) + sum(row[t] for row in notes)
        assert total == ICF[t]


def test_retention_note_takes_fixed_share(retention_design):
    """N4 = r * (ICF - HC1 - HC2) when v4=v6=v8=r."""
    tr = small_tranching()
    vp = virtual_positions(tr)
    sse_mean = [Fraction(0)] * 4
    hc = horizontal_components(vp, retention_design, sse_mean)
    vc = vertical_components(hc, retention_design)
    _, notes = assemble_positions(vc, retention_design)
    r = Fraction(5, 100)
    for t in range(4):
        assert notes[3][t] == r * (ICF[t] - hc[0][t] - hc[1][t])


def test_horizontal_only_design_reproduces_layers():
    d = normalize_design(horizontal_only_design(3))
    assert validate_design(d) == []
    tr = small_tranching()
    vp = virtual_positions(tr)
    hc = horizontal_components(vp, d, [Fraction(0)] * 4)
    vc = vertical_components(hc, d)
    assert vc == hc  # no vertical splits
    costs, notes = assemble_positions(vc, d)
    assert costs[0] == hc[0]
    assert notes == hc[1:]


def test_validation_catches_constructed_breaches(retention_design):
    broken_v = WaterfallDesign(
        hs=retention_design.hs,
        vs=retention_design.vs,
        cost_map=retention_design.cost_map,
        note_map=retention_design.note_map,
        h_weights=retention_design.h_weights,
        v_weights=(
            (Fraction(1),),
            (Fraction(1),),
            (Fraction(45, 100), Fraction(45, 100)),  # sums to 90%
            retention_design.v_weights[3],
            retention_design.v_weights[4],
        ),
    )
    problems = validate_design(broken_v)
    assert any("HC3" in p and "sum" in p for p in problems)

    unmapped = WaterfallDesign(
        hs=retention_design.hs,
        vs=retention_design.vs,
        cost_map=((1, 2),),
        note_map=((3,), (5,), (7,), (4, 8)),  # VC6 uncovered
        h_weights=retention_design.h_weights,
        v_weights=retention_design.v_weights,
    )
    problems = validate_design(unmapped)
    assert any("not mapped" in p and "6" in p for p in problems)

    double = WaterfallDesign(
        hs=retention_design.hs,
        vs=retention_design.vs,
        cost_map=((1, 2),),
        note_map=((3,), (5,), (7, 5), (4, 6, 8)),
        h_weights=retention_design.h_weights,
        v_weights=retention_design.v_weights,
    )
    assert any("both" in p for p in validate_design(double))


def test_subdivided_first_component_rejected(retention_design):
    d = WaterfallDesign(
        hs=retention_design.hs,
        vs=(2, 1, 2, 2, 2),
        cost_map=retention_design.cost_map,
        note_map=((3,), (5,), (7,), (4, 6, 8, 9)),
        h_weights=retention_design.h_weights,
        v_weights=((Fraction(1, 2), Fraction(1, 2)),) + retention_design.v_weights[1:],
    )
    assert any("cannot be subdivided" in p for p in validate_design(d))


def test_quality_tags_follow_ancestry(retention_design):
    assert retention_design.quality_of_vc(1) == "senior"
    assert retention_design.quality_of_vc(4) == "senior"
    assert retention_design.quality_of_vc(5) == "mezzanine"
    assert retention_design.quality_of_vc(8) == "junior"


@given(st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100)))
def test_any_retention_fraction_conserves(r):
    d = normalize_design(vertical_retention_design(r))
    assert validate_design(d) == []
    tr = small_tranching()
    vp = virtual_positions(tr)
    hc = horizontal_components(vp, d, [Fraction(0)] * 4)
    vc = vertical_components(hc, d)
    costs, notes = assemble_positions(vc, d)
    for t in range(4):
        assert sum(row[t] for row in costs) + sum(row[t] for row in notes) == ICF[t]
