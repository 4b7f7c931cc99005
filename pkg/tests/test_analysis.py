from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from threepowers.analysis import (
    ScalingRow,
    ScalingTable,
    bound_catalog,
    default_fit_window,
    fit_growth_exponent,
    from_json,
    rows_from_csv,
    rows_to_csv,
    scaling_experiment,
    to_json,
)
from threepowers.arith import ExponentPair
from threepowers.counting import count_report


def test_catalog_1_5_theorem_retrieves_greaves():
    cat = bound_catalog((1, 5))
    assert cat.theorem_exponent == Fraction(17, 6) == cat.greaves
    assert cat.skinner_wooley == Fraction(35, 12)


def test_catalog_1_12_values():
    cat = bound_catalog((1, 12))
    assert cat.theorem_exponent == Fraction(11, 4)
    assert cat.skinner_wooley == Fraction(8, 3) + Fraction(1, 11)


def test_catalog_2_3_has_no_theorem():
    cat = bound_catalog((2, 3))
    assert cat.theorem_exponent is None
    assert cat.applicable() == {"wooley_23": Fraction(7, 3)}
    assert "theorem_exponent" not in cat.to_dict()["bounds"]


def test_catalog_2_4_tsui_wooley():
    assert bound_catalog((2, 4)).tsui_wooley_24 == Fraction(36, 13)


def test_catalog_first_power_bounds_need_d3():
    assert bound_catalog((1, 2)).applicable() == {}


@given(st.integers(1, 40), st.integers(1, 40))
def test_theorem_exponent_below_three(c, gap):
    d = c + gap
    cat = bound_catalog((c, d))
    if d >= 4:
        assert cat.theorem_exponent < 3
        assert cat.theorem_exponent == max(Fraction(11, 4), Fraction(5, 2) + Fraction(5, 3 * c * d))


def test_theorem_vs_skinner_wooley_by_d():
    # exact comparison: 11/4 < 8/3 + 1/(d-1)  iff  d < 13
    for d in range(4, 40):
        beats = bound_catalog((1, d)).theorem_beats("skinner_wooley")
        assert beats == (d < 13)


def test_fit_recovers_exact_power_law():
    Bs = [10, 20, 40, 80]
    assert fit_growth_exponent(Bs, [b**3 for b in Bs]) == pytest.approx(3.0, abs=1e-12)
    assert fit_growth_exponent(Bs, [7 * b**2 for b in Bs]) == pytest.approx(2.0, abs=1e-12)


def test_fit_ignores_zero_rows_and_window():
    Bs = [1, 2, 10, 20, 40]
    Ns = [0, 0, 1000, 8000, 64000]
    assert fit_growth_exponent(Bs, Ns) == pytest.approx(3.0)
    assert fit_growth_exponent(Bs, Ns, (1, 10)) is None


def test_default_window_is_upper_half():
    assert default_fit_window([25, 50, 100, 200, 400]) == (100, 400)
    assert default_fit_window([1, 2]) == (2, 2)


def test_empty_fit():
    table = scaling_experiment((1, 2), [1, 2])
    assert table.fitted_exponent is None and table.fit_window is None


def test_scaling_rows_match_counts():
    table = scaling_experiment((1, 3), [10, 20, 30], shard_count=2)
    for row in table.rows:
        rep = count_report((1, 3), row.B)
        assert (row.nontrivial, row.primitive_nontrivial) == (rep.nontrivial_ordered, rep.primitive_nontrivial)


def test_scaling_is_deterministic():
    a = scaling_experiment((1, 2), [10, 20, 40])
    b = scaling_experiment((1, 2), [10, 20, 40], shard_count=4)
    assert a.without_timings() == b.without_timings()


@pytest.mark.parametrize("schedule", [[], [5, 5], [10, 5], [0, 3]])
def test_schedule_validation(schedule):
    with pytest.raises(ValueError):
        scaling_experiment((1, 2), schedule)


def test_count_report_json_round_trip():
    rep = count_report((1, 2), 30)
    assert from_json(to_json(rep)) == rep
    assert '"nontrivial_ordered": "57060"' in to_json(rep)


def test_scaling_json_round_trip():
    table = scaling_experiment((1, 3), [10, 20, 40])
    assert from_json(to_json(table)) == table


def test_csv_round_trip():
    rows = (ScalingRow(5, 18, 18, 0.125), ScalingRow(10, 1234567890123456789012, None, 1e-7))
    text = rows_to_csv(rows)
    assert text.splitlines()[0] == "B,nontrivial,primitive_nontrivial,seconds"
    assert rows_from_csv(text) == rows


def test_rows_must_increase():
    with pytest.raises(ValueError):
        ScalingTable(ExponentPair(1, 2), (ScalingRow(5, 0, 0, 0.0), ScalingRow(5, 0, 0, 0.0)))
