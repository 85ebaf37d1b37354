"""Tests for monthly-report parsing and inter-failure expansion."""

import io

import numpy as np
import pytest

from avreliability.disengagements import (
    FailureHistory,
    MonthlyRecord,
    expand_to_interfailure,
    parse_monthly_csv,
    read_interfailure_csv,
    waymo_fixture_path,
    write_interfailure_csv,
)
from avreliability.errors import InvalidConstraints, NonMonotoneMonths, ParseError


def _records(text: str):
    return parse_monthly_csv(io.StringIO(text))


class TestParsing:
    def test_single_row_maps_directly(self):
        recs = _records("month,miles,disengagements\n2015-01,42000,18\n")
        assert recs == [MonthlyRecord(0, 42000.0, 18)]

    def test_empty_after_header(self):
        assert _records("month,miles,disengagements\n") == []

    def test_negative_miles_rejected_with_line_number(self):
        with pytest.raises(ParseError) as err:
            _records("month,miles,disengagements\n2015-01,-5,0\n")
        assert err.value.line == 2

    def test_events_without_mileage_rejected(self):
        with pytest.raises(ParseError):
            _records("month,miles,disengagements\n2015-01,0,3\n")

    def test_month_order_enforced(self):
        text = "month,miles,disengagements\n2015-02,10,0\n2015-01,10,0\n"
        with pytest.raises(NonMonotoneMonths):
            _records(text)

    def test_duplicate_month_rejected(self):
        text = "month,miles,disengagements\n2015-01,10,0\n2015-01,10,0\n"
        with pytest.raises(NonMonotoneMonths):
            _records(text)

    def test_integer_month_labels_compare_numerically(self):
        text = "month,miles,disengagements\n2,10,0\n10,10,0\n"
        recs = _records(text)
        assert [r.month_index for r in recs] == [0, 1]

    def test_header_checked(self):
        with pytest.raises(ParseError):
            _records("a,b,c\n1,2,3\n")

    def test_bad_count_reports_line(self):
        with pytest.raises(ParseError) as err:
            _records("month,miles,disengagements\n2015-01,10,x\n")
        assert err.value.line == 2

    def test_bytes_stream_accepted(self):
        recs = parse_monthly_csv(io.BytesIO(b"month,miles,disengagements\n2015-01,5,0\n"))
        assert recs[0].miles == 5.0


FOUR_MONTHS = "month,miles,disengagements\n2015-01,100,2\n2015-02,50,0\n2015-03,200,3\n2015-04,80,1\n"


class TestExpansion:
    def test_single_event_lands_inside_month(self):
        recs = _records("month,miles,disengagements\n2015-01,100,1\n")
        for seed in range(20):
            fh = expand_to_interfailure(recs, seed=seed)
            assert len(fh) == 1
            assert 0 < fh.interfailure_miles[0] <= 100

    def test_counts_and_month_boundaries_preserved(self):
        recs = _records(FOUR_MONTHS)
        fh = expand_to_interfailure(recs, seed=3)
        assert len(fh) == 6
        assert fh.total_miles == 430.0
        positions = np.cumsum(fh.gaps)
        edges = [0.0, 100.0, 150.0, 350.0, 430.0]
        counts = np.histogram(positions, bins=edges)[0]
        assert list(counts) == [2, 0, 3, 1]

    def test_zero_event_months_stretch_gaps(self):
        recs = _records(FOUR_MONTHS)
        fh = expand_to_interfailure(recs, seed=9)
        positions = np.cumsum(fh.gaps)
        # Nothing lands in the empty second month.
        assert not np.any((positions > 100.0) & (positions <= 150.0))

    def test_seeds_differ_but_structure_is_invariant(self):
        recs = _records(FOUR_MONTHS)
        a = expand_to_interfailure(recs, seed=1)
        b = expand_to_interfailure(recs, seed=2)
        assert a.interfailure_miles != b.interfailure_miles
        for fh in (a, b):
            positions = np.cumsum(fh.gaps)
            counts = np.histogram(positions, bins=[0.0, 100.0, 150.0, 350.0, 430.0])[0]
            assert list(counts) == [2, 0, 3, 1]

    def test_deterministic_for_fixed_seed(self):
        recs = _records(FOUR_MONTHS)
        assert (
            expand_to_interfailure(recs, seed=5).interfailure_miles
            == expand_to_interfailure(recs, seed=5).interfailure_miles
        )

    def test_censored_tail_is_remaining_exposure(self):
        recs = _records(FOUR_MONTHS)
        fh = expand_to_interfailure(recs, seed=4)
        assert fh.censored_tail == pytest.approx(fh.total_miles - float(np.sum(fh.gaps)))
        assert fh.censored_tail >= 0

    def test_no_events_at_all(self):
        recs = _records("month,miles,disengagements\n2015-01,100,0\n")
        fh = expand_to_interfailure(recs, seed=0)
        assert len(fh) == 0
        assert fh.total_miles == 100.0


class TestFailureHistoryType:
    def test_gaps_must_be_positive(self):
        with pytest.raises(InvalidConstraints):
            FailureHistory(interfailure_miles=(1.0, 0.0), total_miles=10.0, seed=0)

    def test_gaps_cannot_exceed_exposure(self):
        with pytest.raises(InvalidConstraints):
            FailureHistory(interfailure_miles=(6.0, 6.0), total_miles=10.0, seed=0)


class TestInterchange:
    def test_round_trip(self, tmp_path):
        recs = _records(FOUR_MONTHS)
        fh = expand_to_interfailure(recs, seed=7)
        path = tmp_path / "gaps.csv"
        write_interfailure_csv(fh, path)
        back = read_interfailure_csv(path)
        assert back.interfailure_miles == fh.interfailure_miles

    def test_header_validated(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,y\n1,2\n")
        with pytest.raises(ParseError):
            read_interfailure_csv(path)


class TestBundledFixture:
    def test_shape_and_totals(self):
        recs = parse_monthly_csv(str(waymo_fixture_path()))
        assert len(recs) == 51
        assert sum(r.disengagements for r in recs) == 528

    def test_expansion_preserves_event_count(self):
        recs = parse_monthly_csv(str(waymo_fixture_path()))
        fh = expand_to_interfailure(recs, seed=42)
        assert len(fh) == 528

    def test_rate_declines_over_the_record(self):
        recs = parse_monthly_csv(str(waymo_fixture_path()))
        early = sum(r.disengagements for r in recs[:12]) / sum(r.miles for r in recs[:12])
        late = sum(r.disengagements for r in recs[-12:]) / sum(r.miles for r in recs[-12:])
        assert late < early / 3
