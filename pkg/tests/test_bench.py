from __future__ import annotations

import csv
import io

import pytest

from certsched.bench import (CSV_COLUMNS, SweepRow, emit_csv, rows_to_dicts,
                             sweep_constellation, sweep_orders)


@pytest.fixture(scope="module")
def quick_rows():
    return sweep_orders([25, 50], seed=0)


class TestSweepOrders:
    def test_two_rows(self, quick_rows):
        assert [r.axis for r in quick_rows] == [25, 50]

    def test_extraction_dominates_solve(self, quick_rows):
        for row in quick_rows:
            assert row.total_extract_ms > row.solve_ms

    def test_population_identity(self, quick_rows):
        for row in quick_rows:
            assert (row.n_scheduled + row.n_certificates + row.n_prefiltered
                    + row.n_tradeoffs) == row.n_orders

    def test_timing_fields_positive(self, quick_rows):
        for row in quick_rows:
            assert row.solve_ms > 0 and row.total_extract_ms > 0

    def test_per_cert_definition(self, quick_rows):
        for row in quick_rows:
            assert row.per_cert_ms == pytest.approx(
                round(row.total_extract_ms / max(1, row.n_certificates), 3))

    def test_repeat_same_seed_identical_nontiming(self, quick_rows):
        again = sweep_orders([25, 50], seed=0)
        timing = {"solve_ms", "total_extract_ms", "per_cert_ms", "cpu_ms"}
        for a, b in zip(quick_rows, again):
            for col in CSV_COLUMNS:
                if col not in timing:
                    assert getattr(a, col) == getattr(b, col), col

    def test_empty_points_rejected(self):
        with pytest.raises(ValueError):
            sweep_orders([])


class TestSweepConstellation:
    def test_single_point(self):
        rows = sweep_constellation([4], n_orders=12, seed=0)
        assert len(rows) == 1
        assert rows[0].n_satellites == 4

    def test_endpoint_trend(self):
        rows = sweep_constellation([5, 30], n_orders=30, seed=0)
        assert rows[0].n_certificates >= rows[-1].n_certificates
        assert rows[0].n_scheduled <= rows[-1].n_scheduled

    def test_trend_holds_across_seeds(self):
        for seed in (0, 1, 2):
            rows = sweep_constellation([4, 16], n_orders=20, seed=seed)
            assert rows[0].n_certificates >= rows[-1].n_certificates


class TestCsv:
    def test_header_only_for_empty(self):
        text = emit_csv([])
        assert text == ",".join(CSV_COLUMNS) + "\n"

    def test_round_trip(self, quick_rows):
        text = emit_csv(quick_rows)
        parsed = list(csv.DictReader(io.StringIO(text)))
        assert len(parsed) == 2
        assert parsed[0]["axis"] == "25"
        assert int(parsed[1]["n_orders"]) == 50

    def test_columns_match_row_fields(self):
        assert set(CSV_COLUMNS) == set(SweepRow.__dataclass_fields__)

    def test_json_rows(self, quick_rows):
        docs = rows_to_dicts(quick_rows)
        assert all(set(d) == set(CSV_COLUMNS) for d in docs)


def test_parallel_mode_runs():
    rows = sweep_orders([15], seed=0, parallel=True)
    assert rows[0].cpu_ms > 0
    assert (rows[0].n_scheduled + rows[0].n_certificates
            + rows[0].n_prefiltered + rows[0].n_tradeoffs) == 15
