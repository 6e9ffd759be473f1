"""Tests for the embedded batch plan tables and code-letter sizes.

The expected cells come from a second, independent transcription of the
tables in oracles.py, so a data-file typo cannot hide behind the lookup
code agreeing with itself.
"""

import random

import pytest

import lotsampler.tables as tables
from lotsampler import (
    InvalidParameterError,
    PLAN_ENTRIES,
    PlanCase,
    UnknownCodeLetterError,
    code_letter_size,
    export_plan_table_csv,
    lookup_plan,
)

from oracles import AQL_COLUMNS, CASE_I_TABLE, CASE_II_TABLE, reference_cell

_REFERENCE = {PlanCase.CASE_I: CASE_I_TABLE, PlanCase.CASE_II: CASE_II_TABLE}


# ── lookup_plan ──────────────────────────────────────────────────────────────


class TestLookupPlan:
    def test_batch_100(self):
        assert lookup_plan(100, 0.1, PlanCase.CASE_I) == (20, 5)

    def test_smallest_batch(self):
        assert lookup_plan(2, 0.025, PlanCase.CASE_I) == (2, 0)

    def test_open_ended_row(self):
        assert lookup_plan(5000, 0.1, PlanCase.CASE_I) == (139, 21)

    def test_blank_cells_not_found(self):
        assert lookup_plan(600, 0.025, PlanCase.CASE_I) is None
        assert lookup_plan(2000, 0.04, PlanCase.CASE_II) is None
        assert lookup_plan(5000, 0.1, PlanCase.CASE_II) is None

    def test_anomalous_cells_kept_verbatim(self):
        # These two cells break their rows' patterns in the source tables;
        # they are embedded as printed, not smoothed.
        assert lookup_plan(400, 0.025, PlanCase.CASE_I) == (38, 8)
        assert lookup_plan(200, 0.025, PlanCase.CASE_II) == (27, 6)

    def test_total_over_reference_grid(self):
        """Every (row, column) agrees with the independent transcription."""
        for case, table in _REFERENCE.items():
            for lo, hi, _cells in table:
                probes = [lo, hi if hi is not None else lo + 10_000]
                for aql in AQL_COLUMNS:
                    for batch in probes:
                        assert lookup_plan(batch, aql, case) == reference_cell(
                            table, batch, aql
                        ), (case, batch, aql)

    def test_random_probes_against_reference(self):
        rng = random.Random(13)
        for _ in range(200):
            case = rng.choice([PlanCase.CASE_I, PlanCase.CASE_II])
            batch = rng.randint(2, 8000)
            aql = rng.choice(AQL_COLUMNS)
            assert lookup_plan(batch, aql, case) == reference_cell(
                _REFERENCE[case], batch, aql
            )

    def test_rejects_tiny_batch(self):
        with pytest.raises(InvalidParameterError):
            lookup_plan(1, 0.1, PlanCase.CASE_I)

    def test_rejects_unknown_aql(self):
        with pytest.raises(InvalidParameterError):
            lookup_plan(100, 0.05, PlanCase.CASE_I)


# ── embedded data integrity ──────────────────────────────────────────────────


class TestEmbeddedData:
    def test_data_file_round_trips_bit_exactly(self):
        assert tables.data_file_round_trips()

    def test_entry_count(self):
        # 44 cells per case minus the blanks: 3 in case I rows 9-11,
        # |{(501,0.025),(1201,0.025),(1201,0.04)}| etc. Count both references.
        expected = sum(
            len(cells) for table in _REFERENCE.values() for _, _, cells in table
        )
        assert len(PLAN_ENTRIES) == expected

    def test_sample_never_exceeds_bounded_batch(self):
        for entry in PLAN_ENTRIES:
            if entry.batch_hi is not None:
                assert entry.n <= entry.batch_hi


# ── CSV export ───────────────────────────────────────────────────────────────


class TestCsvExport:
    def test_header(self):
        text = export_plan_table_csv(PlanCase.CASE_I)
        assert text.splitlines()[0] == "batch_lo,batch_hi,aql,n,c,case"

    def test_contains_expected_rows(self):
        case_i = export_plan_table_csv(PlanCase.CASE_I)
        assert "91,150,0.1,20,5,CaseI" in case_i.splitlines()
        case_ii = export_plan_table_csv(PlanCase.CASE_II)
        assert "1201,3200,0.1,98,15,CaseII" in case_ii.splitlines()

    def test_blanks_as_empty_fields(self):
        case_ii = export_plan_table_csv(PlanCase.CASE_II)
        assert "3201,,0.1,,,CaseII" in case_ii.splitlines()

    def test_byte_stable(self):
        for case in PlanCase:
            assert export_plan_table_csv(case) == export_plan_table_csv(case)

    def test_lf_line_endings_only(self):
        assert "\r" not in export_plan_table_csv(PlanCase.CASE_I)


# ── code letters ─────────────────────────────────────────────────────────────


class TestCodeLetters:
    def test_first_and_last(self):
        assert code_letter_size("A") == 2
        assert code_letter_size("R") == 2000

    def test_full_ladder(self):
        ladder = [2, 3, 5, 8, 13, 20, 32, 50, 80, 125, 200, 315, 500, 800, 1250, 2000]
        letters = "ABCDEFGHJKLMNPQR"
        assert [code_letter_size(ch) for ch in letters] == ladder

    @pytest.mark.parametrize("letter", ["I", "O", "S", "Z", "?"])
    def test_unassigned_letters_rejected(self, letter):
        with pytest.raises(UnknownCodeLetterError):
            code_letter_size(letter)

    def test_lowercase_normalized(self):
        assert code_letter_size("k") == 125
