#!/usr/bin/env python3
"""
Tests for the r = 2 exclusion search over generalized decomposition columns.

The D(2,1) search runs to completion in a few seconds; the D(2,2) search
runs with small node caps, and the pieces that decide a leaf are checked
directly.
"""

import sys
from pathlib import Path

import pytest

# Add src to path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root / "src"))

from redei_blocks import decomp
from redei_blocks.errors import InvalidParametersError
from redei_blocks.utils import reset_env


@pytest.fixture(autouse=True)
def fresh_env():
    reset_env()
    yield
    reset_env()


class TestLeafEvaluation:
    def test_canonical_d21_columns_are_consistent(self):
        scenario = decomp.SCENARIOS[decomp.RS1_R2]
        rows = decomp.seed_rows_rs1()
        assert len(rows) == 10
        assert all(len(row) == 8 for row in rows)
        witness = decomp.evaluate_columns(scenario, rows)
        assert witness is not None
        assert witness["snf"] == [2, 16]

    def test_columns_with_wrong_complement_rank(self):
        scenario = decomp.SCENARIOS[decomp.RS1_R2]
        rows = [row[:-1] for row in decomp.seed_rows_rs1()]
        assert decomp.evaluate_columns(scenario, rows) is None

    def test_seed_column_norms(self):
        rows = decomp.seed_rows_rs1()
        columns = list(zip(*rows))
        norms = [sum(v * v for v in col) for col in columns]
        assert norms == [16, 16, 4, 4, 4, 4, 8, 6]


class TestSearchCaps:
    def test_from_env(self, monkeypatch):
        monkeypatch.setenv("REDEI_CAP_NODES", "1234")
        monkeypatch.setenv("REDEI_CAP_SECONDS", "2.5")
        reset_env()
        caps = decomp.SearchCaps.from_env()
        assert (caps.nodes, caps.seconds) == (1234, 2.5)

    def test_zero_cap_is_inconclusive(self):
        result = decomp.exclusion_search_r2(decomp.RS1_R2, decomp.SearchCaps(nodes=0, seconds=10.0))
        assert result.status == decomp.INCONCLUSIVE
        assert result.explored == 0
        assert result.consistent_found == 0

    def test_unknown_scenario(self):
        with pytest.raises(InvalidParametersError):
            decomp.exclusion_search_r2("rs1_r3", decomp.SearchCaps(nodes=10, seconds=1.0))


class TestSearch:
    def test_rs1_search_reaches_the_canonical_columns(self):
        result = decomp.exclusion_search_r2(decomp.RS1_R2, decomp.SearchCaps(nodes=2_000_000, seconds=300.0))
        assert result.status == decomp.COMPLETE
        assert result.passed
        assert result.consistent_found >= 1
        assert decomp.candidate_key(decomp.seed_rows_rs1()) in result.found_keys
        assert len(result.witnesses) == min(16, result.consistent_found)
        for witness in result.witnesses:
            assert witness["snf"] == [2, 16]

    def test_rs1_capped_search_starts_empty(self):
        result = decomp.exclusion_search_r2(decomp.RS1_R2, decomp.SearchCaps(nodes=1, seconds=10.0))
        assert result.status == decomp.INCONCLUSIVE
        assert result.consistent_found == 0
        assert not result.passed

    def test_candidate_key_ignores_row_order_and_sign(self):
        rows = decomp.seed_rows_rs1()
        shuffled = [[-v for v in rows[-1]]] + rows[:-1]
        assert decomp.candidate_key(shuffled) == decomp.candidate_key(rows)

    def test_req_s_partial_search_finds_nothing(self):
        result = decomp.exclusion_search_r2(decomp.REQ_S_R2_K14, decomp.SearchCaps(nodes=5_000, seconds=30.0))
        assert result.status in (decomp.COMPLETE, decomp.INCONCLUSIVE)
        assert result.consistent_found == 0
        assert result.witnesses == []
        assert result.explored > 0
