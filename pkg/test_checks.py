#!/usr/bin/env python3
"""
Tests for the check catalog and the verify-all harness
"""

import json
import sys
from pathlib import Path

import pytest

# Add src to path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root / "src"))

from redei_blocks import checks
from redei_blocks.errors import InvalidParametersError, ToolkitError, UnknownCheckError
from redei_blocks.utils import reset_env


@pytest.fixture(autouse=True)
def fresh_env():
    reset_env()
    yield
    reset_env()


def test_catalog_ids_are_unique():
    ids = checks.list_checks()
    assert len(ids) == len(set(ids)) == len(checks.CATALOG)
    assert "nf.arithmetic" in ids
    assert "search.req_s_r2_k14" in ids


@pytest.mark.parametrize("check_id,params", [
    ("nf.arithmetic", {"r": 2, "s": 1}),
    ("lemma.characteristic", {"r": 3, "s": 2}),
    ("lemma.classcount", {"r": 2, "s": 2}),
    ("thm.invariants.rs1", {"r": 3}),
    ("lemma.invariants.eB3", {"s": 1}),
    ("qf.classes", {"disc": -32}),
    ("qf.reduce", {"a": 8, "b": 8, "c": 3}),
    ("cartan.r2_final", {}),
    ("cartan.congruence", {}),
    ("decomp.residue", {"r": 4}),
    ("decomp.lemma_table", {"r": 2}),
    ("lemma.aut2group", {"r": 3, "s": 3}),
    ("lemma.fixedpoints.abelian", {"s": 4}),
    ("prop.a4_semidirect", {"r": 4}),
    ("prop.fcentric", {"r": 3}),
])
def test_checks_pass(check_id, params):
    report = checks.run_check(check_id, params)
    assert report.status == checks.PASS, report.details
    assert report.check_id == check_id
    assert report.params == params


def grid_params(check_id, r_max, s_max):
    spec = next(spec for spec in checks.CATALOG if spec.check_id == check_id)
    return spec.grid(r_max, s_max)


@pytest.mark.parametrize("check_id,bound", [("lemma.classcount", 9), ("nf.arithmetic", 9), ("lemma.aut2group", 7)])
def test_group_grids_cover_every_exponent_pair(check_id, bound):
    pairs = {(p["r"], p["s"]) for p in grid_params(check_id, 10, 10)}
    assert pairs == {(r, s) for r in range(2, bound) for s in range(1, r + 1) if r + s <= bound}


def test_construction_and_fixed_point_grids():
    assert grid_params("prop.a4_semidirect", 10, 10) == [{"r": 2}, {"r": 3}, {"r": 4}]
    assert grid_params("prop.fcentric", 10, 10) == [{"r": 2}, {"r": 3}]
    assert grid_params("lemma.fixedpoints.abelian", 2, 2) == [{"s": s} for s in range(1, 5)]


def test_report_to_dict():
    payload = checks.run_check("cartan.rs1", {"r": 2}).to_dict()
    assert set(payload) == {"check_id", "params", "status", "details", "data"}
    json.dumps(payload)


@pytest.mark.parametrize("check_id,params", [
    ("nf.arithmetic", {"r": 2}),
    ("nf.arithmetic", {"r": 0, "s": 1}),
    ("nf.arithmetic", {"r": 2, "s": 1, "t": 3}),
    ("qf.classes", {"disc": 4}),
    ("cartan.r2_final", {"r": 2}),
    ("lemma.abelian_aut", {"factors": []}),
])
def test_schema_errors(check_id, params):
    with pytest.raises(InvalidParametersError):
        checks.run_check(check_id, params)


def test_unknown_check():
    with pytest.raises(UnknownCheckError) as info:
        checks.run_check("no.such.check", {})
    assert isinstance(info.value, ToolkitError)
    assert isinstance(info.value, KeyError)


def test_out_of_hypothesis_parameters_skip():
    report = checks.run_check("lemma.maxsubgroups", {"r": 1, "s": 1})
    assert report.status == checks.SKIP
    assert report.details
    assert report.data == {}


def test_search_check_with_zero_cap_is_inconclusive():
    report = checks.run_check("search.req_s_r2_k14", {"cap_nodes": 0})
    assert report.status == checks.INCONCLUSIVE
    assert report.data["explored"] == 0


def test_search_check_finds_the_canonical_columns():
    report = checks.run_check("search.rs1_r2", {"cap_nodes": 2_000_000, "cap_seconds": 300})
    assert report.status == checks.PASS
    assert report.data["status"] == "complete"
    assert report.data["consistent_found"] >= 1


def test_capped_rs1_search_is_inconclusive():
    report = checks.run_check("search.rs1_r2", {"cap_nodes": 1, "cap_seconds": 10})
    assert report.status == checks.INCONCLUSIVE
    assert report.data["consistent_found"] == 0


class TestVerifyAll:
    def test_small_grid_has_no_failures(self):
        reports = checks.verify_all(2, 2)
        assert reports
        assert [r for r in reports if r.status == checks.FAIL] == []
        assert checks.exit_code(reports) == 0
        assert not any(r.check_id.startswith("search.") for r in reports)

    def test_reports_follow_catalog_order(self):
        reports = checks.verify_all(2, 1)
        order = {check_id: i for i, check_id in enumerate(checks.list_checks())}
        positions = [order[r.check_id] for r in reports]
        assert positions == sorted(positions)

    def test_workers_give_the_same_reports(self):
        serial = checks.verify_all(2, 1)
        threaded = checks.verify_all(2, 1, workers=4)
        assert [r.to_dict() for r in serial] == [r.to_dict() for r in threaded]

    @pytest.mark.parametrize("r_max,s_max", [(0, 2), (2, 0)])
    def test_rejects_empty_grid(self, r_max, s_max):
        with pytest.raises(InvalidParametersError):
            checks.verify_all(r_max, s_max)


def test_exit_code_and_json():
    passing = checks.CheckReport("a", {}, checks.PASS, "")
    skipped = checks.CheckReport("b", {}, checks.SKIP, "")
    failing = checks.CheckReport("c", {"r": 2}, checks.FAIL, "bad")
    assert checks.exit_code([passing, skipped]) == 0
    assert checks.exit_code([passing, failing]) == 1
    payload = json.loads(checks.reports_json([failing]))
    assert payload == [{"check_id": "c", "params": {"r": 2}, "status": "fail", "details": "bad", "data": {}}]
