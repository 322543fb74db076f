#!/usr/bin/env python3
"""
Tests for the MCP tool functions
"""

import sys
from pathlib import Path

import pytest

# Add src to path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root / "src"))

import importlib

# The package re-exports the FastMCP instance as `server`, shadowing the submodule
server = importlib.import_module("redei_blocks.server")
from redei_blocks.utils import reset_env


@pytest.fixture(autouse=True)
def fresh_env():
    reset_env()
    yield
    reset_env()


@pytest.mark.asyncio
async def test_info():
    info = await server.redei_info(3, 2)
    assert info["order"] == 64
    assert info["center"] == [4, 2, 2]
    assert info["fusion_nilpotency_forced"] is True
    assert sorted(info["maximal_subgroups"], reverse=True) == [[8, 2, 2], [8, 2, 2], [4, 4, 2]]


@pytest.mark.asyncio
async def test_info_error_payload():
    info = await server.redei_info(0, 1)
    assert info["error"] is True
    assert info["context"] == {"r": 0, "s": 1}
    assert "timestamp" in info


@pytest.mark.asyncio
async def test_invariants():
    rows = await server.redei_invariants("req_s", [2])
    assert rows[0]["k"] == 12
    assert rows[0]["l"] == 3
    bad = await server.redei_invariants("abelian", [1])
    assert bad["error"] is True


@pytest.mark.asyncio
async def test_run_check():
    ids = await server.redei_list_checks()
    assert "qf.reduce" in ids
    report = await server.redei_run_check("qf.reduce", {"a": 4, "b": 4, "c": 3})
    assert report["status"] == "pass"
    assert report["data"]["reduced"] == [3, 2, 3]


@pytest.mark.asyncio
async def test_run_check_errors():
    unknown = await server.redei_run_check("no.such.check")
    assert unknown["error"] is True
    invalid = await server.redei_run_check("qf.reduce", {"a": 4})
    assert invalid["error"] is True
    assert invalid["context"]["check_id"] == "qf.reduce"


@pytest.mark.asyncio
async def test_verify_all():
    result = await server.redei_verify_all(2, 1)
    assert result["exit_code"] == 0
    assert result["counts"].get("fail", 0) == 0
    assert sum(result["counts"].values()) == len(result["reports"])
    assert not any(r["check_id"].startswith("search.") for r in result["reports"])


@pytest.mark.asyncio
async def test_verify_all_rejects_empty_grid():
    result = await server.redei_verify_all(0, 1)
    assert result["error"] is True


@pytest.mark.asyncio
async def test_snf_and_reduce():
    snf = await server.redei_snf([[6, 2], [2, 6]])
    assert snf == {"shape": [2, 2], "snf": [2, 16]}
    ragged = await server.redei_snf([[1, 2], [3]])
    assert ragged["error"] is True
    form = await server.redei_reduce_form(8, 8, 6)
    assert form["reduced"] == [6, 4, 6]
    assert form["disc"] == -128


@pytest.mark.asyncio
async def test_search():
    result = await server.redei_search("rs1_r2_consistency", cap_nodes=1, cap_seconds=10.0)
    assert result["status"] == "inconclusive"
    assert result["consistent_found"] == 0
    unknown = await server.redei_search("nothing")
    assert unknown["error"] is True
