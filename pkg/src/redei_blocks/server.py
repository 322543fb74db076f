from __future__ import annotations

from typing import Any, Dict, List, Optional

from mcp.server.fastmcp import FastMCP
from dotenv import load_dotenv

from . import checks, decomp, intforms, invariants, morphisms
from . import nf_group as nf
from .errors import ToolkitError
from .nf_group import GroupParams
from .utils import configure_logging, format_error, strtobool


server = FastMCP("redei-blocks")


# Load .env early
load_dotenv()


# ---------- Group facts ----------

@server.tool("redei-info")
async def redei_info(r: int, s: int) -> Dict[str, Any]:
    """
    Structure of the minimal nonabelian 2-group D(r,s).

    Args:
        r: exponent of the order of x (|x| = 2^r), r >= 1
        s: exponent of the order of y (|y| = 2^s), s >= 1

    Returns:
        Order, center, derived subgroup, class count and fusion facts.
    """
    try:
        p = GroupParams(r, s)
        cs = nf.characteristic_subgroups(p)
        info: Dict[str, Any] = {
            "order": p.order,
            "center": cs.center.to_list(),
            "derived": cs.derived.to_list(),
            "frattini_equals_center": cs.frattini_equals_center,
            "conjugacy_classes": nf.conjugacy_class_count(p),
            "nonmetacyclic": nf.nonmetacyclic(p),
            "fusion_nilpotency_forced": morphisms.fusion_nilpotency_forced(p),
        }
        if r >= 2:
            info["maximal_subgroups"] = [t.to_list() for _, t in nf.maximal_subgroups(p)]
        return info
    except ToolkitError as e:
        return format_error(str(e), {"r": r, "s": s})


@server.tool("redei-invariants")
async def redei_invariants(family: str, values: List[int]) -> Any:
    """
    Block invariants k, k_i, l for a family of parameters.

    Args:
        family: "rs1" (r values), "req_s" (r values) or "eB3" (s values)
        values: parameter values
    """
    try:
        return invariants.invariants_table(family, values)
    except ToolkitError as e:
        return format_error(str(e), {"family": family, "values": values})


# ---------- Checks ----------

@server.tool("redei-list-checks")
async def redei_list_checks() -> List[str]:
    """List registered check ids in catalog order."""
    return checks.list_checks()


@server.tool("redei-run-check")
async def redei_run_check(check_id: str, params: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """
    Run one registered check.

    Args:
        check_id: id from redei-list-checks
        params: check parameters, e.g. {"r": 2, "s": 1}

    Returns:
        Report with status pass, fail, skip or inconclusive.
    """
    try:
        return checks.run_check(check_id, params).to_dict()
    except ToolkitError as e:
        return format_error(str(e), {"check_id": check_id, "params": params})


@server.tool("redei-verify-all")
async def redei_verify_all(r_max: int = 4, s_max: int = 4, include_search: Optional[str] = None) -> Dict[str, Any]:
    """
    Run the whole catalog over parameter grids bounded by r_max and s_max.

    Args:
        r_max: largest r in the grids
        s_max: largest s in the grids
        include_search: "true" to also run the exclusion searches (slow)
    """
    try:
        reports = checks.verify_all(r_max, s_max, include_search=strtobool(include_search, default=False))
    except ToolkitError as e:
        return format_error(str(e), {"r_max": r_max, "s_max": s_max})
    counts: Dict[str, int] = {}
    for report in reports:
        counts[report.status] = counts.get(report.status, 0) + 1
    return {
        "exit_code": checks.exit_code(reports),
        "counts": counts,
        "reports": [r.to_dict() for r in reports],
    }


# ---------- Integral forms ----------

@server.tool("redei-snf")
async def redei_snf(rows: List[List[int]]) -> Dict[str, Any]:
    """Smith normal form (nonzero elementary divisors) of an integer matrix."""
    try:
        M = intforms.IntMatrix.of(rows)
        return {"shape": list(M.shape), "snf": list(intforms.smith_normal_form(M))}
    except ToolkitError as e:
        return format_error(str(e), {"rows": rows})


@server.tool("redei-reduce-form")
async def redei_reduce_form(a: int, b: int, c: int) -> Dict[str, Any]:
    """Gauss-reduce a positive definite binary form a x^2 + b xy + c y^2."""
    try:
        result = intforms.reduce_qf(intforms.QuadForm(a, b, c))
    except ToolkitError as e:
        return format_error(str(e), {"form": [a, b, c]})
    return {
        "reduced": list(result.reduced.as_tuple()),
        "transform": result.transform.to_lists(),
        "disc": result.reduced.disc,
    }


# ---------- Searches ----------

@server.tool("redei-search")
async def redei_search(scenario: str, cap_nodes: Optional[int] = None, cap_seconds: Optional[float] = None) -> Dict[str, Any]:
    """
    Exhaustive search over generalized decomposition columns at r = 2.

    Args:
        scenario: "rs1_r2_consistency" or "req_s_r2_k14"
        cap_nodes: node budget (defaults to REDEI_CAP_NODES)
        cap_seconds: wall-clock budget (defaults to REDEI_CAP_SECONDS)
    """
    caps = decomp.SearchCaps.from_env()
    if cap_nodes is not None:
        caps.nodes = cap_nodes
    if cap_seconds is not None:
        caps.seconds = cap_seconds
    try:
        result = decomp.exclusion_search_r2(scenario, caps)
    except ToolkitError as e:
        return format_error(str(e), {"scenario": scenario})
    return {
        "scenario": result.scenario,
        "status": result.status,
        "explored": result.explored,
        "consistent_found": result.consistent_found,
        "witnesses": result.witnesses,
    }


def main() -> None:
    configure_logging()
    server.run("stdio")


if __name__ == "__main__":
    main()
