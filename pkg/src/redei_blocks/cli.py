"""
Command-line surface: group facts, single checks, the verify-all harness,
form utilities and the exclusion searches.

Exit codes: 0 pass/skip/inconclusive, 1 fail, 2 usage or cap error.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, NoReturn, Optional

import typer
from rich.console import Console
from rich.table import Table

from . import checks, decomp, intforms
from . import generic_group as gg
from . import nf_group as nf
from . import morphisms
from .errors import ToolkitError
from .nf_group import GroupParams
from .utils import configure_logging, get_env, now_ms

app = typer.Typer(add_completion=False, help="Exact checks for blocks with minimal nonabelian defect groups.")
console = Console()
err_console = Console(stderr=True)

EXIT_USAGE = 2


@app.callback()
def _setup(verbose: bool = typer.Option(False, "--verbose", "-v", help="Log at DEBUG level.")) -> None:
    configure_logging("DEBUG" if verbose else None)


def _emit(payload: Any, out: Optional[Path]) -> None:
    text = json.dumps(payload, indent=get_env().json_indent, ensure_ascii=False)
    if out is not None:
        out.write_text(text + "\n", encoding="utf-8")
    else:
        typer.echo(text)


def _fail_usage(error: Exception) -> NoReturn:
    err_console.print(f"[red]error:[/red] {error}")
    raise typer.Exit(EXIT_USAGE)


def _status_style(status: str) -> str:
    return {"pass": "green", "fail": "red", "skip": "yellow", "inconclusive": "magenta"}.get(status, "white")


def _report_table(reports: List[checks.CheckReport]) -> Table:
    table = Table(title="Checks")
    table.add_column("check")
    table.add_column("params")
    table.add_column("status")
    table.add_column("details")
    for r in reports:
        params = ", ".join(f"{k}={v}" for k, v in r.params.items())
        table.add_row(r.check_id, params, f"[{_status_style(r.status)}]{r.status}[/]", r.details)
    return table


def _parse_params(items: List[str]) -> Dict[str, Any]:
    params: Dict[str, Any] = {}
    for item in items:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise typer.BadParameter(f"expected KEY=VALUE, got {item!r}")
        try:
            params[key] = json.loads(raw)
        except json.JSONDecodeError:
            params[key] = raw
    return params


def _finish(reports: List[checks.CheckReport], as_json: bool, out: Optional[Path]) -> None:
    if as_json or out is not None:
        text = checks.reports_json(reports)
        if out is not None:
            out.write_text(text + "\n", encoding="utf-8")
        else:
            typer.echo(text)
    else:
        console.print(_report_table(reports))
    raise typer.Exit(checks.exit_code(reports))


# ---------- Commands ----------

@app.command()
def info(
    r: int = typer.Option(..., "--r", help="Exponent r of D(r,s)."),
    s: int = typer.Option(..., "--s", help="Exponent s of D(r,s)."),
    as_json: bool = typer.Option(False, "--json"),
    out: Optional[Path] = typer.Option(None, "--out"),
) -> None:
    """Structure of D(r,s): order, characteristic subgroups, classes, fusion."""
    try:
        p = GroupParams(r, s)
        cs = nf.characteristic_subgroups(p)
        data: Dict[str, Any] = {
            "r": r,
            "s": s,
            "order": p.order,
            "center": cs.center.to_list(),
            "derived": cs.derived.to_list(),
            "frattini_equals_center": cs.frattini_equals_center,
            "omega_of_center": cs.omega_of_center.to_list(),
            "conjugacy_classes": nf.conjugacy_class_count(p),
            "nonmetacyclic": nf.nonmetacyclic(p),
            "fusion_nilpotency_forced": morphisms.fusion_nilpotency_forced(p),
        }
        if r >= 2:
            data["maximal_subgroups"] = [t.to_list() for _, t in nf.maximal_subgroups(p)]
    except ToolkitError as e:
        _fail_usage(e)
    if as_json or out is not None:
        _emit(data, out)
        return
    table = Table(title=f"D({r},{s})")
    table.add_column("property")
    table.add_column("value")
    for key, value in data.items():
        table.add_row(key, str(value))
    console.print(table)


@app.command("list")
def list_checks() -> None:
    """List the registered check ids."""
    for check_id in checks.list_checks():
        typer.echo(check_id)


@app.command()
def check(
    check_id: str = typer.Argument(..., help="Registered check id."),
    params: List[str] = typer.Argument(None, help="KEY=VALUE parameters (values parsed as JSON)."),
    r: Optional[int] = typer.Option(None, "--r"),
    s: Optional[int] = typer.Option(None, "--s"),
    as_json: bool = typer.Option(False, "--json"),
    out: Optional[Path] = typer.Option(None, "--out"),
) -> None:
    """Run one check."""
    parsed = _parse_params(params or [])
    if r is not None:
        parsed["r"] = r
    if s is not None:
        parsed["s"] = s
    try:
        report = checks.run_check(check_id, parsed)
    except ToolkitError as e:
        _fail_usage(e)
    _finish([report], as_json, out)


@app.command("verify-all")
def verify_all(
    r: int = typer.Option(4, "--r", help="Largest r in the parameter grid."),
    s: int = typer.Option(4, "--s", help="Largest s in the parameter grid."),
    search: bool = typer.Option(False, "--search", help="Include the exclusion searches."),
    workers: int = typer.Option(1, "--workers", min=1),
    cap_nodes: Optional[int] = typer.Option(None, "--cap-nodes"),
    cap_seconds: Optional[float] = typer.Option(None, "--cap-seconds"),
    as_json: bool = typer.Option(False, "--json"),
    out: Optional[Path] = typer.Option(None, "--out"),
) -> None:
    """Run the whole catalog; exits 1 if any check fails."""
    env = get_env()
    if cap_nodes is not None:
        env.cap_nodes = cap_nodes
    if cap_seconds is not None:
        env.cap_seconds = cap_seconds
    started = now_ms()
    try:
        reports = checks.verify_all(r, s, include_search=search, workers=workers)
    except ToolkitError as e:
        _fail_usage(e)
    if not as_json and out is None:
        err_console.print(f"{len(reports)} checks in {now_ms() - started} ms")
    _finish(reports, as_json, out)


@app.command()
def snf(
    matrix_file: Path = typer.Argument(..., exists=True, dir_okay=False, help="`rows cols` then row-major integers."),
    as_json: bool = typer.Option(False, "--json"),
) -> None:
    """Smith normal form of an integer matrix."""
    try:
        M = intforms.parse_matrix_text(matrix_file.read_text(encoding="utf-8"))
        divisors = intforms.smith_normal_form(M)
    except ToolkitError as e:
        _fail_usage(e)
    if as_json:
        _emit({"rows": M.shape[0], "cols": M.shape[1], "snf": list(divisors)}, None)
    else:
        typer.echo(" ".join(str(d) for d in divisors))


@app.command()
def reduce(
    a: int = typer.Argument(...),
    b: int = typer.Argument(...),
    c: int = typer.Argument(...),
    as_json: bool = typer.Option(False, "--json"),
) -> None:
    """Gauss-reduce the form a x^2 + b xy + c y^2."""
    try:
        result = intforms.reduce_qf(intforms.QuadForm(a, b, c))
    except ToolkitError as e:
        _fail_usage(e)
    if as_json:
        _emit({"reduced": list(result.reduced.as_tuple()), "transform": result.transform.to_lists()}, None)
    else:
        typer.echo(f"{result.reduced}")
        typer.echo(intforms.format_matrix_text(result.transform), nl=False)


@app.command("dump-group")
def dump_group(
    r: int = typer.Option(..., "--r"),
    s: int = typer.Option(..., "--s"),
    out: Optional[Path] = typer.Option(None, "--out"),
) -> None:
    """Cayley table of D(r,s) in text form."""
    try:
        text = gg.build_nf_group(GroupParams(r, s)).dump()
    except ToolkitError as e:
        _fail_usage(e)
    if out is not None:
        out.write_text(text, encoding="utf-8")
    else:
        typer.echo(text, nl=False)


@app.command()
def search(
    scenario: str = typer.Argument(..., help=f"{decomp.RS1_R2} or {decomp.REQ_S_R2_K14}"),
    cap_nodes: Optional[int] = typer.Option(None, "--cap-nodes"),
    cap_seconds: Optional[float] = typer.Option(None, "--cap-seconds"),
    as_json: bool = typer.Option(False, "--json"),
    out: Optional[Path] = typer.Option(None, "--out"),
) -> None:
    """Exhaustive search for generalized decomposition columns at r = 2."""
    caps = decomp.SearchCaps.from_env()
    if cap_nodes is not None:
        caps.nodes = cap_nodes
    if cap_seconds is not None:
        caps.seconds = cap_seconds
    try:
        result = decomp.exclusion_search_r2(scenario, caps)
    except ToolkitError as e:
        _fail_usage(e)
    payload = {
        "scenario": result.scenario,
        "status": result.status,
        "explored": result.explored,
        "consistent_found": result.consistent_found,
        "witnesses": result.witnesses,
    }
    if as_json or out is not None:
        _emit(payload, out)
    else:
        style = "green" if result.status == decomp.COMPLETE else "magenta"
        console.print(f"{scenario}: [{style}]{result.status}[/], {result.explored} nodes, "
                      f"{result.consistent_found} consistent")
    if not result.passed:
        raise typer.Exit(1)


def main() -> None:
    app()


if __name__ == "__main__":
    main()
