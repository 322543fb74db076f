"""
Closed-form block invariants and the inequality gates they must pass.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Tuple

from loguru import logger

from .errors import InvalidParametersError
from .utils import get_env

THEOREM = "theorem"
SPECIAL_CASE = "special-case"
BOUND_ONLY = "bound-only"
EXCLUDED = "excluded-candidate"


@dataclass(frozen=True)
class BlockInvariants:
    family: str
    defect: int
    k: int
    k_by_height: Tuple[int, ...]
    l: int
    source: str

    def __post_init__(self) -> None:
        if sum(self.k_by_height) != self.k:
            raise InvalidParametersError("BlockInvariants", f"heights {self.k_by_height} do not sum to k={self.k}")
        if not self.k >= self.l >= 1:
            raise InvalidParametersError("BlockInvariants", f"need k >= l >= 1, got k={self.k}, l={self.l}")
        k0 = self.k_by_height[0] if self.k_by_height else 0
        if k0 >= 4 and k0 % 4:
            raise InvalidParametersError("BlockInvariants", f"k0={k0} is not divisible by 4")

    @property
    def order(self) -> int:
        return 1 << self.defect

    def k_i(self, i: int) -> int:
        return self.k_by_height[i] if i < len(self.k_by_height) else 0

    def derived_index(self) -> int:
        """|D:D'| for the defect group of the family."""
        if self.family == "eB3":
            return self.order
        return self.order // 2

    def row(self) -> Dict[str, int]:
        return {"order": self.order, "k": self.k, "k0": self.k_i(0), "k1": self.k_i(1), "l": self.l}


def _exact_third(numerator: int, what: str) -> int:
    value, rem = divmod(numerator, 3)
    if rem:
        raise AssertionError(f"{what} = {numerator}/3 is not an integer")
    return value


def invariants_rs1(r: int) -> BlockInvariants:
    """k = 5*2^(r-1), k0 = 2^(r+1), k1 = 2^(r-1), l = 2 for defect group D(r,1)."""
    if r < 2:
        raise InvalidParametersError("invariants_rs1", f"need r >= 2, got {r}")
    return BlockInvariants(
        family="rs1",
        defect=r + 2,
        k=5 << (r - 1),
        k_by_height=(1 << (r + 1), 1 << (r - 1)),
        l=2,
        source=THEOREM,
    )


def invariants_req_s_special(r: int) -> BlockInvariants:
    """Defect group D(r,r) in the solvable, maximal-defect and r = 2 situations."""
    if r < 2:
        raise InvalidParametersError("invariants_req_s_special", f"need r >= 2, got {r}")
    q = 1 << (2 * (r - 1))
    return BlockInvariants(
        family="req_s",
        defect=2 * r + 1,
        k=_exact_third(5 * q + 16, "k"),
        k_by_height=(_exact_third(4 * q + 8, "k0"), _exact_third(q + 8, "k1")),
        l=3,
        source=SPECIAL_CASE,
    )


def invariants_eB3(s: int) -> BlockInvariants:
    """Block with defect group C_(2^s) x C2 x C2 and inertial index 3."""
    if s < 0:
        raise InvalidParametersError("invariants_eB3", f"need s >= 0, got {s}")
    size = 1 << (s + 2)
    return BlockInvariants(family="eB3", defect=s + 2, k=size, k_by_height=(size,), l=3, source=THEOREM)


@dataclass
class InvariantBounds:
    family: str
    defect: int
    k_min: int
    k_max: int
    l_min: int
    max_height: int
    source: str = BOUND_ONLY


def invariants_req_s_bounds(r: int) -> InvariantBounds:
    """What is known for an arbitrary block with defect group D(r,r)."""
    if r < 2:
        raise InvalidParametersError("invariants_req_s_bounds", f"need r >= 2, got {r}")
    order = 1 << (2 * r + 1)
    k_min = _exact_third(5 * (1 << (2 * (r - 1))) + 16, "k_min")
    k_max = _exact_third(order + 16, "k_max")
    return InvariantBounds(family="req_s", defect=2 * r + 1, k_min=k_min, k_max=k_max, l_min=3, max_height=3)


def r2_invariant_alternatives() -> List[BlockInvariants]:
    """The two candidates for D(2,2) left by the counting arguments; the search rules out the first."""
    excluded = BlockInvariants(family="req_s", defect=5, k=14, k_by_height=(8, 6), l=5, source=EXCLUDED)
    return [excluded, invariants_req_s_special(2)]


# ---------- Inequalities ----------

@dataclass
class InequalityReport:
    robinson: bool
    olsson: bool
    kw_bound: Optional[bool]
    high_heights_vanish: bool
    weighted_sum: int


def check_inequalities(inv: BlockInvariants, dd_prime_index: Optional[int] = None) -> InequalityReport:
    """k <= sum 4^i k_i <= |D|, k0 <= |D:D'| and, for D(r,r), k <= (|D|+16)/3.

    Args:
        inv: invariants to gate.
        dd_prime_index: |D:D'|; defaults to the family's own value.
    """
    index = dd_prime_index if dd_prime_index is not None else inv.derived_index()
    weighted = sum((4 ** i) * k for i, k in enumerate(inv.k_by_height))
    kw = None
    if inv.family == "req_s":
        kw = 3 * inv.k <= inv.order + 16
    report = InequalityReport(
        robinson=inv.k <= weighted <= inv.order,
        olsson=inv.k_i(0) <= index,
        kw_bound=kw,
        high_heights_vanish=all(k == 0 for k in inv.k_by_height[4:]),
        weighted_sum=weighted,
    )
    if not (report.robinson and report.olsson and kw is not False):
        logger.warning(f"{inv.family} d={inv.defect}: inequality gate failed {report}")
    return report


# ---------- Tables ----------

def invariants_table(family: str, values: List[int]) -> List[Dict[str, int]]:
    providers = {"rs1": invariants_rs1, "req_s": invariants_req_s_special, "eB3": invariants_eB3}
    if family not in providers:
        raise InvalidParametersError("invariants_table", f"unknown family {family!r}")
    rows = []
    for value in values:
        row: Dict[str, Any] = {"param": value}
        row.update(providers[family](value).row())
        rows.append(row)
    return rows


def invariants_table_json(family: str, values: List[int]) -> str:
    return json.dumps(invariants_table(family, values), indent=get_env().json_indent)


def to_dict(inv: BlockInvariants) -> Dict[str, Any]:
    data = asdict(inv)
    data["k_by_height"] = list(inv.k_by_height)
    return data
