"""
Generalized decomposition columns as integer coefficient data.

A generalized decomposition number for a subsection (u, b_u) with u of order
2^k lies in Z[zeta] for a primitive 2^k-th root of unity zeta and is stored
in the basis zeta^0 .. zeta^(n-1), n = 2^(k-1); the relation
zeta^(i+n) = -zeta^i is implicit.

The canonical columns for defect group D(r,1) are read off the irreducible
characters of D(r,1) itself: linear characters lambda_(alpha,beta) of height 0
and the 2^(r-1) characters of degree 2 of height 1.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from math import isqrt
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from loguru import logger
from sympy import Matrix

from . import nf_group as nf
from .errors import CaseMismatchError, InvalidParametersError, SizeMismatchError
from .intforms import (
    IntMatrix,
    c_bar_matrix,
    integer_kernel,
    matrix_congruent_2x2,
    smith_normal_form,
)
from .nf_group import GroupParams, NfElement
from .utils import get_env

FIRST = "first"
SECOND = "second"

# |D| times the inverse Cartan matrix of b_c, by case
C_WEIGHTS = {
    FIRST: ((3, -4), (-4, 8)),
    SECOND: ((3, -2), (-2, 4)),
}


@dataclass(frozen=True)
class CycloColumnFamily:
    """Coefficients a_i(chi) of one Brauer character of one subsection."""
    label: str
    element: Tuple[int, int, int]
    brauer_index: int
    k_level: int
    coeffs: Tuple[Tuple[int, ...], ...]
    heights: Tuple[int, ...]
    central: bool
    case: Optional[str] = None
    row_order: Tuple[int, ...] = ()

    @property
    def num_chars(self) -> int:
        return len(self.coeffs)

    @property
    def width(self) -> int:
        return len(self.coeffs[0])

    def column(self, i: int) -> Tuple[int, ...]:
        return tuple(row[i] for row in self.coeffs)

    def to_json(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "k_level": self.k_level,
            "brauer_index": self.brauer_index,
            "heights": list(self.heights),
            "coeffs": [list(row) for row in self.coeffs],
        }


@dataclass(frozen=True)
class ColumnBlock:
    """All Brauer characters of one subsection orbit representative."""
    label: str
    element: Tuple[int, int, int]
    families: Tuple[CycloColumnFamily, ...]
    weight: Tuple[Tuple[int, ...], ...]
    in_c: bool

    @property
    def orbit_size(self) -> int:
        return self.families[0].width


@dataclass
class ColumnModel:
    r: int
    case: str
    order: int
    heights: Tuple[int, ...]
    blocks: List[ColumnBlock]
    ordinary: IntMatrix

    @property
    def families(self) -> List[CycloColumnFamily]:
        return [f for b in self.blocks for f in b.families]

    def block(self, label: str) -> ColumnBlock:
        for b in self.blocks:
            if b.label == label:
                return b
        raise KeyError(label)


# ---------- Characters of D(r,1) ----------

Character = Tuple[str, int, int]


def irr_rs1(r: int) -> List[Character]:
    """Linear characters ordered by (alpha mod 2^(r-1), alpha div 2^(r-1), beta), then degree 2."""
    half = 1 << (r - 1)
    linear = sorted(((a, b) for a in range(1 << r) for b in range(2)), key=lambda ab: (ab[0] % half, ab[0] // half, ab[1]))
    chars: List[Character] = [("lin", a, b) for a, b in linear]
    chars.extend(("deg2", m, 0) for m in range(half))
    return chars


def character_value(r: int, chi: Character, g: NfElement) -> Tuple[int, int]:
    """chi(g) = mult * zeta_(2^r)^exponent."""
    kind, a, b = chi
    modulus = 1 << r
    if kind == "lin":
        return 1, (a * g.a + b * g.b * (modulus >> 1)) % modulus
    if g.a % 2 == 0 and g.b == 0:
        return 2, (a * g.a + g.c * (modulus >> 1)) % modulus
    return 0, 0


def _level(p: GroupParams, g: NfElement) -> int:
    return nf.element_order(p, g).bit_length() - 1


def _coeffs(r: int, k: int, mult: int, exponent: int) -> List[int]:
    """mult * zeta_(2^r)^exponent in the zeta_(2^k) basis."""
    modulus = 1 << k
    n = max(1, modulus >> 1)
    vec = [0] * n
    if mult == 0:
        return vec
    shift = r - k
    if exponent % (1 << shift):
        raise AssertionError(f"zeta^{exponent} is not a 2^{k}-th root of unity")
    t = (exponent >> shift) % modulus
    if t < n:
        vec[t] = mult
    else:
        vec[t - n] = -mult
    return vec


def _value_vector(r: int, k: int, chi: Character, g: NfElement) -> List[int]:
    return _coeffs(r, k, *character_value(r, chi, g))


def _walking_order(coeffs: Sequence[Sequence[int]], heights: Sequence[int]) -> Tuple[int, ...]:
    def key(i: int) -> Tuple[int, int]:
        nonzero = [j for j, v in enumerate(coeffs[i]) if v]
        return (heights[i], nonzero[0] if nonzero else len(coeffs[i]))
    return tuple(sorted(range(len(coeffs)), key=key))


def _family(label: str, u: NfElement, index: int, k: int, rows: List[List[int]],
            heights: Tuple[int, ...], central: bool, case: Optional[str] = None) -> CycloColumnFamily:
    coeffs = tuple(tuple(row) for row in rows)
    return CycloColumnFamily(label=label, element=u.as_tuple(), brauer_index=index, k_level=k,
                             coeffs=coeffs, heights=heights, central=central, case=case,
                             row_order=_walking_order(coeffs, heights))


def column_family_rs1(r: int, u: NfElement) -> CycloColumnFamily:
    """The single column chi(u) for u outside <x^2>."""
    p = GroupParams(r, 1)
    chars = irr_rs1(r)
    heights = tuple(0 if kind == "lin" else 1 for kind, _, _ in chars)
    k = _level(p, u)
    rows = [_value_vector(r, k, chi, u) for chi in chars]
    return _family(str(u), u, 0, k, rows, heights, nf.is_central(p, u))


def column_model_rs1(r: int, case: str = SECOND) -> ColumnModel:
    """Every generalized decomposition column of a block with defect group D(r,1), up to Galois orbits.

    Inside <c>, c = x^2, the two Brauer characters are chi(uy) and (chi(u)+chi(uy))/2
    in the second case and chi(u), (chi(u)+chi(uy))/2 in the first.
    """
    if r < 2:
        raise InvalidParametersError("column_model_rs1", f"need r >= 2, got {r}")
    if case not in C_WEIGHTS:
        raise InvalidParametersError("column_model_rs1", f"case must be {FIRST!r} or {SECOND!r}, got {case!r}")
    p = GroupParams(r, 1)
    chars = irr_rs1(r)
    heights = tuple(0 if kind == "lin" else 1 for kind, _, _ in chars)
    x, y, z = nf.x_gen(p), nf.y_gen(p), nf.z_gen(p)
    blocks: List[ColumnBlock] = []

    for u in (x, nf.multiply(p, x, y)):
        fam = column_family_rs1(r, u)
        blocks.append(ColumnBlock(str(u), u.as_tuple(), (fam,), ((2,),), in_c=False))

    central_reps = [z] + [nf.make(p, 1 << (r - k), 0, 1) for k in range(1, r)]
    for u in central_reps:
        fam = column_family_rs1(r, u)
        blocks.append(ColumnBlock(str(u), u.as_tuple(), (fam,), ((1,),), in_c=False))

    for k in range(r - 1, 0, -1):
        u = nf.make(p, 1 << (r - k), 0)
        uy = nf.multiply(p, u, y)
        first_rows, second_rows = [], []
        for chi in chars:
            at_u = _value_vector(r, k, chi, u)
            at_uy = _value_vector(r, k, chi, uy)
            half = [a + b for a, b in zip(at_u, at_uy)]
            if any(v % 2 for v in half):
                raise AssertionError(f"(chi(u)+chi(uy))/2 is not integral at {chi}")
            first_rows.append(at_u if case == FIRST else at_uy)
            second_rows.append([v // 2 for v in half])
        label = str(u)
        fams = (_family(label, u, 0, k, first_rows, heights, True, case),
                _family(label, u, 1, k, second_rows, heights, True, case))
        blocks.append(ColumnBlock(label, u.as_tuple(), fams, C_WEIGHTS[case], in_c=True))

    q_rows = []
    for chi in chars:
        at_1 = _value_vector(r, 0, chi, nf.IDENTITY)[0]
        at_y = _value_vector(r, 1, chi, y)[0]
        q_rows.append([at_y, (at_1 + at_y) // 2])
    ordinary = IntMatrix.of(q_rows)
    return ColumnModel(r=r, case=case, order=p.order, heights=heights, blocks=blocks, ordinary=ordinary)


def build_columns_rs1(r: int, case: str = SECOND) -> List[CycloColumnFamily]:
    return column_model_rs1(r, case).families


def canonical_c_block(model: ColumnModel) -> ColumnBlock:
    p = GroupParams(model.r, 1)
    return model.block(str(nf.make(p, 2, 0)))


# ---------- Inner products and twists ----------

def inner_product(fam_u: CycloColumnFamily, i: int, fam_v: CycloColumnFamily, j: int) -> int:
    if fam_u.num_chars != fam_v.num_chars:
        raise SizeMismatchError("inner_product", fam_u.num_chars, fam_v.num_chars)
    return sum(a[i] * b[j] for a, b in zip(fam_u.coeffs, fam_v.coeffs))


def galois_twist(fam: CycloColumnFamily, gamma: int) -> CycloColumnFamily:
    """Coefficients of the column at u^gamma: position t receives a_(t/gamma mod 2^k)."""
    if gamma % 2 == 0:
        raise InvalidParametersError("galois_twist", f"gamma must be odd, got {gamma}")
    modulus = 1 << fam.k_level
    if modulus <= 2:
        return fam
    n = modulus >> 1
    inverse = pow(gamma % modulus, -1, modulus)

    def extended(row: Tuple[int, ...], s: int) -> int:
        return row[s] if s < n else -row[s - n]

    coeffs = tuple(tuple(extended(row, (t * inverse) % modulus) for t in range(n)) for row in fam.coeffs)
    return CycloColumnFamily(label=f"{fam.label}^{gamma % modulus}", element=fam.element,
                             brauer_index=fam.brauer_index, k_level=fam.k_level, coeffs=coeffs,
                             heights=fam.heights, central=fam.central, case=fam.case,
                             row_order=_walking_order(coeffs, fam.heights))


def expected_inner_product(defect: int, k: int, central: bool, i: int, j: int, gamma: int) -> int:
    """Orthogonality table for subsections fused by gamma: +-2^(d-k+1) (central) or +-2^(d-k)."""
    modulus = 1 << k
    norm = 1 << (defect - k + 1 if central else defect - k)
    rel = (j * gamma - i) % modulus
    if rel == 0:
        return norm
    if k >= 1 and rel == modulus >> 1:
        return -norm
    return 0


# ---------- Lemma checks ----------

def check_divisibility_heights(fam: CycloColumnFamily) -> bool:
    """2^h | a_i(chi) and sum_i a_i(chi) = 2^h mod 2^(h+1) for every chi of height h."""
    for row, h in zip(fam.coeffs, fam.heights):
        unit = 1 << h
        if any(v % unit for v in row):
            return False
        if sum(row) % (2 * unit) != unit:
            return False
    return True


def height_parity(fam: CycloColumnFamily) -> List[bool]:
    """Per character: the coefficient sum is odd exactly at height 0."""
    return [(sum(row) % 2 == 1) == (h == 0) for row, h in zip(fam.coeffs, fam.heights)]


@dataclass
class SupportCount:
    total_support: int
    k: int
    bound: int
    every_character_covered: bool

    @property
    def closes(self) -> bool:
        return self.total_support == self.k == self.bound


def support_counting(fam: CycloColumnFamily, order: int) -> SupportCount:
    """sum_i |supp a_i| against k(B) and |D| - 3 k_1(B)."""
    total = sum(1 for row in fam.coeffs for v in row if v)
    k1 = sum(1 for h in fam.heights if h == 1)
    covered = all(any(row) for row in fam.coeffs)
    return SupportCount(total_support=total, k=fam.num_chars, bound=order - 3 * k1, every_character_covered=covered)


@dataclass
class LemmaTableReport:
    pairs_checked: int
    mismatches: List[Dict[str, Any]]
    c_gram: List[List[int]]
    c_gram_expected: List[List[int]]

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.c_gram == self.c_gram_expected


def lemma_table_check(r: int, case: str = SECOND) -> LemmaTableReport:
    """Every inner product among the columns outside <c>, including Galois twists, plus the Gram data at c."""
    model = column_model_rs1(r, case)
    defect = r + 2
    outside = [b.families[0] for b in model.blocks if not b.in_c]
    mismatches: List[Dict[str, Any]] = []
    checked = 0
    for a_idx, fu in enumerate(outside):
        for fv in outside[a_idx + 1:]:
            for i in range(fu.width):
                for j in range(fv.width):
                    checked += 1
                    value = inner_product(fu, i, fv, j)
                    if value:
                        mismatches.append({"u": fu.label, "v": fv.label, "i": i, "j": j, "got": value, "expected": 0})
        modulus = 1 << fu.k_level
        gammas = range(1, modulus, 2) if modulus > 2 else [1]
        for gamma in gammas:
            fv = galois_twist(fu, gamma)
            back = pow(gamma, -1, modulus) if modulus > 2 else 1
            for i in range(fu.width):
                for j in range(fv.width):
                    checked += 1
                    value = inner_product(fu, i, fv, j)
                    expected = expected_inner_product(defect, fu.k_level, fu.central, i, j, back)
                    if value != expected:
                        mismatches.append({"u": fu.label, "v": fv.label, "i": i, "j": j,
                                           "got": value, "expected": expected})
    c_block = canonical_c_block(model)
    f1, f2 = c_block.families
    gram = [[inner_product(a, 0, b, 0) for b in (f1, f2)] for a in (f1, f2)]
    for i in range(f1.width):
        for j in range(f1.width):
            if i != j and any(inner_product(a, i, b, j) for a in (f1, f2) for b in (f1, f2)):
                mismatches.append({"u": c_block.label, "i": i, "j": j, "got": "nonzero", "expected": 0})
    expected_c = [[16, 8], [8, 6]] if case == FIRST else [[8, 4], [4, 6]]
    if gram != expected_c:
        logger.error(f"r={r}: Gram at c is {gram}, expected {expected_c}")
    return LemmaTableReport(pairs_checked=checked, mismatches=mismatches, c_gram=gram, c_gram_expected=expected_c)


# ---------- Contributions ----------

@dataclass
class ContributionDiag:
    values: Tuple[int, ...]
    case: str
    valuations: Tuple[Optional[int], ...]


def _form(weight: Sequence[Sequence[int]], vec: Sequence[int]) -> int:
    return sum(weight[a][b] * vec[a] * vec[b] for a in range(len(vec)) for b in range(len(vec)))


def contributions_at_c(r: int, case: str, fam1: CycloColumnFamily, fam2: CycloColumnFamily) -> ContributionDiag:
    """|D| m_(chi,chi) for the subsection (c, b_c), as the rational part over the cyclotomic field."""
    if case not in C_WEIGHTS:
        raise InvalidParametersError("contributions_at_c", f"unknown case {case!r}")
    for fam in (fam1, fam2):
        if fam.case != case:
            raise CaseMismatchError(case, str(fam.case))
    if fam1.num_chars != fam2.num_chars:
        raise SizeMismatchError("contributions_at_c", fam1.num_chars, fam2.num_chars)
    weight = C_WEIGHTS[case]
    values = []
    for row1, row2 in zip(fam1.coeffs, fam2.coeffs):
        values.append(sum(_form(weight, (a, b)) for a, b in zip(row1, row2)))
    valuations = tuple((v & -v).bit_length() - 1 if v else None for v in values)
    return ContributionDiag(values=tuple(values), case=case, valuations=valuations)


def contribution_sum_residue(r: int, principal_residue: int = 1) -> int:
    """Diagonal-sum residue mod 4 forced by the principal Cartan class; 2 contradicts |D| = 0 mod 4."""
    if r < 2:
        raise InvalidParametersError("contribution_sum_residue", f"need r >= 2, got {r}")
    total = principal_residue + (1 << (r + 1)) + (1 << (r - 1)) + 3 * ((1 << (r - 1)) - 1)
    return total % 4


def cartan_excluded_residue_table(r_max: int) -> List[Dict[str, int]]:
    return [{"r": r, "principal": contribution_sum_residue(r, 1), "control": contribution_sum_residue(r, 3)}
            for r in range(2, r_max + 1)]


@dataclass
class OrdinaryCartan:
    q: IntMatrix
    gram: IntMatrix
    target: IntMatrix
    congruent_to_target: bool
    snf: Tuple[int, ...]


def ordinary_cartan_check(r: int) -> OrdinaryCartan:
    """Q^T Q for the ordinary decomposition matrix, against 2^(r-1) [[3,1],[1,3]]."""
    q = column_model_rs1(r, SECOND).ordinary
    gram = q.gram()
    target = IntMatrix.of([[3, 1], [1, 3]]).scale(1 << (r - 1))
    return OrdinaryCartan(q=q, gram=gram, target=target,
                          congruent_to_target=matrix_congruent_2x2(gram, target),
                          snf=smith_normal_form(gram))


def _scaled_inverse(order: int, gram: IntMatrix) -> List[List[int]]:
    inv = Matrix(gram.to_lists()).inv() * order
    if any(not v.is_integer for v in inv):
        raise AssertionError(f"{order} * {gram}^-1 is not integral")
    return [[int(v) for v in inv.row(i)] for i in range(inv.rows)]


@dataclass
class BrauerSumReport:
    totals: List[int]
    order: int

    @property
    def holds(self) -> bool:
        return all(t == self.order for t in self.totals)


def brauer_sum_check(r: int, case: str = SECOND) -> BrauerSumReport:
    """sum over u in T of |D| m_(chi,chi)^(u) equals |D| for every chi."""
    model = column_model_rs1(r, case)
    ordinary_weight = _scaled_inverse(model.order, model.ordinary.gram())
    totals = [_form(ordinary_weight, row) for row in model.ordinary.rows]
    for block in model.blocks:
        for chi in range(len(totals)):
            per_position = 0
            for i in range(block.orbit_size):
                vec = [f.coeffs[chi][i] for f in block.families]
                per_position += _form(block.weight, vec)
            totals[chi] += block.orbit_size * per_position
    return BrauerSumReport(totals=totals, order=model.order)


def families_json(r: int, case: str = SECOND) -> str:
    return json.dumps([f.to_json() for f in build_columns_rs1(r, case)], indent=get_env().json_indent)


# ---------- Exclusion search ----------

RS1_R2 = "rs1_r2_consistency"
REQ_S_R2_K14 = "req_s_r2_k14"
COMPLETE = "complete"
INCONCLUSIVE = "inconclusive"


@dataclass
class SearchCaps:
    nodes: int
    seconds: float

    @classmethod
    def from_env(cls) -> "SearchCaps":
        env = get_env()
        return cls(nodes=env.cap_nodes, seconds=env.cap_seconds)


@dataclass
class SearchResult:
    scenario: str
    status: str
    explored: int
    consistent_found: int
    witnesses: List[Dict[str, Any]] = field(default_factory=list)
    elapsed: float = 0.0
    found_keys: FrozenSet[Tuple] = field(default_factory=frozenset, repr=False)

    @property
    def passed(self) -> bool:
        """Complete, and consistent columns exist exactly when the scenario expects them."""
        if self.status != COMPLETE:
            return False
        return (self.consistent_found > 0) == (self.scenario == RS1_R2)


@dataclass(frozen=True)
class SlotSpec:
    """Columns of one l = 1 subsection orbit: kind fixes the admissible entries."""
    label: str
    kind: str
    vectors: int
    norm: int


@dataclass(frozen=True)
class MultiSlotSpec:
    label: str
    gram: IntMatrix
    height0_odd: bool = True


@dataclass(frozen=True)
class Scenario:
    name: str
    order: int
    heights: Tuple[int, ...]
    l_block: int
    expected_snf: Tuple[int, ...]
    slots: Tuple[SlotSpec, ...]
    multi: MultiSlotSpec
    congruence_target: Optional[IntMatrix] = None


SCENARIOS: Dict[str, Scenario] = {
    RS1_R2: Scenario(
        name=RS1_R2,
        order=16,
        heights=(0,) * 8 + (1,) * 2,
        l_block=2,
        expected_snf=(2, 16),
        slots=(
            SlotSpec("z", "central", 1, 16),
            SlotSpec("x^2z", "central", 1, 16),
            SlotSpec("x", "split", 2, 4),
            SlotSpec("xy", "split", 2, 4),
        ),
        multi=MultiSlotSpec("x^2", IntMatrix.of([[8, 4], [4, 6]])),
        congruence_target=IntMatrix.of([[6, 2], [2, 6]]),
    ),
    # TODO: quotient the "rational_first" slots by their Galois twists; the default caps stop this one short.
    REQ_S_R2_K14: Scenario(
        name=REQ_S_R2_K14,
        order=32,
        heights=(0,) * 8 + (1,) * 6,
        l_block=5,
        expected_snf=(1, 1, 2, 2, 32),
        slots=(
            SlotSpec("s1", "central", 1, 32),
            SlotSpec("s2", "central", 1, 32),
            SlotSpec("y", "rational_first", 2, 8),
            SlotSpec("yx^2", "rational_first", 2, 8),
        ),
        multi=MultiSlotSpec("z", c_bar_matrix(2).scale(2)),
    ),
}


def _allowed(kind: str, j: int, height: int, prefix: Tuple[int, ...]) -> List[int]:
    """Admissible entries, in decreasing order, for vector j of a slot at one character."""
    if kind == "central":
        return [1, -1] if height == 0 else [2, -2]
    if kind == "split":
        # height-0 characters meet exactly one position with |d| = 1; height 1 is zero
        if height:
            return [0]
        if j == 0:
            return [1, 0, -1]
        return [0] if prefix[0] else [1, -1]
    if kind == "rational_first":
        if j == 0:
            return [1, -1] if height == 0 else [0]
        return [2, 0, -2]
    raise InvalidParametersError("exclusion search", f"unknown slot kind {kind!r}")


class _CapHit(Exception):
    pass


class _Search:
    def __init__(self, scenario: Scenario, caps: SearchCaps, max_witnesses: int = 16):
        self.sc = scenario
        self.caps = caps
        self.max_witnesses = max_witnesses
        self.explored = 0
        self.started = time.monotonic()
        self.found: Dict[Tuple, Dict[str, Any]] = {}
        self.k = len(scenario.heights)
        self.tasks = [(s, j) for s, slot in enumerate(scenario.slots) for j in range(slot.vectors)]
        self.multi_weight = _scaled_inverse(scenario.order, scenario.multi.gram)
        self.multi_min = [1 if (h == 0 and scenario.multi.height0_odd) else 0 for h in scenario.heights]
        # every character has a nonzero ordinary decomposition number, so the trivial subsection takes >= 1
        self.row_cap = [scenario.order - 1 - m for m in self.multi_min]

    def tick(self) -> None:
        self.explored += 1
        if self.explored > self.caps.nodes:
            raise _CapHit()
        if self.explored % 4096 == 0:
            if time.monotonic() - self.started > self.caps.seconds:
                raise _CapHit()
            if self.explored % 102400 == 0:
                logger.debug(f"{self.sc.name}: {self.explored} nodes, {len(self.found)} consistent")

    # ----- stage 1: l = 1 columns -----

    def columns(self, idx: int, cols: List[List[int]], load: List[int]) -> None:
        if idx == len(self.tasks):
            self.multi_rows(cols, load)
            return
        s, j = self.tasks[idx]
        slot = self.sc.slots[s]
        weight = self.sc.order // slot.norm
        first_of_slot = idx - j
        allowed = []
        for row, h in enumerate(self.sc.heights):
            prefix = tuple(cols[first_of_slot + t][row] for t in range(j))
            values = _allowed(slot.kind, j, h, prefix)
            if idx == 0:
                values = [v for v in values if v > 0]
            allowed.append(values)
        prev_same = _previous_same_history(self.sc.heights, cols)
        max_sq = _suffix([max(v * v for v in vals) for vals in allowed])
        dot_room = [_suffix([max(abs(v) for v in vals) * abs(col[row]) for row, vals in enumerate(allowed)])
                    for col in cols]
        column = [0] * self.k

        def rec(row: int, norm: int, dots: List[int]) -> None:
            if row == self.k:
                if norm != slot.norm or any(dots):
                    return
                if idx > 0 and not _sign_canonical(column, prev_same):
                    return
                new_load = [load[t] + weight * column[t] * column[t] for t in range(self.k)]
                self.columns(idx + 1, cols + [list(column)], new_load)
                return
            for v in allowed[row]:
                if prev_same[row] >= 0 and v > column[prev_same[row]]:
                    continue
                self.tick()
                new_norm = norm + v * v
                if new_norm > slot.norm or slot.norm - new_norm > max_sq[row + 1]:
                    continue
                if load[row] + weight * v * v > self.row_cap[row]:
                    continue
                new_dots = [d + v * col[row] for d, col in zip(dots, cols)]
                if any(abs(d) > room[row + 1] for d, room in zip(new_dots, dot_room)):
                    continue
                column[row] = v
                rec(row + 1, new_norm, new_dots)
            column[row] = 0

        rec(0, 0, [0] * len(cols))

    # ----- stage 2: the subsection with several Brauer characters -----

    def multi_rows(self, cols: List[List[int]], load: List[int]) -> None:
        gram = self.sc.multi.gram
        m = gram.shape[0]
        weight = self.multi_weight
        bounds = [isqrt(gram[i, i]) for i in range(m)]
        candidates = []
        for row, h in enumerate(self.sc.heights):
            budget = self.sc.order - 1 - load[row]
            rows = []
            for w in _box(bounds):
                f = _form(weight, w)
                if f < 0 or f > budget:
                    continue
                if h == 0 and self.sc.multi.height0_odd and f % 2 == 0:
                    continue
                rows.append(w)
            if not rows:
                return
            candidates.append(sorted(rows, reverse=True))
        prev_same = _previous_same_history(self.sc.heights, cols)
        col_sq = [_suffix([col[row] ** 2 for row in range(self.k)]) for col in cols]
        chosen: List[Tuple[int, ...]] = [()] * self.k
        partial = [[0] * m for _ in range(m)]
        dots = [[0] * len(cols) for _ in range(m)]

        def feasible(row: int) -> bool:
            rem = [gram[i, i] - partial[i][i] for i in range(m)]
            if any(v < 0 for v in rem):
                return False
            for i in range(m):
                for j in range(i + 1, m):
                    gap = gram[i, j] - partial[i][j]
                    if gap * gap > rem[i] * rem[j]:
                        return False
                for c in range(len(cols)):
                    d = dots[i][c]
                    if d * d > rem[i] * col_sq[c][row + 1]:
                        return False
            return True

        def rec(row: int) -> None:
            if row == self.k:
                if all(partial[i][j] == gram[i, j] for i in range(m) for j in range(m)) and not any(any(d) for d in dots):
                    self.leaf(cols, chosen)
                return
            for w in candidates[row]:
                if prev_same[row] >= 0 and w > chosen[prev_same[row]]:
                    continue
                self.tick()
                for i in range(m):
                    for j in range(m):
                        partial[i][j] += w[i] * w[j]
                    for c, col in enumerate(cols):
                        dots[i][c] += w[i] * col[row]
                if feasible(row):
                    chosen[row] = w
                    rec(row + 1)
                for i in range(m):
                    for j in range(m):
                        partial[i][j] -= w[i] * w[j]
                    for c, col in enumerate(cols):
                        dots[i][c] -= w[i] * col[row]
            chosen[row] = ()

        rec(0)

    # ----- leaves -----

    def leaf(self, cols: List[List[int]], multi: Sequence[Sequence[int]]) -> None:
        rows = [[col[row] for col in cols] + list(multi[row]) for row in range(self.k)]
        verdict = evaluate_columns(self.sc, rows)
        if verdict is None:
            return
        key = candidate_key(rows)
        if key not in self.found:
            self.found[key] = verdict


def _box(bounds: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    if not bounds:
        yield ()
        return
    for head in range(-bounds[0], bounds[0] + 1):
        for tail in _box(bounds[1:]):
            yield (head,) + tail


def _suffix(values: Sequence[int]) -> List[int]:
    out = [0] * (len(values) + 1)
    for i in range(len(values) - 1, -1, -1):
        out[i] = out[i + 1] + values[i]
    return out


def _previous_same_history(heights: Sequence[int], cols: Sequence[Sequence[int]]) -> List[int]:
    """Index of the previous row with the same height and the same entries so far, or -1."""
    last: Dict[Tuple, int] = {}
    prev = []
    for row, h in enumerate(heights):
        key = (h,) + tuple(col[row] for col in cols)
        prev.append(last.get(key, -1))
        last[key] = row
    return prev


def _sign_canonical(column: Sequence[int], prev_same: Sequence[int]) -> bool:
    """column (sorted within history groups) is at least its negation re-sorted."""
    groups: Dict[int, List[int]] = {}
    root = []
    for row, prev in enumerate(prev_same):
        head = row if prev < 0 else root[prev]
        root.append(head)
        groups.setdefault(head, []).append(row)
    negated = [0] * len(column)
    for rows in groups.values():
        values = sorted((-column[row] for row in rows), reverse=True)
        for row, v in zip(rows, values):
            negated[row] = v
    return list(column) >= negated


def _sign_normal(row: Sequence[int]) -> List[int]:
    for v in row:
        if v:
            return [x if v > 0 else -x for x in row]
    return list(row)


def candidate_key(rows: Sequence[Sequence[int]]) -> Tuple:
    """Identity of a candidate up to row order and the sign of each row."""
    return tuple(sorted(tuple(_sign_normal(row)) for row in rows))


def evaluate_columns(scenario: Scenario, rows: Sequence[Sequence[int]]) -> Optional[Dict[str, Any]]:
    """Complete the generalized columns by the integral orthogonal complement and test its Cartan matrix.

    Returns the witness payload when the candidate is consistent, else None.
    """
    X = IntMatrix.of(rows)
    kernel = integer_kernel(X.T)
    if len(kernel) != scenario.l_block:
        return None
    Q = IntMatrix.of([[vec[i] for vec in kernel] for i in range(len(rows))])
    C = Q.gram()
    snf = smith_normal_form(C)
    if snf != scenario.expected_snf:
        return None
    contrib = Matrix(Q.to_lists()) * Matrix(C.to_lists()).inv() * Matrix(Q.to_lists()).T * scenario.order
    if any(not v.is_integer for v in contrib):
        return None
    if scenario.congruence_target is not None and not matrix_congruent_2x2(C, scenario.congruence_target):
        return None
    return {"snf": list(snf), "cartan": C.to_lists(), "columns": [list(r) for r in rows]}


def seed_rows_rs1() -> List[List[int]]:
    """The canonical D(2,1) columns in the slot order of the consistency scenario."""
    model = column_model_rs1(2, SECOND)
    order = ["z", "x^2z", "x", "xy", "x^2"]
    families = []
    for label in order:
        families.extend(model.block(label).families)
    rows = []
    for chi in range(len(model.heights)):
        row = []
        for fam in families:
            row.extend(fam.coeffs[chi])
        rows.append(row)
    return rows


def exclusion_search_r2(scenario: str, caps: Optional[SearchCaps] = None) -> SearchResult:
    """Enumerate generalized decomposition columns for a D(2,1) or D(2,2) block and test every completion.

    Args:
        scenario: RS1_R2 (k = 10, must find the canonical columns) or
            REQ_S_R2_K14 (k = 14, must find nothing). Both start from an empty
            candidate; nothing is preloaded.
        caps: node and time limits; hitting one gives status "inconclusive".

    Raises:
        InvalidParametersError: unknown scenario.
    """
    if scenario not in SCENARIOS:
        raise InvalidParametersError("exclusion_search_r2", f"unknown scenario {scenario!r}; use one of {sorted(SCENARIOS)}")
    caps = caps or SearchCaps.from_env()
    sc = SCENARIOS[scenario]
    search = _Search(sc, caps)
    status = COMPLETE
    if caps.nodes <= 0 or caps.seconds <= 0:
        status = INCONCLUSIVE
    else:
        try:
            search.columns(0, [], [0] * search.k)
        except _CapHit:
            status = INCONCLUSIVE
    elapsed = time.monotonic() - search.started
    witnesses = sorted(search.found.values(), key=lambda w: json.dumps(w, sort_keys=True))[:search.max_witnesses]
    result = SearchResult(scenario=scenario, status=status, explored=search.explored,
                          consistent_found=len(search.found), witnesses=witnesses, elapsed=elapsed,
                          found_keys=frozenset(search.found))
    if status == INCONCLUSIVE:
        logger.warning(f"{scenario}: cap reached after {search.explored} nodes, {result.consistent_found} consistent so far")
    else:
        logger.info(f"{scenario}: complete, {search.explored} nodes, {result.consistent_found} consistent")
    return result
