"""
Subsection representative sets and their Galois orbit bookkeeping.

l-values are attached from the block-theoretic case analysis (they are
inputs, not derived here): in the r > s = 1 family every element of the
cyclic central subgroup <c> other than 1 carries l = 2; in the r = s family
only z carries l = 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Dict, FrozenSet, List, Optional, Set, Tuple

from loguru import logger

from . import nf_group as nf
from .errors import CaseMismatchError, InvalidAutomorphismError, InvalidParametersError
from .generic_group import build_nf_group
from .morphisms import Automorphism
from .nf_group import GroupParams, NfElement

RS1 = "rs1"
REQ_S = "req_s"


@dataclass(frozen=True)
class SubsectionEntry:
    element: NfElement
    l_value: int
    orbit_id: int

    def to_dict(self) -> Dict[str, Any]:
        return {"element": list(self.element.as_tuple()), "l": self.l_value, "orbit_id": self.orbit_id}


@dataclass
class SubsectionSet:
    params: GroupParams
    case: str
    entries: List[SubsectionEntry]
    l_block: int
    canonical_c: Optional[NfElement] = None

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def elements(self) -> List[NfElement]:
        return [e.element for e in self.entries]

    def nontrivial(self) -> List[SubsectionEntry]:
        return [e for e in self.entries if e.element != nf.IDENTITY]

    def to_json(self) -> List[Dict[str, Any]]:
        return [e.to_dict() for e in self.entries]


# ---------- Construction ----------

def _class_key(p: GroupParams, g: NfElement) -> NfElement:
    """Least element of the D-class of g; non-central classes are {g, gz}."""
    if nf.is_central(p, g):
        return g
    return min(g, nf.multiply(p, g, nf.z_gen(p)))


def _orbit_ids(p: GroupParams, elements: List[NfElement], fuse: Callable[[NfElement], NfElement]) -> List[int]:
    """Galois orbits u -> u^gamma (gamma odd) on a set of representatives.

    fuse maps an element to the representative key of its fusion class.
    """
    key_to_index = {fuse(g): i for i, g in enumerate(elements)}
    parent = list(range(len(elements)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, g in enumerate(elements):
        order = nf.element_order(p, g)
        for gamma in range(1, max(order, 2), 2):
            j = key_to_index.get(fuse(nf.power(p, g, gamma)))
            if j is None:
                raise AssertionError(f"{nf.power(p, g, gamma)} is not fused into the representative set")
            parent[find(j)] = find(i)
    roots: Dict[int, int] = {}
    ids = []
    for i in range(len(elements)):
        ids.append(roots.setdefault(find(i), len(roots)))
    return ids


def t_set_rs1(r: int) -> SubsectionSet:
    """Z(D) together with x^i y^j for odd i, in D(r,1); c = x^2."""
    if r < 2:
        raise InvalidParametersError("t_set_rs1", f"need r >= 2, got {r}")
    p = GroupParams(r, 1)
    c = nf.make(p, 2, 0)
    c_group = nf.closure(p, [c])
    central = sorted(nf.center_elements(p))
    noncentral = [nf.make(p, i, j) for i in range(1, p.mod_a, 2) for j in range(p.mod_b)]
    members = central + noncentral
    ids = _orbit_ids(p, members, lambda g: _class_key(p, g))
    entries = []
    for g, orbit in zip(members, ids):
        if g == nf.IDENTITY:
            l_value = 2
        elif g in c_group:
            l_value = 2
        else:
            l_value = 1
        entries.append(SubsectionEntry(g, l_value, orbit))
    ts = SubsectionSet(params=p, case=RS1, entries=entries, l_block=2, canonical_c=c)
    expected = 1 << (r + 1)
    if len(ts) != expected:
        raise AssertionError(f"|T| = {len(ts)}, expected {expected}")
    return ts


def _alpha_on_nf(p: GroupParams, alpha: Automorphism) -> Callable[[NfElement], NfElement]:
    labels = alpha.group.labels

    def apply(g: NfElement) -> NfElement:
        return NfElement(*labels[alpha(nf.index_of(p, g))])

    return apply


def t_set_req_s(r: int, alpha: Automorphism) -> SubsectionSet:
    """A transversal of the alpha-orbits on Z(D) plus y^i x^(2j) for odd i, in D(r,r)."""
    if r < 2:
        raise InvalidParametersError("t_set_req_s", f"need r >= 2, got {r}")
    p = GroupParams(r, r)
    if alpha.group.order != p.order:
        raise InvalidAutomorphismError(f"acts on a group of order {alpha.group.order}, not on D({r},{r})")
    if not alpha.is_valid():
        raise InvalidAutomorphismError("map is not multiplicative")
    if alpha.order != 3:
        raise InvalidAutomorphismError(f"order {alpha.order}, expected 3")
    apply = _alpha_on_nf(p, alpha)
    z = nf.z_gen(p)

    orbit_min: Dict[NfElement, NfElement] = {}
    for g in nf.center_elements(p):
        orbit = {g, apply(g), apply(apply(g))}
        orbit_min[g] = min(orbit)
    transversal = sorted(set(orbit_min.values()))

    y = nf.y_gen(p)
    tail = []
    for i in range(1, p.mod_b, 2):
        for j in range(p.mod_a // 2):
            tail.append(nf.multiply(p, nf.power(p, y, i), nf.make(p, 2 * j, 0)))
    members = transversal + tail

    def fuse(g: NfElement) -> NfElement:
        return orbit_min[g] if nf.is_central(p, g) else _class_key(p, g)

    ids = _orbit_ids(p, members, fuse)
    entries = []
    for g, orbit in zip(members, ids):
        l_value = 3 if g in (nf.IDENTITY, z) else 1
        entries.append(SubsectionEntry(g, l_value, orbit))
    ts = SubsectionSet(params=p, case=REQ_S, entries=entries, l_block=3)
    numerator = 5 * (1 << (2 * (r - 1))) + 4
    if numerator % 3 or len(ts) != numerator // 3:
        raise AssertionError(f"|T| = {len(ts)} does not match (5*4^(r-1)+4)/3")
    return ts


def alpha_orbit_partition(r: int, alpha: Automorphism) -> Tuple[int, int]:
    """(fixed points, three-element orbits) of alpha on Z(D(r,r))."""
    p = GroupParams(r, r)
    apply = _alpha_on_nf(p, alpha)
    fixed = 0
    seen: Set[NfElement] = set()
    triples = 0
    for g in nf.center_elements(p):
        if g in seen:
            continue
        orbit = {g, apply(g), apply(apply(g))}
        seen |= orbit
        if len(orbit) == 1:
            fixed += 1
        elif len(orbit) == 3:
            triples += 1
        else:
            raise AssertionError(f"alpha-orbit of size {len(orbit)}")
    return fixed, triples


# ---------- Counting ----------

@dataclass
class KMinusL:
    sum: int
    closed_form: int
    match: bool


def k_minus_l_check(ts: SubsectionSet) -> KMinusL:
    """Sum of l-values over the nontrivial representatives against the closed form for k(B) - l(B)."""
    total = sum(e.l_value for e in ts.nontrivial())
    r = ts.params.r
    if ts.case == RS1:
        closed = (1 << (r + 1)) + (1 << (r - 1)) - 2
    else:
        numerator = 5 * (1 << (2 * (r - 1))) + 7
        if numerator % 3:
            raise AssertionError(f"5*4^(r-1)+7 not divisible by 3 at r={r}")
        closed = numerator // 3
    return KMinusL(sum=total, closed_form=closed, match=total == closed)


def _unit_orbit_lengths(modulus: int) -> List[int]:
    """Orbit lengths of multiplication by odd units on Z/modulus."""
    seen: Set[int] = set()
    lengths = []
    for a in range(modulus):
        if a in seen:
            continue
        orbit = {(a * g) % modulus for g in range(1, max(modulus, 2), 2)}
        seen |= orbit
        lengths.append(len(orbit))
    return sorted(lengths)


@dataclass
class GaloisCensus:
    orbit_count: int
    length_multiset: List[int]
    subsection_orbit_count: int
    subsection_lengths: List[int]
    height0_family_sizes: List[int]
    height1_family_sizes: List[int]
    rational_characters: int


def galois_orbit_structure(ts: SubsectionSet) -> GaloisCensus:
    """Both orbit censuses of the r > s = 1 representative set.

    The subsection census counts every Galois orbit of T once (identity
    included). The column census counts the orbits inside <c>, identity
    included, once per irreducible Brauer character, which gives 3r + 2.
    """
    if ts.case != RS1:
        raise CaseMismatchError(RS1, ts.case)
    p = ts.params
    c_group = nf.closure(p, [ts.canonical_c])
    by_orbit: Dict[int, List[SubsectionEntry]] = {}
    for e in ts.entries:
        by_orbit.setdefault(e.orbit_id, []).append(e)

    subsection_lengths = []
    column_lengths = []
    for members in by_orbit.values():
        length = len(members)
        subsection_lengths.append(length)
        in_c = members[0].element in c_group
        column_lengths.extend([length] * (2 if in_c else 1))
    r = p.r
    h0 = sorted(_unit_orbit_lengths(1 << r) * 2)
    h1 = _unit_orbit_lengths(1 << (r - 1))
    rational = sum(1 for size in h0 + h1 if size == 1)
    census = GaloisCensus(
        orbit_count=len(column_lengths),
        length_multiset=sorted(column_lengths),
        subsection_orbit_count=len(subsection_lengths),
        subsection_lengths=sorted(subsection_lengths),
        height0_family_sizes=h0,
        height1_family_sizes=h1,
        rational_characters=rational,
    )
    logger.debug(f"r={r}: {census.orbit_count} column orbits, {census.subsection_orbit_count} subsection orbits")
    return census


# ---------- Elementary abelian chains ----------

@dataclass
class ChainReport:
    max_length: int
    e8_class_count: int
    chain_counts_by_length: List[int]
    e8_is_standard: bool
    chains_end_at_e8: bool


def _elementary_abelian_subgroups(G, involutions: List[int]) -> List[FrozenSet[int]]:
    found: Set[FrozenSet[int]] = {frozenset([G.identity])}
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for t in involutions:
                if t in H or any(G.mul(t, h) != G.mul(h, t) for h in H):
                    continue
                K = H | {G.mul(t, h) for h in H}
                if K not in found:
                    found.add(K)
                    nxt.append(K)
        frontier = nxt
    return [H for H in found if len(H) > 1]


def elem_abelian_chains(p: GroupParams) -> ChainReport:
    """Chains P1 < ... < Pn of nontrivial elementary abelian subgroups of D(r,1), up to conjugacy."""
    if p.s != 1 or p.r < 2:
        raise InvalidParametersError("elem_abelian_chains", f"need s = 1 and r >= 2, got ({p.r},{p.s})")
    G = build_nf_group(p)
    involutions = [g for g in range(G.order) if G.element_orders[g] == 2]
    subgroups = sorted(_elementary_abelian_subgroups(G, involutions), key=lambda H: (len(H), sorted(H)))
    conj_rows = [G.conjugation_row(g) for g in range(G.order)]

    chains: List[Tuple[FrozenSet[int], ...]] = [(H,) for H in subgroups]
    all_chains = list(chains)
    while chains:
        longer = []
        for chain in chains:
            top = chain[-1]
            for H in subgroups:
                if len(H) > len(top) and top < H:
                    longer.append(chain + (H,))
        all_chains.extend(longer)
        chains = longer

    def chain_key(chain: Tuple[FrozenSet[int], ...]) -> Tuple[Tuple[int, ...], ...]:
        return min(tuple(tuple(sorted(int(row[h]) for h in H)) for H in chain) for row in conj_rows)

    classes: Dict[int, Set[Tuple[Tuple[int, ...], ...]]] = {}
    for chain in all_chains:
        classes.setdefault(len(chain), set()).add(chain_key(chain))
    max_length = max(classes)
    counts = [len(classes.get(n, ())) for n in range(1, max_length + 1)]

    e8 = [H for H in subgroups if len(H) == 8]
    standard = frozenset(nf.index_of(p, g) for g in nf.closure(
        p, [nf.make(p, 1 << (p.r - 1), 0), nf.y_gen(p), nf.z_gen(p)]))
    e8_classes = {min(tuple(sorted(int(row[h]) for h in H)) for row in conj_rows) for H in e8}
    ends_at_e8 = all(chain[-1] in e8 for chain in all_chains if len(chain) == 3)
    return ChainReport(
        max_length=max_length,
        e8_class_count=len(e8_classes),
        chain_counts_by_length=counts,
        e8_is_standard=e8 == [standard],
        chains_end_at_e8=ends_at_e8,
    )
