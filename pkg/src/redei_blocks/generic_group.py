"""
Finite groups as indexed Cayley tables.

Used for D(r,s) itself, its quotients and subgroups, the semidirect
products A4 x| C_{2^r} and D(r,r) x| C_3, and automizer quotients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from sympy.combinatorics import Permutation
from sympy.combinatorics.named_groups import AlternatingGroup

from . import nf_group as nf
from .errors import CapExceededError, InvalidParametersError, NonAbelianError, NotNormalError
from .nf_group import AbelianType, GroupParams
from .utils import get_env


class CayleyGroup:
    """A finite group given by its multiplication table on indices 0..n-1."""

    def __init__(self, table: np.ndarray, labels: Optional[List[Any]] = None, name: str = "G"):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n) or n == 0:
            raise InvalidParametersError("CayleyGroup", f"table must be square and nonempty, got {table.shape}")
        self.table = table
        self.table.setflags(write=False)
        self.name = name
        self.labels = labels if labels is not None else list(range(n))
        identity = np.flatnonzero((table == np.arange(n)).all(axis=1))
        if identity.size != 1:
            raise InvalidParametersError("CayleyGroup", f"{name}: no unique identity row")
        self.identity = int(identity[0])
        inverse = np.argmax(table == self.identity, axis=1)
        if not (table[np.arange(n), inverse] == self.identity).all():
            raise InvalidParametersError("CayleyGroup", f"{name}: some element has no inverse")
        self.inverse = inverse.astype(np.int64)
        self.inverse.setflags(write=False)

    @classmethod
    def from_elements(cls, elements: Sequence[Hashable], multiply: Callable[[Any, Any], Any], name: str = "G") -> "CayleyGroup":
        cap = get_env().max_group_order
        if len(elements) > cap:
            raise CapExceededError(name, len(elements), cap)
        index = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        table = np.empty((n, n), dtype=np.int64)
        for i, g in enumerate(elements):
            for j, h in enumerate(elements):
                table[i, j] = index[multiply(g, h)]
        return cls(table, list(elements), name)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def inv(self, g: int) -> int:
        return int(self.inverse[g])

    def conj(self, g: int, h: int) -> int:
        """g h g^-1."""
        return int(self.table[self.table[g, h], self.inverse[g]])

    def conjugation_row(self, g: int) -> np.ndarray:
        """Vector h -> g h g^-1."""
        return self.table[self.table[g, :], self.inverse[g]]

    def commutator(self, g: int, h: int) -> int:
        return self.mul(self.mul(g, h), self.mul(self.inv(g), self.inv(h)))

    def power(self, g: int, n: int) -> int:
        result = self.identity
        for _ in range(n % self.element_orders[g]):
            result = self.mul(result, g)
        return result

    @cached_property
    def element_orders(self) -> List[int]:
        orders = []
        for g in range(self.order):
            k, h = 1, g
            while h != self.identity:
                h = int(self.table[h, g])
                k += 1
            orders.append(k)
        return orders

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def check_group_law(self, samples: int = 100_000, seed: int = 0) -> bool:
        """Latin square, identity and inverse exactly; associativity exhaustive
        up to order 128 and on random triples above."""
        n = self.order
        full = np.arange(n)
        for row in self.table:
            if not np.array_equal(np.sort(row), full):
                return False
        for col in self.table.T:
            if not np.array_equal(np.sort(col), full):
                return False
        if n <= 128:
            for a in range(n):
                if not np.array_equal(self.table[self.table[a]], self.table[a][self.table]):
                    return False
            return True
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, samples))
        left = self.table[self.table[a, b], c]
        right = self.table[a, self.table[b, c]]
        return bool(np.array_equal(left, right))

    def dump(self) -> str:
        """Text dump: header, one label per line, then the table rows."""
        lines = [f"order {self.order}"]
        lines.extend(_label_text(label) for label in self.labels)
        lines.extend(" ".join(str(int(v)) for v in row) for row in self.table)
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"CayleyGroup({self.name}, order={self.order})"


def _label_text(label: Any) -> str:
    if isinstance(label, tuple):
        return " ".join(_label_text(part) for part in label)
    return str(label)


@dataclass(frozen=True)
class SubgroupRef:
    group: CayleyGroup = field(compare=False, repr=False)
    elements: Tuple[int, ...]
    generators: Tuple[int, ...] = field(default=(), compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def element_set(self) -> frozenset:
        return frozenset(self.elements)

    def __contains__(self, g: int) -> bool:
        return g in self.element_set


# ---------- Constructions ----------

def build_nf_group(p: GroupParams) -> CayleyGroup:
    """Cayley table of D(r,s), labels (a, b, c) in nf_group enumeration order."""
    labels = [g.as_tuple() for g in nf.elements(p)]
    arr = np.array(labels, dtype=np.int64)
    a, b, c = arr[:, 0], arr[:, 1], arr[:, 2]
    pa = (a[:, None] + a[None, :]) % p.mod_a
    pb = (b[:, None] + b[None, :]) % p.mod_b
    pc = (c[:, None] + c[None, :] + a[None, :] * b[:, None]) % 2
    table = (pa * p.mod_b + pb) * 2 + pc
    group = CayleyGroup(table, labels, name=f"D({p.r},{p.s})")
    logger.debug(f"built {group}")
    return group


def nf_index(p: GroupParams, g: nf.NfElement) -> int:
    return nf.index_of(p, g)


DEFAULT_FOUR_CYCLE = (0, 1, 3, 2)


@dataclass
class SemidirectA4:
    group: CayleyGroup
    xt: int
    yt: int
    four_cycle: Tuple[int, ...]

    @property
    def commutator_label(self) -> Tuple[Tuple[int, ...], int]:
        """Label of [xt, yt]: the square of the 4-cycle, in the A4 factor."""
        tau = Permutation([list(self.four_cycle)], size=4)
        return tuple((tau ** 2).array_form), 0


def build_a4_semidirect(r: int, four_cycle: Sequence[int] = DEFAULT_FOUR_CYCLE) -> SemidirectA4:
    """A4 x| C_{2^r}, the generator of C_{2^r} acting by conjugation with a 4-cycle.

    four_cycle is given 0-based in cycle notation, e.g. (0, 1, 3, 2) for (1 2 4 3).
    """
    if r < 2:
        raise InvalidParametersError("build_a4_semidirect", f"need r >= 2, got {r}")
    order = 12 << r
    cap = get_env().max_group_order
    if order > cap:
        raise CapExceededError(f"A4 x| C{1 << r}", order, cap)
    tau = Permutation([list(four_cycle)], size=4)
    if tau.order() != 4:
        raise InvalidParametersError("build_a4_semidirect", f"{tuple(four_cycle)} is not a 4-cycle")
    a4 = sorted(AlternatingGroup(4).elements, key=lambda perm: perm.array_form)
    modulus = 1 << r
    tau_inv = ~tau
    # phi_h(sigma) = tau^h sigma tau^-h, with period 4 in h
    twists = []
    for h in range(4):
        t = tau ** h
        ti = tau_inv ** h
        twists.append({tuple(s.array_form): tuple((t * s * ti).array_form) for s in a4})

    def multiply(g, h):
        s1, h1 = g
        s2, h2 = h
        twisted = twists[h1 % 4][s2]
        product = Permutation(list(s1)) * Permutation(list(twisted))
        return (tuple(product.array_form), (h1 + h2) % modulus)

    elements = [(tuple(s.array_form), h) for s in a4 for h in range(modulus)]
    group = CayleyGroup.from_elements(elements, multiply, name=f"A4 x| C{modulus}")
    index = {e: i for i, e in enumerate(elements)}
    # yt must avoid tau^2, the only double transposition that tau centralizes
    square = tuple((tau ** 2).array_form)
    yt_perm = next(tuple(s.array_form) for s in a4
                   if s.order() == 2 and tuple(s.array_form) != square)
    xt = index[((0, 1, 2, 3), 1)]
    yt = index[(yt_perm, 0)]
    return SemidirectA4(group=group, xt=xt, yt=yt, four_cycle=tuple(four_cycle))


@dataclass
class SemidirectByAutomorphism:
    group: CayleyGroup
    base: List[int]
    t: int
    alpha_order: int


def semidirect_by_automorphism(G: CayleyGroup, alpha: Sequence[int]) -> SemidirectByAutomorphism:
    """G x| <alpha> with (g, i)(h, j) = (g alpha^i(h), i + j)."""
    alpha = np.asarray(alpha, dtype=np.int64)
    powers = [np.arange(G.order)]
    while True:
        nxt = alpha[powers[-1]]
        if np.array_equal(nxt, powers[0]):
            break
        powers.append(nxt)
        if len(powers) > G.order:
            raise InvalidParametersError("semidirect_by_automorphism", "map is not a permutation of finite order")
    m = len(powers)
    elements = [(g, i) for g in range(G.order) for i in range(m)]

    def multiply(u, v):
        g, i = u
        h, j = v
        return (G.mul(g, int(powers[i][h])), (i + j) % m)

    group = CayleyGroup.from_elements(elements, multiply, name=f"{G.name} x| C{m}")
    base = [g * m for g in range(G.order)]
    return SemidirectByAutomorphism(group=group, base=base, t=G.identity * m + 1, alpha_order=m)


# ---------- Subgroups ----------

def subgroup_closure(G: CayleyGroup, gens: Iterable[int]) -> SubgroupRef:
    gens = tuple(int(g) for g in gens)
    members = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = G.mul(g, s)
                if h not in members:
                    members.add(h)
                    nxt.append(h)
        frontier = nxt
    return SubgroupRef(G, tuple(sorted(members)), gens)


def whole_group(G: CayleyGroup) -> SubgroupRef:
    return SubgroupRef(G, tuple(range(G.order)), tuple(range(G.order)))


def subgroup_from_elements(G: CayleyGroup, members: Iterable[int]) -> SubgroupRef:
    members = tuple(sorted(set(int(g) for g in members)))
    return SubgroupRef(G, members, members)


def conjugate_elements(G: CayleyGroup, g: int, H: SubgroupRef) -> Tuple[int, ...]:
    row = G.conjugation_row(g)
    return tuple(sorted(int(v) for v in row[list(H.elements)]))


def normalizer(G: CayleyGroup, H: SubgroupRef) -> SubgroupRef:
    members = [g for g in range(G.order) if conjugate_elements(G, g, H) == H.elements]
    return SubgroupRef(G, tuple(members), tuple(members))


def centralizer(G: CayleyGroup, H: SubgroupRef, within: Optional[SubgroupRef] = None) -> SubgroupRef:
    gens = H.generators or H.elements
    candidates = within.elements if within is not None else range(G.order)
    members = [g for g in candidates
               if all(G.table[g, h] == G.table[h, g] for h in gens)]
    return SubgroupRef(G, tuple(members), tuple(members))


def center(G: CayleyGroup) -> SubgroupRef:
    return centralizer(G, whole_group(G))


def is_normal(G: CayleyGroup, H: SubgroupRef) -> bool:
    gens = range(G.order)
    return all(conjugate_elements(G, g, H) == H.elements for g in gens)


def is_abelian_subgroup(G: CayleyGroup, H: SubgroupRef) -> bool:
    gens = H.generators or H.elements
    return all(G.table[g, h] == G.table[h, g] for g in gens for h in gens)


def induced_group(G: CayleyGroup, H: SubgroupRef, name: str = "H") -> CayleyGroup:
    """H as a CayleyGroup of its own (labels are the parent indices)."""
    elements = list(H.elements)
    index = {g: i for i, g in enumerate(elements)}
    sub = G.table[np.ix_(elements, elements)]
    table = np.vectorize(index.__getitem__)(sub) if sub.size else sub
    return CayleyGroup(table, elements, name=name)


def presentation_match(G: CayleyGroup, gx: int, gy: int, p: GroupParams) -> bool:
    """True iff gx, gy satisfy the defining relations of D(r,s) and generate
    a subgroup of order 2^(r+s+1)."""
    e = G.identity
    if G.power(gx, p.mod_a) != e or G.power(gy, p.mod_b) != e:
        return False
    z = G.commutator(gx, gy)
    if G.mul(z, z) != e:
        return False
    if G.commutator(gx, z) != e or G.commutator(gy, z) != e:
        return False
    return subgroup_closure(G, [gx, gy]).order == p.order


def quotient(G: CayleyGroup, N: SubgroupRef) -> CayleyGroup:
    """G/N on cosets ordered by least representative."""
    if not is_normal(G, N):
        raise NotNormalError(N.order)
    coset_of = np.full(G.order, -1, dtype=np.int64)
    reps: List[int] = []
    n_elems = np.array(N.elements, dtype=np.int64)
    for g in range(G.order):
        if coset_of[g] >= 0:
            continue
        coset_of[G.table[g, n_elems]] = len(reps)
        reps.append(g)
    table = coset_of[G.table[np.ix_(reps, reps)]]
    labels = [G.labels[g] for g in reps]
    return CayleyGroup(table, labels, name=f"{G.name}/N{N.order}")


def abelian_invariants(G: CayleyGroup) -> AbelianType:
    """Invariant factors, splitting off a cyclic direct factor of maximal order each round."""
    if not G.is_abelian():
        raise NonAbelianError(G.order)
    factors: List[int] = []
    current = G
    while current.order > 1:
        orders = current.element_orders
        g = max(range(current.order), key=lambda i: (orders[i], -i))
        factors.append(orders[g])
        current = quotient(current, subgroup_closure(current, [g]))
    return AbelianType(tuple(factors))


def subgroup_classes(G: CayleyGroup, order_filter: Optional[int] = None,
                     within: Optional[SubgroupRef] = None) -> List[SubgroupRef]:
    """One representative per conjugacy class of subgroups, by cyclic extension.

    Args:
        G: ambient group.
        order_filter: if given, only classes of exactly this order are returned
            and only subgroups whose order divides it are extended.
        within: restrict to subgroups of this subgroup, classified up to
            conjugation by its own elements.

    Returns:
        Representatives sorted by (order, elements); each is the
        lexicographically least element tuple of its class.

    Raises:
        CapExceededError: unfiltered enumeration above the lattice cap.
    """
    cap = get_env().lattice_cap
    size = within.order if within is not None else G.order
    if order_filter is None and size > cap:
        raise CapExceededError(f"subgroup lattice of {G.name}", size, cap)
    pool = list(within.elements) if within is not None else list(range(G.order))
    rows = np.stack([G.conjugation_row(g) for g in pool])

    def key_of(members: Sequence[int]) -> Tuple[int, ...]:
        images = np.sort(rows[:, np.asarray(members, dtype=np.int64)], axis=1)
        return min(tuple(int(v) for v in row) for row in images)

    trivial = (G.identity,)
    found: Dict[Tuple[int, ...], SubgroupRef] = {trivial: SubgroupRef(G, trivial, ())}
    seen: Dict[Tuple[int, ...], Tuple[int, ...]] = {trivial: trivial}
    frontier = [found[trivial]]
    while frontier:
        nxt = []
        for H in frontier:
            hset = H.element_set
            for g in pool:
                if g in hset:
                    continue
                K = subgroup_closure(G, list(H.generators) + [g])
                if order_filter is not None and order_filter % K.order:
                    continue
                if K.elements in seen:
                    continue
                key = key_of(K.elements)
                seen[K.elements] = key
                if key in found:
                    continue
                found[key] = SubgroupRef(G, key, tuple(_generators_for(G, key)))
                nxt.append(found[key])
        frontier = nxt
    reps = sorted(found.values(), key=lambda H: (H.order, H.elements))
    if order_filter is not None:
        reps = [H for H in reps if H.order == order_filter]
    logger.debug(f"{G.name}: {len(reps)} subgroup classes (filter={order_filter})")
    return reps


def _generators_for(G: CayleyGroup, members: Sequence[int]) -> List[int]:
    """A small generating set, greedily by largest element order."""
    orders = G.element_orders
    gens: List[int] = []
    span = {G.identity}
    for g in sorted(members, key=lambda h: (-orders[h], h)):
        if g not in span:
            gens.append(g)
            span = set(subgroup_closure(G, gens).elements)
            if len(span) == len(members):
                break
    return gens


def nf_subgroup(p: GroupParams, G: CayleyGroup, gens: Iterable[nf.NfElement]) -> SubgroupRef:
    return subgroup_closure(G, [nf.index_of(p, g) for g in gens])
