"""
Normal-form arithmetic for the minimal nonabelian 2-groups

    D(r,s) = < x, y | x^(2^r) = y^(2^s) = [x,y]^2 = [x,x,y] = [y,x,y] = 1 >,  r >= s >= 1.

Every element is written uniquely as x^a y^b z^c with z = [x,y] central of
order 2.  Moving y^b past x^a costs z^(ab), which gives the product law
(a1,b1,c1)(a2,b2,c2) = (a1+a2, b1+b2, c1+c2+a2*b1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, Iterable, Iterator, List, Set, Tuple

from loguru import logger

from .errors import CapExceededError, InvalidParametersError
from .utils import get_env, two_adic_valuation


@dataclass(frozen=True)
class GroupParams:
    """Exponents (r, s) of D(r,s); validated against the order cap."""
    r: int
    s: int

    def __post_init__(self) -> None:
        if not isinstance(self.r, int) or not isinstance(self.s, int):
            raise InvalidParametersError("D(r,s)", "r and s must be integers")
        if self.s < 1 or self.r < self.s:
            raise InvalidParametersError("D(r,s)", f"need r >= s >= 1, got r={self.r}, s={self.s}")
        cap = get_env().max_group_order
        if self.order > cap:
            raise CapExceededError(f"D({self.r},{self.s})", self.order, cap)

    @property
    def mod_a(self) -> int:
        return 1 << self.r

    @property
    def mod_b(self) -> int:
        return 1 << self.s

    @property
    def order(self) -> int:
        return 1 << (self.r + self.s + 1)

    @property
    def defect(self) -> int:
        return self.r + self.s + 1


@dataclass(frozen=True, order=True)
class NfElement:
    a: int
    b: int
    c: int

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __str__(self) -> str:
        parts = []
        if self.a:
            parts.append("x" if self.a == 1 else f"x^{self.a}")
        if self.b:
            parts.append("y" if self.b == 1 else f"y^{self.b}")
        if self.c:
            parts.append("z")
        return "".join(parts) or "1"


@dataclass(frozen=True)
class AbelianType:
    """Invariant factors in descending order, trivial factors dropped."""
    factors: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        cleaned = tuple(sorted((f for f in self.factors if f != 1), reverse=True))
        for f in cleaned:
            if f < 2:
                raise InvalidParametersError("AbelianType", f"invalid factor {f}")
        for big, small in zip(cleaned, cleaned[1:]):
            if big % small:
                raise InvalidParametersError("AbelianType", f"{small} does not divide {big}")
        object.__setattr__(self, "factors", cleaned)

    @property
    def order(self) -> int:
        n = 1
        for f in self.factors:
            n *= f
        return n

    @property
    def rank(self) -> int:
        return len(self.factors)

    def to_list(self) -> List[int]:
        return list(self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "C1"
        return " x ".join(f"C{f}" for f in self.factors)


# ---------- Generators ----------

IDENTITY = NfElement(0, 0, 0)


def x_gen(p: GroupParams) -> NfElement:
    return NfElement(1 % p.mod_a, 0, 0)


def y_gen(p: GroupParams) -> NfElement:
    return NfElement(0, 1 % p.mod_b, 0)


def z_gen(p: GroupParams) -> NfElement:
    return NfElement(0, 0, 1)


def make(p: GroupParams, a: int, b: int, c: int = 0) -> NfElement:
    """Canonical element x^a y^b z^c (exponents reduced)."""
    return NfElement(a % p.mod_a, b % p.mod_b, c % 2)


def elements(p: GroupParams) -> Iterator[NfElement]:
    for a, b, c in product(range(p.mod_a), range(p.mod_b), range(2)):
        yield NfElement(a, b, c)


def index_of(p: GroupParams, g: NfElement) -> int:
    """Position of g in the enumeration order of elements()."""
    return (g.a * p.mod_b + g.b) * 2 + g.c


# ---------- Arithmetic ----------

def multiply(p: GroupParams, g: NfElement, h: NfElement) -> NfElement:
    return NfElement(
        (g.a + h.a) % p.mod_a,
        (g.b + h.b) % p.mod_b,
        (g.c + h.c + h.a * g.b) % 2,
    )


def inverse(p: GroupParams, g: NfElement) -> NfElement:
    return NfElement((-g.a) % p.mod_a, (-g.b) % p.mod_b, (-g.c + g.a * g.b) % 2)


def power(p: GroupParams, g: NfElement, n: int) -> NfElement:
    if n < 0:
        g, n = inverse(p, g), -n
    result = IDENTITY
    base = g
    while n:
        if n & 1:
            result = multiply(p, result, base)
        base = multiply(p, base, base)
        n >>= 1
    return result


def element_order(p: GroupParams, g: NfElement) -> int:
    """Order by repeated squaring; every order is a power of 2."""
    order = 1
    current = g
    while current != IDENTITY:
        current = multiply(p, current, current)
        order <<= 1
    return order


def commutator(p: GroupParams, g: NfElement, h: NfElement) -> NfElement:
    """[g,h] = g h g^-1 h^-1."""
    return multiply(p, multiply(p, g, h), multiply(p, inverse(p, g), inverse(p, h)))


def is_central(p: GroupParams, g: NfElement) -> bool:
    return (commutator(p, g, x_gen(p)) == IDENTITY
            and commutator(p, g, y_gen(p)) == IDENTITY)


def conjugate(p: GroupParams, h: NfElement, g: NfElement) -> NfElement:
    """h g h^-1."""
    return multiply(p, multiply(p, h, g), inverse(p, h))


# ---------- Subgroups ----------

def closure(p: GroupParams, gens: Iterable[NfElement]) -> Set[NfElement]:
    """Subgroup generated by gens (finite group: products suffice)."""
    gens = list(gens)
    group: Set[NfElement] = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = multiply(p, g, s)
                if h not in group:
                    group.add(h)
                    nxt.append(h)
        frontier = nxt
    return group


def abelian_type_of(members: Iterable[object], square: Callable[[object], object], identity: object) -> AbelianType:
    """Type of a finite abelian 2-group from the sizes of its 2^k-torsion layers.

    With f(k) = log2 #{g : g^(2^k) = 1}, the number of cyclic factors of
    exponent at least k is f(k) - f(k-1).
    """
    members = list(members)
    n = len(members)
    if n & (n - 1):
        raise InvalidParametersError("abelian_type_of", f"order {n} is not a power of 2")
    # depth[g] = least k with g^(2^k) = 1
    depth: Dict[object, int] = {}
    for g in members:
        k = 0
        h = g
        while h != identity:
            h = square(h)
            k += 1
        depth[g] = k
    max_depth = max(depth.values(), default=0)
    layers = [0] * (max_depth + 1)
    for k in depth.values():
        layers[k] += 1
    log_sizes = []
    running = 0
    for k in range(max_depth + 1):
        running += layers[k]
        log_sizes.append(two_adic_valuation(running))
    at_least = [log_sizes[k] - log_sizes[k - 1] for k in range(1, max_depth + 1)]
    factors: List[int] = []
    for k in range(1, max_depth + 1):
        exactly = at_least[k - 1] - (at_least[k] if k < max_depth else 0)
        factors.extend([1 << k] * exactly)
    return AbelianType(tuple(factors))


def nf_abelian_type(p: GroupParams, members: Iterable[NfElement]) -> AbelianType:
    return abelian_type_of(members, lambda g: multiply(p, g, g), IDENTITY)


@dataclass(frozen=True)
class CharacteristicSubgroups:
    center: AbelianType
    derived: AbelianType
    frattini: AbelianType
    omega_of_center: AbelianType
    center_order: int
    frattini_equals_center: bool


def center_elements(p: GroupParams) -> List[NfElement]:
    return [g for g in elements(p) if is_central(p, g)]


def characteristic_subgroups(p: GroupParams) -> CharacteristicSubgroups:
    """Center, derived subgroup, Frattini subgroup and Omega(Z(D))."""
    center = center_elements(p)
    derived = closure(p, {commutator(p, g, h) for g in (x_gen(p), y_gen(p)) for h in elements(p)})
    # Phi(D) = D^2 D' for a 2-group
    frattini = closure(p, {multiply(p, g, g) for g in elements(p)} | derived)
    omega = [g for g in center if multiply(p, g, g) == IDENTITY]
    return CharacteristicSubgroups(
        center=nf_abelian_type(p, center),
        derived=nf_abelian_type(p, derived),
        frattini=nf_abelian_type(p, frattini),
        omega_of_center=nf_abelian_type(p, omega),
        center_order=len(center),
        frattini_equals_center=frattini == set(center),
    )


def maximal_subgroups(p: GroupParams) -> List[Tuple[List[NfElement], AbelianType]]:
    """The three index-2 subgroups <x^2,y,z>, <x,y^2,z>, <xy,x^2,z>."""
    if p.r < 2:
        raise InvalidParametersError("maximal_subgroups", "r = s = 1 gives the dihedral group of order 8")
    x, y, z = x_gen(p), y_gen(p), z_gen(p)
    x2 = multiply(p, x, x)
    generator_sets = [
        [x2, y, z],
        [x, multiply(p, y, y), z],
        [multiply(p, x, y), x2, z],
    ]
    result = []
    for gens in generator_sets:
        members = closure(p, gens)
        if len(members) != p.order // 2:
            raise AssertionError(f"<{', '.join(map(str, gens))}> has order {len(members)}")
        for g in gens:
            for h in gens:
                if commutator(p, g, h) != IDENTITY:
                    raise AssertionError(f"maximal subgroup generated by {gens} is not abelian")
        result.append((gens, nf_abelian_type(p, members)))
    return result


def conjugacy_classes(p: GroupParams) -> List[List[NfElement]]:
    """Classes under conjugation by x and y (which generate D)."""
    seen: Set[NfElement] = set()
    classes = []
    gens = (x_gen(p), y_gen(p))
    for g in elements(p):
        if g in seen:
            continue
        cls = {g}
        frontier = [g]
        while frontier:
            nxt = []
            for u in frontier:
                for h in gens:
                    v = conjugate(p, h, u)
                    if v not in cls:
                        cls.add(v)
                        nxt.append(v)
            frontier = nxt
        seen |= cls
        classes.append(sorted(cls))
    return classes


def conjugacy_class_count(p: GroupParams) -> int:
    count = len(conjugacy_classes(p))
    logger.debug(f"D({p.r},{p.s}) has {count} conjugacy classes")
    return count


# ---------- Family facts ----------

def redei_family(n: int) -> List[Tuple[int, int]]:
    """Pairs (r,s), r >= s >= 1, with D(r,s) of order 2^n.

    Distinct pairs give non-isomorphic groups, so there are (n-1)//2 classes.
    """
    return [(n - 1 - s, s) for s in range(1, n) if n - 1 - s >= s]


def nonmetacyclic(p: GroupParams) -> bool:
    """D(r,s) is metacyclic only for r = 1, where it is dihedral of order 8."""
    return p.r >= 2
