#!/usr/bin/env python3
"""
Tests for Cayley-table groups, cross-checked against sympy's coset enumeration
"""

import sys
from pathlib import Path

import pytest
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import free_group

# Add src to path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root / "src"))

from redei_blocks import generic_group as gg
from redei_blocks import nf_group as nf
from redei_blocks.errors import CapExceededError, InvalidParametersError, NonAbelianError, NotNormalError
from redei_blocks.morphisms import order3_automorphism
from redei_blocks.nf_group import AbelianType, GroupParams
from redei_blocks.utils import reset_env


@pytest.fixture(autouse=True)
def fresh_env():
    reset_env()
    yield
    reset_env()


def presented_order(r: int, s: int) -> int:
    F, x, y = free_group("x, y")
    z = x * y * x**-1 * y**-1
    relators = [x ** (1 << r), y ** (1 << s), z**2, x * z * x**-1 * z**-1, y * z * y**-1 * z**-1]
    return FpGroup(F, relators).order()


@pytest.mark.parametrize("r,s", [(1, 1), (2, 1), (2, 2), (3, 1)])
def test_presentation_order_matches_normal_form(r, s):
    p = GroupParams(r, s)
    G = gg.build_nf_group(p)
    assert G.order == presented_order(r, s) == p.order


@pytest.mark.parametrize("r,s", [(1, 1), (2, 1), (2, 2), (3, 2)])
def test_cayley_table_is_a_group(r, s):
    p = GroupParams(r, s)
    G = gg.build_nf_group(p)
    assert G.check_group_law()
    assert G.identity == nf.index_of(p, nf.IDENTITY)
    assert gg.presentation_match(G, nf.index_of(p, nf.x_gen(p)), nf.index_of(p, nf.y_gen(p)), p)


def test_table_agrees_with_normal_form():
    p = GroupParams(2, 2)
    G = gg.build_nf_group(p)
    elems = list(nf.elements(p))
    for g in elems:
        for h in elems:
            assert G.mul(nf.index_of(p, g), nf.index_of(p, h)) == nf.index_of(p, nf.multiply(p, g, h))


def test_rejects_non_group_table():
    with pytest.raises(InvalidParametersError):
        gg.CayleyGroup([[0, 1], [1, 1]])


def test_dump_header_and_size():
    G = gg.build_nf_group(GroupParams(1, 1))
    lines = G.dump().splitlines()
    assert lines[0] == "order 8"
    assert lines[1] == "0 0 0"
    assert len(lines) == 1 + 8 + 8


def test_center_and_quotient():
    p = GroupParams(2, 1)
    G = gg.build_nf_group(p)
    Z = gg.center(G)
    assert Z.order == 4
    Q = gg.quotient(G, Z)
    assert Q.order == 4
    assert gg.abelian_invariants(Q) == AbelianType((2, 2))


def test_quotient_requires_normal_subgroup():
    G = gg.build_nf_group(GroupParams(1, 1))
    x = nf.index_of(GroupParams(1, 1), nf.x_gen(GroupParams(1, 1)))
    H = gg.subgroup_closure(G, [x])
    with pytest.raises(NotNormalError):
        gg.quotient(G, H)


def test_abelian_invariants_reject_nonabelian():
    with pytest.raises(NonAbelianError):
        gg.abelian_invariants(gg.build_nf_group(GroupParams(2, 1)))


def test_subgroup_classes_of_dihedral_group():
    G = gg.build_nf_group(GroupParams(1, 1))
    reps = gg.subgroup_classes(G)
    assert len(reps) == 8
    assert [H.order for H in gg.subgroup_classes(G, order_filter=2)] == [2, 2, 2]


def test_subgroup_lattice_cap(monkeypatch):
    monkeypatch.setenv("REDEI_LATTICE_CAP", "8")
    reset_env()
    G = gg.build_nf_group(GroupParams(2, 1))
    with pytest.raises(CapExceededError):
        gg.subgroup_classes(G)


class TestSemidirect:
    def test_a4_construction_contains_d_r1(self):
        sd = gg.build_a4_semidirect(2)
        G = sd.group
        assert G.order == 48
        assert G.check_group_law()
        assert gg.presentation_match(G, sd.xt, sd.yt, GroupParams(2, 1))

    @pytest.mark.parametrize("cycle", [(0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3), (0, 2, 3, 1), (0, 3, 1, 2), (0, 3, 2, 1)])
    def test_a4_construction_for_every_four_cycle(self, cycle):
        sd = gg.build_a4_semidirect(2, four_cycle=cycle)
        G = sd.group
        assert gg.presentation_match(G, sd.xt, sd.yt, GroupParams(2, 1))
        assert G.labels[G.commutator(sd.xt, sd.yt)] == sd.commutator_label
        assert G.labels[sd.yt][0] != sd.commutator_label[0]

    def test_a4_rejects_non_four_cycle(self):
        with pytest.raises(InvalidParametersError):
            gg.build_a4_semidirect(2, four_cycle=(0, 1, 2))

    def test_a4_needs_r_at_least_two(self):
        with pytest.raises(InvalidParametersError):
            gg.build_a4_semidirect(1)

    def test_by_order_three_automorphism(self):
        p = GroupParams(2, 2)
        alpha = order3_automorphism(p)
        sd = gg.semidirect_by_automorphism(alpha.group, alpha.perm)
        assert sd.alpha_order == 3
        assert sd.group.order == 96
        base = gg.subgroup_from_elements(sd.group, sd.base)
        assert gg.is_normal(sd.group, base)
