#!/usr/bin/env python3
"""
Tests for automorphisms, automizers and fusion
"""

import sys
from pathlib import Path

import pytest
from sympy.combinatorics.named_groups import AlternatingGroup, SymmetricGroup

# Add src to path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root / "src"))

from redei_blocks import generic_group as gg
from redei_blocks import morphisms
from redei_blocks import nf_group as nf
from redei_blocks.errors import InvalidAutomorphismError, InvalidParametersError
from redei_blocks.nf_group import AbelianType, GroupParams


def permutation_group(group, name):
    elements = sorted(group.elements, key=lambda perm: perm.array_form)
    return gg.CayleyGroup.from_elements(elements, lambda a, b: a * b, name=name)


class TestAutomorphisms:
    def test_dihedral_group_of_order_eight(self):
        info = morphisms.nf_automorphism_group(GroupParams(1, 1))
        assert info.order == 8
        assert info.is_two_group
        assert info.sample_order3 is None

    @pytest.mark.parametrize("r,s", [(r, s) for r in range(1, 7) for s in range(1, r + 1) if r + s <= 7])
    def test_two_group_exactly_when_r_differs_from_s(self, r, s):
        info = morphisms.nf_automorphism_group(GroupParams(r, s))
        assert info.is_two_group == (r != s or r == 1)

    def test_order_three_when_r_equals_s(self):
        info = morphisms.nf_automorphism_group(GroupParams(2, 2))
        assert info.order % 3 == 0
        assert not info.is_two_group
        assert info.sample_order3 is not None
        assert info.sample_order3.order == 3

    def test_order3_automorphism(self):
        p = GroupParams(2, 2)
        alpha = order3 = morphisms.order3_automorphism(p)
        assert order3.is_valid()
        assert alpha.order == 3
        x = nf.index_of(p, nf.x_gen(p))
        y = nf.index_of(p, nf.y_gen(p))
        assert alpha(x) == y
        assert alpha.compose(alpha).compose(alpha).perm == tuple(range(p.order))

    def test_order3_automorphism_needs_r_equal_s(self):
        with pytest.raises(InvalidParametersError):
            morphisms.order3_automorphism(GroupParams(2, 1))

    def test_images_that_do_not_extend(self):
        p = GroupParams(2, 1)
        G = gg.build_nf_group(p)
        x = nf.index_of(p, nf.x_gen(p))
        y = nf.index_of(p, nf.y_gen(p))
        with pytest.raises(InvalidAutomorphismError):
            morphisms.automorphism_from_images(G, [x, y], [x, x])


class TestAbelian:
    @pytest.mark.parametrize("factors,expected", [((8, 2), True), ((4, 4), False), ((2,), True), ((4, 2, 2), False)])
    def test_aut_is_two_group(self, factors, expected):
        t = AbelianType(factors)
        assert morphisms.abelian_aut_is_two_group(t) == expected
        assert morphisms.automorphism_group(morphisms.build_abelian_group(t)).is_two_group == expected

    @pytest.mark.parametrize("s,count", [(1, 56), (2, 32), (3, 32), (4, 32)])
    def test_every_order_three_map_fixes_cyclic_subgroup(self, s, count):
        maps = morphisms.cyclic_order_three_maps(AbelianType((1 << s, 2, 2)))
        assert len(maps) == count
        G = maps[0].group
        for alpha in maps:
            fixed = morphisms.fixed_points(G, alpha)
            assert fixed.order == 1 << s
            assert morphisms.is_cyclic(G, fixed)


class TestFusion:
    @pytest.mark.parametrize("r,s,forced", [(3, 2, True), (4, 2, True), (2, 1, False), (2, 2, False), (3, 3, False)])
    def test_fusion_nilpotency_forced(self, r, s, forced):
        assert morphisms.fusion_nilpotency_forced(GroupParams(r, s)) == forced

    def test_two_group_is_two_nilpotent(self):
        report = morphisms.frobenius_two_nilpotent(gg.build_nf_group(GroupParams(2, 1)))
        assert report.two_nilpotent
        assert report.sylow_order == 16

    def test_a4_semidirect_is_not_two_nilpotent(self):
        sd = gg.build_a4_semidirect(2)
        report = morphisms.frobenius_two_nilpotent(sd.group)
        assert not report.two_nilpotent
        assert report.sylow_order == 16

    def test_automizer_of_base_in_order_three_extension(self):
        p = GroupParams(2, 2)
        alpha = morphisms.order3_automorphism(p)
        sd = gg.semidirect_by_automorphism(alpha.group, alpha.perm)
        base = gg.subgroup_from_elements(sd.group, sd.base)
        info = morphisms.automizer(sd.group, base)
        assert info.order == 12
        assert morphisms.h1_units_char2(morphisms.automizer_group(sd.group, base)) == 3

    @pytest.mark.parametrize("r", [2, 3])
    def test_fcentric_classes_in_a4_semidirect(self, r):
        sd = gg.build_a4_semidirect(r)
        G = sd.group
        S = gg.subgroup_closure(G, [sd.xt, sd.yt])
        classes = morphisms.fcentric_classes(G, S)
        assert sorted(Q.order for Q in classes) == [1 << (r + 1)] * 3 + [1 << (r + 2)]
        odd = [Q.order for Q in classes if not morphisms.automizer(G, Q).is_two_group]
        assert odd == [1 << (r + 1)]


class TestCohomology:
    def test_h1_of_small_groups(self):
        assert morphisms.h1_units_char2(permutation_group(SymmetricGroup(3), "S3")) == 1
        assert morphisms.h1_units_char2(permutation_group(AlternatingGroup(4), "A4")) == 3
        assert morphisms.h1_units_char2(morphisms.build_abelian_group(AbelianType((2, 2)))) == 1

    def test_gluing_incidence(self):
        assert morphisms.gluing_h1_incidence() == 0
        assert morphisms.gluing_h1_incidence(3, 1) == 1

    def test_gluing_rejects_small_modulus(self):
        with pytest.raises(InvalidParametersError):
            morphisms.gluing_h1_incidence(1)
