#!/usr/bin/env python3
"""
Tests for subsection representative sets, Galois orbits and elementary abelian chains
"""

import sys
from pathlib import Path

import pytest

# Add src to path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root / "src"))

from redei_blocks import nf_group as nf
from redei_blocks import subsections
from redei_blocks.errors import CaseMismatchError, InvalidAutomorphismError, InvalidParametersError
from redei_blocks.invariants import invariants_req_s_special, invariants_rs1
from redei_blocks.morphisms import order3_automorphism
from redei_blocks.nf_group import GroupParams


class TestRs1:
    @pytest.mark.parametrize("r", [2, 3, 4, 5])
    def test_size_and_k_minus_l(self, r):
        ts = subsections.t_set_rs1(r)
        assert len(ts) == 1 << (r + 1)
        check = subsections.k_minus_l_check(ts)
        inv = invariants_rs1(r)
        assert check.match
        assert check.sum == inv.k - inv.l

    def test_l_values_on_cyclic_central_subgroup(self):
        r = 3
        ts = subsections.t_set_rs1(r)
        p = ts.params
        assert ts.canonical_c == nf.make(p, 2, 0)
        twos = [e.element for e in ts.nontrivial() if e.l_value == 2]
        assert sorted(twos) == sorted(g for g in nf.closure(p, [ts.canonical_c]) if g != nf.IDENTITY)

    def test_to_json_shape(self):
        entry = subsections.t_set_rs1(2).to_json()[0]
        assert set(entry) == {"element", "l", "orbit_id"}

    def test_needs_r_at_least_two(self):
        with pytest.raises(InvalidParametersError):
            subsections.t_set_rs1(1)


class TestReqS:
    @pytest.mark.parametrize("r", [2, 3])
    def test_size_and_k_minus_l(self, r):
        ts = subsections.t_set_req_s(r, order3_automorphism(GroupParams(r, r)))
        assert len(ts) == (5 * 4 ** (r - 1) + 4) // 3
        check = subsections.k_minus_l_check(ts)
        inv = invariants_req_s_special(r)
        assert check.match
        assert check.sum == inv.k - inv.l
        assert [str(e.element) for e in ts.nontrivial() if e.l_value == 3] == ["z"]

    def test_alpha_orbits_on_center(self):
        alpha = order3_automorphism(GroupParams(2, 2))
        assert subsections.alpha_orbit_partition(2, alpha) == (2, 2)

    def test_rejects_automorphism_of_another_group(self):
        alpha = order3_automorphism(GroupParams(3, 3))
        with pytest.raises(InvalidAutomorphismError):
            subsections.t_set_req_s(2, alpha)

    def test_rejects_identity(self):
        alpha = order3_automorphism(GroupParams(2, 2))
        identity = alpha.compose(alpha).compose(alpha)
        with pytest.raises(InvalidAutomorphismError):
            subsections.t_set_req_s(2, identity)


class TestGaloisOrbits:
    @pytest.mark.parametrize("r", [2, 3, 4, 5, 6])
    def test_three_r_plus_two_column_orbits(self, r):
        census = subsections.galois_orbit_structure(subsections.t_set_rs1(r))
        assert census.orbit_count == 3 * r + 2
        assert len(census.height0_family_sizes) == 2 * (r + 1)
        assert sum(census.subsection_lengths) == 1 << (r + 1)

    def test_rational_characters_of_d21(self):
        census = subsections.galois_orbit_structure(subsections.t_set_rs1(2))
        # eight linear characters, four of them rational, plus the two of degree 2
        assert census.height0_family_sizes == [1, 1, 1, 1, 2, 2]
        assert census.rational_characters == 6

    def test_rejects_req_s_set(self):
        ts = subsections.t_set_req_s(2, order3_automorphism(GroupParams(2, 2)))
        with pytest.raises(CaseMismatchError):
            subsections.galois_orbit_structure(ts)


class TestChains:
    @pytest.mark.parametrize("r", [2, 3])
    def test_chains_end_at_unique_e8(self, r):
        report = subsections.elem_abelian_chains(GroupParams(r, 1))
        assert report.max_length == 3
        assert report.e8_class_count == 1
        assert report.e8_is_standard
        assert report.chains_end_at_e8

    def test_needs_s_equal_one(self):
        with pytest.raises(InvalidParametersError):
            subsections.elem_abelian_chains(GroupParams(2, 2))
