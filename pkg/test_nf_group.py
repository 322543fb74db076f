#!/usr/bin/env python3
"""
Tests for normal-form arithmetic in D(r,s)
"""

import sys
from pathlib import Path

import pytest

# Add src to path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root / "src"))

from redei_blocks import nf_group as nf
from redei_blocks.errors import CapExceededError, InvalidParametersError
from redei_blocks.nf_group import AbelianType, GroupParams, NfElement
from redei_blocks.utils import reset_env


@pytest.fixture(autouse=True)
def fresh_env():
    reset_env()
    yield
    reset_env()


class TestGroupParams:
    def test_order_and_defect(self):
        p = GroupParams(3, 2)
        assert p.order == 64
        assert p.defect == 6
        assert (p.mod_a, p.mod_b) == (8, 4)

    @pytest.mark.parametrize("r,s", [(1, 2), (0, 0), (2, 0), (3, 4)])
    def test_rejects_bad_exponents(self, r, s):
        with pytest.raises(InvalidParametersError):
            GroupParams(r, s)

    def test_order_cap_from_environment(self, monkeypatch):
        monkeypatch.setenv("REDEI_MAX_ORDER", "64")
        reset_env()
        assert GroupParams(3, 2).order == 64
        with pytest.raises(CapExceededError) as exc:
            GroupParams(3, 3)
        assert exc.value.size == 128
        assert exc.value.cap == 64


class TestArithmetic:
    def test_yx_costs_a_commutator(self):
        p = GroupParams(2, 1)
        x, y = nf.x_gen(p), nf.y_gen(p)
        assert nf.multiply(p, y, x) == NfElement(1, 1, 1)
        assert nf.commutator(p, x, y) == nf.z_gen(p)

    @pytest.mark.parametrize("r,s", [(1, 1), (2, 1), (2, 2), (3, 2)])
    def test_inverse_and_associativity(self, r, s):
        p = GroupParams(r, s)
        elems = list(nf.elements(p))
        assert len(elems) == p.order
        for g in elems:
            assert nf.multiply(p, g, nf.inverse(p, g)) == nf.IDENTITY
            assert nf.multiply(p, nf.inverse(p, g), g) == nf.IDENTITY
        sample = elems[:: max(1, len(elems) // 12)]
        for g in sample:
            for h in sample:
                for k in sample:
                    left = nf.multiply(p, nf.multiply(p, g, h), k)
                    right = nf.multiply(p, g, nf.multiply(p, h, k))
                    assert left == right

    def test_index_matches_enumeration(self):
        p = GroupParams(2, 2)
        for i, g in enumerate(nf.elements(p)):
            assert nf.index_of(p, g) == i

    def test_power_and_order(self):
        p = GroupParams(3, 1)
        x = nf.x_gen(p)
        assert nf.element_order(p, x) == 8
        assert nf.power(p, x, 8) == nf.IDENTITY
        assert nf.power(p, x, -1) == nf.inverse(p, x)
        # (xy)^2 = x^2 z in D(r,1)
        xy = nf.multiply(p, x, nf.y_gen(p))
        assert nf.power(p, xy, 2) == nf.make(p, 2, 0, 1)

    def test_str(self):
        p = GroupParams(2, 1)
        assert str(nf.IDENTITY) == "1"
        assert str(nf.make(p, 2, 0, 1)) == "x^2z"
        assert str(nf.make(p, 1, 1)) == "xy"


class TestStructure:
    @pytest.mark.parametrize("r,s", [(2, 1), (2, 2), (3, 1), (3, 2), (4, 3)])
    def test_characteristic_subgroups(self, r, s):
        p = GroupParams(r, s)
        cs = nf.characteristic_subgroups(p)
        assert cs.center == AbelianType((1 << (r - 1), 1 << (s - 1), 2))
        assert cs.derived == AbelianType((2,))
        assert cs.frattini_equals_center
        assert cs.center_order == p.order // 4

    @pytest.mark.parametrize("r,s", [(1, 1), (2, 1), (2, 2), (3, 1), (3, 3)])
    def test_class_count(self, r, s):
        assert nf.conjugacy_class_count(GroupParams(r, s)) == 5 << (r + s - 2)

    def test_maximal_subgroups_are_abelian(self):
        p = GroupParams(3, 2)
        types = sorted(t.to_list() for _, t in nf.maximal_subgroups(p))
        assert types == sorted([[4, 4, 2], [8, 2, 2], [8, 2, 2]])

    def test_maximal_subgroups_need_r_at_least_two(self):
        with pytest.raises(InvalidParametersError):
            nf.maximal_subgroups(GroupParams(1, 1))

    @pytest.mark.parametrize("n,count", [(4, 1), (5, 2), (6, 2), (9, 4)])
    def test_redei_family(self, n, count):
        pairs = nf.redei_family(n)
        assert len(pairs) == count
        assert all(r + s + 1 == n and r >= s >= 1 for r, s in pairs)

    def test_nonmetacyclic(self):
        assert not nf.nonmetacyclic(GroupParams(1, 1))
        assert nf.nonmetacyclic(GroupParams(2, 1))


class TestAbelianType:
    def test_normalizes_factors(self):
        t = AbelianType((2, 1, 8))
        assert t.factors == (8, 2)
        assert t.order == 16
        assert t.rank == 2
        assert str(t) == "C8 x C2"

    def test_rejects_non_chain(self):
        with pytest.raises(InvalidParametersError):
            AbelianType((4, 6))
