#!/usr/bin/env python3
"""
Tests for exact integer matrices, Smith normal form and binary quadratic forms
"""

import sys
from pathlib import Path

import pytest
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form as sympy_smith_normal_form
from sympy.polys.domains import ZZ

# Add src to path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root / "src"))

from redei_blocks import intforms
from redei_blocks.errors import (
    InvalidDiscriminantError,
    InvalidParametersError,
    NotPositiveDefiniteError,
    NotUnimodularError,
    SizeMismatchError,
)
from redei_blocks.intforms import IntMatrix, QuadForm


SQUARE_MATRICES = [
    [[2, 4, 4], [-6, 6, 12], [10, -4, -16]],
    [[6, 2], [2, 6]],
    [[4, 2, 2], [2, 4, 2], [2, 2, 12]],
    [[3, 1, 4, 1], [5, 9, 2, 6], [5, 3, 5, 8], [9, 7, 9, 3]],
]


class TestSmithNormalForm:
    def test_known_example(self):
        assert intforms.smith_normal_form(IntMatrix.of(SQUARE_MATRICES[0])) == (2, 6, 12)

    @pytest.mark.parametrize("rows", SQUARE_MATRICES)
    def test_agrees_with_sympy(self, rows):
        ours = intforms.smith_normal_form(IntMatrix.of(rows))
        theirs = sympy_smith_normal_form(Matrix(rows), domain=ZZ)
        assert sorted(abs(v) for v in ours) == sorted(abs(int(theirs[i, i])) for i in range(len(rows)))

    @pytest.mark.parametrize("rows", SQUARE_MATRICES)
    def test_divisor_chain_and_decomposition(self, rows):
        M = IntMatrix.of(rows)
        dec = intforms.smith_decomposition(M)
        for small, big in zip(dec.diagonal, dec.diagonal[1:]):
            assert big % small == 0
        assert abs(dec.U.det()) == 1 and abs(dec.V.det()) == 1
        D = dec.U @ M @ dec.V
        n = len(rows)
        assert D == IntMatrix.of([[dec.diagonal[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def test_rectangular(self):
        M = IntMatrix.of([[2, 4, 6], [4, 8, 12]])
        dec = intforms.smith_decomposition(M)
        assert dec.diagonal == (2, 0)
        assert dec.rank == 1

    def test_integer_kernel(self):
        M = IntMatrix.of([[1, 1, 0], [0, 2, 2]])
        kernel = intforms.integer_kernel(M)
        assert len(kernel) == 1
        (v,) = kernel
        assert abs(v[0]) == abs(v[1]) == abs(v[2]) == 1
        assert M @ IntMatrix.of([[x] for x in v]) == IntMatrix.of([[0], [0]])


class TestIntMatrix:
    def test_rejects_ragged_rows(self):
        with pytest.raises(InvalidParametersError):
            IntMatrix.of([[1, 2], [3]])

    def test_product_size_mismatch(self):
        with pytest.raises(SizeMismatchError):
            IntMatrix.of([[1, 2]]) @ IntMatrix.of([[1, 2]])

    def test_gram_and_positive_definite(self):
        Q = IntMatrix.of([[1, 0], [1, 1], [0, 1]])
        assert Q.gram() == IntMatrix.of([[2, 1], [1, 2]])
        assert Q.gram().is_positive_definite()
        assert not IntMatrix.of([[1, 2], [2, 1]]).is_positive_definite()

    def test_text_format(self):
        M = intforms.parse_matrix_text("2 3\n1 2 3\n-4 5 6\n")
        assert M.to_lists() == [[1, 2, 3], [-4, 5, 6]]
        assert intforms.format_matrix_text(M) == "2 3\n1 2 3\n-4 5 6\n"

    @pytest.mark.parametrize("text,error", [
        ("", InvalidParametersError),
        ("2 2\n1 2 3", SizeMismatchError),
        ("2 2\n1 a 3 4", InvalidParametersError),
        ("0 2\n", InvalidParametersError),
    ])
    def test_text_format_errors(self, text, error):
        with pytest.raises(error):
            intforms.parse_matrix_text(text)


class TestQuadraticForms:
    @pytest.mark.parametrize("form,expected", [
        ((8, 8, 3), (3, 2, 3)),
        ((4, 4, 3), (3, 2, 3)),
        ((1, 0, 8), (1, 0, 8)),
        ((8, 8, 6), (6, 4, 6)),
        ((13, 22, 10), (1, 0, 9)),
    ])
    def test_reduce(self, form, expected):
        q = QuadForm(*form)
        red = intforms.reduce_qf(q)
        assert red.reduced.as_tuple() == expected
        assert q.transform(red.transform) == red.reduced
        assert red.transform.det() == 1

    def test_reduce_rejects_indefinite(self):
        with pytest.raises(NotPositiveDefiniteError):
            intforms.reduce_qf(QuadForm(1, 3, 1))

    @pytest.mark.parametrize("disc,forms", [
        (-32, [(1, 0, 8), (3, 2, 3)]),
        (-4, [(1, 0, 1)]),
        (-3, [(1, 1, 1)]),
        (-20, [(1, 0, 5), (2, 2, 3)]),
    ])
    def test_reduced_classes(self, disc, forms):
        assert [q.as_tuple() for q in intforms.reduced_classes(disc)] == forms

    @pytest.mark.parametrize("disc", [-5, 0, 8])
    def test_reduced_classes_rejects_bad_discriminant(self, disc):
        with pytest.raises(InvalidDiscriminantError):
            intforms.reduced_classes(disc)

    def test_congruence_by_reduction(self):
        assert intforms.matrix_congruent_2x2(IntMatrix.of([[8, 4], [4, 6]]), IntMatrix.of([[6, 2], [2, 6]]))
        assert not intforms.matrix_congruent_2x2(IntMatrix.of([[2, 0], [0, 16]]), IntMatrix.of([[6, 2], [2, 6]]))

    def test_congruent_transform(self):
        A = IntMatrix.of([[8, 4], [4, 3]])
        assert intforms.congruent_transform(A, IntMatrix.of([[1, -1], [0, 1]])) == IntMatrix.of([[3, 1], [1, 3]])
        with pytest.raises(NotUnimodularError):
            intforms.congruent_transform(A, IntMatrix.of([[2, 0], [0, 1]]))


class TestCartan:
    @pytest.mark.parametrize("r", [2, 3, 5])
    def test_rs1_candidates(self, r):
        cand = intforms.cartan_candidates_rs1(r)
        assert cand.retained == IntMatrix.of([[3, 1], [1, 3]]).scale(1 << (r - 1))
        assert cand.excluded == IntMatrix.of([[1, 0], [0, 8]]).scale(1 << (r - 1))
        assert cand.snf_retained == (1 << (r - 1), 1 << (r + 2))

    @pytest.mark.parametrize("r", [2, 3, 4])
    def test_req_s(self, r):
        c = intforms.cartan_req_s(r)
        q = 1 << (2 * r)
        assert c.snf_bar == (1, 1, q)
        assert c.snf_bz == (2, 2, 2 * q)
        assert c.c_bar.det() == q

    def test_r2_final(self):
        final = intforms.cartan_r2_final()
        assert final.snf == (2, 2, 32)
        assert final.det == 128
        assert final.matrix.is_positive_definite()
