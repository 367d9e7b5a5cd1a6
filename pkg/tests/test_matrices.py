from fractions import Fraction
from random import Random

import pytest

from gramexpect import ExactMatrix, gram, identity, leverrier_char_coeffs
from gramexpect.matrices import matrix_from_json_str, matrix_to_json_str

from conftest import random_matrix, random_symmetric


class TestExactMatrix:
    def test_from_rows_coerces_entry_types(self):
        m = ExactMatrix.from_rows([[1, "1/2"], [Fraction(3, 4), "2"]])
        assert m.entries == ((Fraction(1), Fraction(1, 2)), (Fraction(3, 4), Fraction(2)))

    def test_rejects_ragged_rows(self):
        with pytest.raises(ValueError):
            ExactMatrix.from_rows([[1, 2], [3]])

    def test_empty_matrix(self):
        m = ExactMatrix.from_rows([])
        assert m.rows == 0 and m.cols == 0 and m.is_square

    def test_matmul_and_transpose(self):
        a = ExactMatrix.from_rows([[1, 2], [3, 4]])
        b = ExactMatrix.from_rows([["1/2", 0], [1, "1/3"]])
        prod = a @ b
        assert prod.entries == (
            (Fraction(5, 2), Fraction(2, 3)),
            (Fraction(11, 2), Fraction(4, 3)),
        )
        assert a.transpose().entries == ((Fraction(1), Fraction(3)), (Fraction(2), Fraction(4)))

    def test_matmul_shape_mismatch(self):
        a = ExactMatrix.from_rows([[1, 2]])
        with pytest.raises(ValueError):
            a @ a

    def test_trace(self):
        assert ExactMatrix.from_rows([[1, 9], [9, "1/2"]]).trace() == Fraction(3, 2)
        with pytest.raises(ValueError):
            ExactMatrix.from_rows([[1, 2, 3]]).trace()

    def test_submatrix_principal(self):
        m = ExactMatrix.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        assert m.submatrix((0, 2)).entries == ((Fraction(1), Fraction(3)), (Fraction(7), Fraction(9)))


class TestGram:
    def test_identity_columns(self):
        assert gram(identity(2)).entries == identity(2).entries

    def test_hand_dot_products(self):
        a = ExactMatrix.from_rows([[1, 2], [3, 4]])
        assert gram(a).entries == ((Fraction(10), Fraction(14)), (Fraction(14), Fraction(20)))

    def test_duplicated_columns_give_singular_gram(self):
        a = ExactMatrix.from_rows([[1, 1], [2, 2]])
        g = gram(a)
        assert g.entries[0][0] * g.entries[1][1] - g.entries[0][1] * g.entries[1][0] == 0

    def test_symmetric_nonnegative_diagonal(self):
        rng = Random(7)
        for _ in range(20):
            a = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 5))
            g = gram(a)
            assert g.is_symmetric()
            assert all(g.entries[i][i] >= 0 for i in range(g.rows))


class TestLeverrierCharCoeffs:
    def test_one_by_one(self):
        assert leverrier_char_coeffs(ExactMatrix.from_rows([[1]])).values == (Fraction(1), Fraction(1))

    def test_identity_gives_binomials(self):
        from math import comb

        for t in (1, 2, 3, 5):
            coeffs = leverrier_char_coeffs(identity(t))
            assert coeffs.values == tuple(Fraction(comb(t, i)) for i in range(t + 1))

    def test_diagonal_elementary_symmetric(self):
        m = ExactMatrix.from_rows([[2, 0, 0], [0, 3, 0], [0, 0, 5]])
        assert leverrier_char_coeffs(m).values == (
            Fraction(1),
            Fraction(10),
            Fraction(31),
            Fraction(30),
        )

    def test_c1_is_trace_on_random_matrices(self):
        rng = Random(11)
        for _ in range(15):
            m = random_symmetric(rng, rng.randint(1, 5))
            assert leverrier_char_coeffs(m)[1] == m.trace()


class TestMatrixJson:
    def test_round_trip_is_byte_identical(self):
        m = ExactMatrix.from_rows([["3/8", "-1"], ["0", "7/2"]])
        text = matrix_to_json_str(m)
        again = matrix_to_json_str(matrix_from_json_str(text))
        assert text == again

    def test_rejects_malformed(self):
        with pytest.raises(ValueError):
            matrix_from_json_str('{"cols": []}')
        with pytest.raises(ValueError):
            matrix_from_json_str('{"rows": [["1", "2"], ["3"]]}')
