from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from weyltasep.rational import SparseRationalMatrix, fstr, load_matrix, save_matrix

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def matrices(draw, max_dim=5, rows=None, cols=None):
    r = rows if rows is not None else draw(st.integers(1, max_dim))
    c = cols if cols is not None else draw(st.integers(1, max_dim))
    dense = [[draw(small) for _ in range(c)] for _ in range(r)]
    return SparseRationalMatrix.from_dense(dense)


def test_fstr_canonical():
    assert fstr(Fraction(4, 2)) == "2"
    assert fstr(Fraction(-3, 6)) == "-1/2"


def test_no_explicit_zeros():
    m = SparseRationalMatrix(2, 2, {(0, 0): 0, (1, 1): Fraction(1, 3)})
    assert m.nnz() == 1


def test_index_bounds():
    with pytest.raises(IndexError):
        SparseRationalMatrix(2, 2, {(2, 0): 1})


@given(matrices())
def test_json_roundtrip(m):
    assert SparseRationalMatrix.from_json(m.to_json()) == m


@given(matrices())
def test_text_roundtrip(m):
    assert SparseRationalMatrix.from_text(m.to_text()) == m


def test_file_roundtrip(tmp_path):
    m = SparseRationalMatrix.from_dense([[1, Fraction(1, 2)], [0, -3]])
    for fmt in ("json", "text"):
        path = tmp_path / ("m." + fmt)
        save_matrix(m, path, fmt)
        assert load_matrix(path) == m


@given(st.data())
def test_product_matches_dense(data):
    a = data.draw(matrices(max_dim=4))
    b = data.draw(matrices(rows=a.ncols, cols=data.draw(st.integers(1, 4))))
    dense = [[sum((a.to_dense()[i][k] * b.to_dense()[k][j] for k in range(a.ncols)), Fraction(0))
              for j in range(b.ncols)] for i in range(a.nrows)]
    assert (a @ b).to_dense() == dense


@settings(max_examples=60)
@given(matrices(max_dim=5))
def test_nullspace_vectors_are_kernel(m):
    basis = m.nullspace()
    assert len(basis) == m.ncols - m.rank()
    for v in basis:
        assert all(x == 0 for x in m.matvec(v))


def test_first_difference_and_permute():
    a = SparseRationalMatrix.from_dense([[1, 2], [3, 4]])
    assert a.first_difference(a) is None
    b = a.permute([1, 0], [1, 0])
    assert b.to_dense() == [[4, 3], [2, 1]]
    assert a.first_difference(b) == (0, 0, 1, 4)


def test_transpose_involution():
    a = SparseRationalMatrix.from_dense([[1, 0, 2]])
    assert a.transpose().shape == (3, 1)
    assert a.transpose().transpose() == a
