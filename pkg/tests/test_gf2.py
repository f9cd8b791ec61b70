import io

import numpy as np
import pytest
from hypothesis import given, strategies as st

from octahedra.gf2 import (
    Gf2Matrix,
    Gf2mFormatError,
    block,
    gram,
    rank,
    read_gf2m,
    row_reduce,
    write_gf2m,
)
from oracles import np_matmul, np_rank


@st.composite
def matrices(draw, max_rows=12, max_cols=12, rows=None, cols=None):
    r = draw(st.integers(0, max_rows)) if rows is None else rows
    c = draw(st.integers(0, max_cols)) if cols is None else cols
    data = draw(st.lists(st.integers(0, 1), min_size=r * c, max_size=r * c))
    return Gf2Matrix.from_numpy(np.array(data, dtype=np.uint8).reshape(r, c))


def test_rank_small_cases():
    assert rank(Gf2Matrix.identity(3)) == 3
    assert rank(Gf2Matrix.ones(4)) == 1
    assert rank(Gf2Matrix.identity(3) + Gf2Matrix.ones(3)) == 2


def test_empty_matrices_are_legal():
    assert rank(Gf2Matrix(0, 0)) == 0
    assert rank(Gf2Matrix(0, 5)) == 0
    assert rank(Gf2Matrix(4, 0)) == 0
    assert Gf2Matrix(0, 3).T.shape == (3, 0)


def test_padding_bits_rejected():
    with pytest.raises(ValueError):
        Gf2Matrix(1, 2, [0b100])


def test_immutable():
    m = Gf2Matrix.identity(2)
    with pytest.raises(AttributeError):
        m.rows = (0, 0)


def test_entry_layout():
    m = Gf2Matrix.from_lists([[1, 0, 0], [0, 0, 1]])
    assert m[0, 0] == 1 and m[1, 2] == 1 and m[1, 0] == 0
    assert m.rows == (1, 4)
    with pytest.raises(IndexError):
        m[2, 0]


@pytest.mark.parametrize("entries, rk, kdim", [
    ([[0, 0], [0, 0]], 0, 2),
    ([[1, 0], [0, 1]], 2, 0),
    ([[1, 1]], 1, 1),
])
def test_row_reduce_examples(entries, rk, kdim):
    rr = row_reduce(Gf2Matrix.from_lists(entries))
    assert rr.rank == rk
    assert len(rr.kernel_basis) == kdim


def test_row_reduce_single_parity_kernel():
    assert row_reduce(Gf2Matrix.from_lists([[1, 1]])).kernel_basis == [0b11]


@given(matrices())
def test_rank_matches_dense_oracle(m):
    assert rank(m) == np_rank(m.to_numpy())


@given(matrices())
def test_row_reduce_kernel_spans_null_space(m):
    rr = row_reduce(m)
    assert rr.rank + len(rr.kernel_basis) == m.ncols
    for v in rr.kernel_basis:
        for row in m.rows:
            assert bin(row & v).count("1") % 2 == 0
    # kernel vectors are independent
    assert rank(Gf2Matrix(len(rr.kernel_basis), m.ncols, rr.kernel_basis)) == len(rr.kernel_basis)
    again = row_reduce(rr.reduced)
    assert again.reduced == rr.reduced
    assert again.pivot_columns == rr.pivot_columns


@given(matrices(), st.data())
def test_subadditivity(a, data):
    b = data.draw(matrices(rows=a.nrows, cols=a.ncols))
    assert rank(a + b) <= rank(a) + rank(b)


@given(matrices())
def test_transpose_rank(m):
    assert rank(m.T) == rank(m)
    assert m.T.T == m


@given(st.integers(1, 40))
def test_identity_plus_ones_rank(m):
    expected = m - 1 if m % 2 else m
    assert rank(Gf2Matrix.identity(m) + Gf2Matrix.ones(m)) == expected


@given(matrices(max_rows=6, max_cols=10), st.data())
def test_gram_matches_oracle(y, data):
    omega = data.draw(matrices(rows=y.nrows, cols=y.nrows))
    g = gram(y, omega)
    yn = y.to_numpy()
    expect = np_matmul(np_matmul(yn.T, omega.to_numpy()), yn)
    assert np.array_equal(g.to_numpy(), expect)
    assert g.shape == (y.ncols, y.ncols)
    assert rank(g) <= min(rank(y), rank(omega))


@given(matrices(max_rows=6, max_cols=10), st.data())
def test_gram_symmetric_for_symmetric_omega(y, data):
    half = data.draw(matrices(rows=y.nrows, cols=y.nrows))
    omega = half + half.T
    assert gram(y, omega).is_symmetric()


def test_gram_examples():
    z = Gf2Matrix.zeros(2, 3)
    assert gram(z, Gf2Matrix.identity(2)).is_zero()
    assert gram(Gf2Matrix.identity(2), Gf2Matrix.identity(2)) == Gf2Matrix.identity(2)
    h = Gf2Matrix.hyperbolic(2)
    assert gram(Gf2Matrix.identity(2), h) == Gf2Matrix.from_lists([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        gram(Gf2Matrix.identity(3), Gf2Matrix.identity(2))


@given(matrices(), st.data())
def test_block_selects_entries(m, data):
    if m.nrows == 0 or m.ncols == 0:
        return
    ri = data.draw(st.lists(st.integers(0, m.nrows - 1), max_size=6))
    ci = data.draw(st.lists(st.integers(0, m.ncols - 1), max_size=6))
    b = block(m, ri, ci)
    for a, i in enumerate(ri):
        for c, j in enumerate(ci):
            assert b[a, c] == m[i, j]
    assert rank(b) <= rank(m)


def test_block_examples():
    m = Gf2Matrix.from_lists([[1, 0, 1], [0, 1, 1]])
    assert block(m, range(2), range(3)) == m
    assert block(m, [], []).shape == (0, 0)
    with pytest.raises(IndexError):
        block(m, [2], [0])


@given(matrices())
def test_gf2m_round_trip(m):
    buf = io.StringIO()
    write_gf2m(m, buf, {"n": 4, "k": 1})
    buf.seek(0)
    back, meta = read_gf2m(buf)
    assert back == m
    assert meta == {"n": "4", "k": "1"}


def test_gf2m_layout():
    buf = io.StringIO()
    write_gf2m(Gf2Matrix.from_lists([[1, 0, 0], [0, 1, 1]]), buf)
    assert buf.getvalue() == "GF2M 1\nrows 2 cols 3\n100\n011\n"


@pytest.mark.parametrize("text", [
    "",
    "GF2M 2\nrows 1 cols 1\n1\n",
    "GF2M 1\nrows 2 cols 2\n10\n",
    "GF2M 1\nrows 1 cols 2\n1x\n",
    "GF2M 1\nrows 1 cols 2\n101\n",
    "GF2M 1\nmeta broken\nrows 1 cols 1\n1\n",
    "GF2M 1\nrows a cols 1\n1\n",
])
def test_gf2m_rejects_malformed(text):
    with pytest.raises(Gf2mFormatError):
        read_gf2m(io.StringIO(text))


def test_random_and_numpy_round_trip():
    rng = np.random.default_rng(5)
    m = Gf2Matrix.random(7, 70, rng)
    assert Gf2Matrix.from_numpy(m.to_numpy()) == m
    assert Gf2Matrix.from_lists(m.to_lists()) == m
