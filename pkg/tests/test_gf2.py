import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import matvec, rank_int
from seqinv import gf2
from seqinv.gf2 import BitMatrix, BitVec


def matrices(max_rows=12, max_cols=150):
    return st.integers(0, max_rows).flatmap(
        lambda r: st.integers(0, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r).map(
                lambda rows: (rows, c)
            )
        )
    )


def as_matrix(rows, cols):
    return BitMatrix.from_array(np.array(rows, dtype=np.uint8).reshape(len(rows), cols))


def test_bitvec_roundtrip_and_padding():
    v = BitVec.from_str("1011" * 20)
    assert str(v) == "1011" * 20
    assert v.length == 80 and v.weight() == 60
    w = BitVec.from_bits([1] * 70)
    assert (w ^ w).weight() == 0
    assert BitVec.zeros(5) == BitVec.from_str("00000")
    assert BitVec.unit(4, 2).to_array().tolist() == [0, 0, 1, 0]
    assert str(BitVec.from_str("10").concat(BitVec.from_str("011"))) == "10011"


def test_rank_examples():
    assert gf2.rank(BitMatrix.identity(3)) == 3
    assert gf2.rank(BitMatrix.from_array([[1, 1], [1, 1]])) == 1
    assert gf2.rank(BitMatrix.zeros(4, 6)) == 0


def test_rref_examples():
    ech, t, piv = gf2.rref_with_transform(BitMatrix.identity(3))
    assert ech == BitMatrix.identity(3) and t == BitMatrix.identity(3) and piv == [0, 1, 2]
    ech, _, piv = gf2.rref_with_transform(BitMatrix.from_array([[1, 1], [1, 1]]))
    assert ech.to_array().tolist() == [[1, 1], [0, 0]] and piv == [0]


def test_rref_random_transform():
    rng = np.random.default_rng(8)
    a = BitMatrix.from_array(rng.integers(0, 2, (8, 8)))
    ech, t, piv = gf2.rref_with_transform(a)
    assert t @ a == ech
    assert gf2.rank(t) == 8
    assert len(piv) == gf2.rank(a)


def test_solve_examples():
    assert str(gf2.solve(BitMatrix.identity(3), BitVec.from_str("101"))) == "101"
    assert str(gf2.solve(BitMatrix.from_array([[1, 1]]), BitVec.from_str("1"))) == "10"
    assert gf2.solve(BitMatrix.zeros(2, 2), BitVec.from_str("10")) is None
    with pytest.raises(ValueError):
        gf2.solve(BitMatrix.identity(3), BitVec.from_str("10"))


def test_kernel_examples():
    assert gf2.kernel_basis(BitMatrix.identity(3)) == []
    ker = gf2.kernel_basis(BitMatrix.zeros(1, 2))
    assert len(ker) == 2 and gf2.rank(BitMatrix.from_rows(ker)) == 2
    assert [str(v) for v in gf2.kernel_basis(BitMatrix.from_array([[1, 1]]))] == ["11"]


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_matches_integer_oracle(mc):
    rows, cols = mc
    a = as_matrix(rows, cols)
    r = gf2.rank(a)
    assert r == rank_int(rows)
    assert r == len(gf2.rref_with_transform(a)[2])


@settings(max_examples=150, deadline=None)
@given(matrices(max_rows=10, max_cols=80), st.randoms(use_true_random=False))
def test_solve_and_kernel_properties(mc, rnd):
    rows, cols = mc
    a = as_matrix(rows, cols)
    rhs = [rnd.randint(0, 1) for _ in rows]
    x = gf2.solve(a, BitVec.from_bits(rhs))
    aug_rank = rank_int([r + [b] for r, b in zip(rows, rhs)])
    assert (x is not None) == (aug_rank == rank_int(rows))
    if x is not None:
        assert matvec(rows, x.to_array().tolist()) == rhs
    ker = gf2.kernel_basis(a)
    assert len(ker) + gf2.rank(a) == cols
    for v in ker:
        assert not any(matvec(rows, v.to_array().tolist()))
    if ker:
        assert gf2.rank(BitMatrix.from_rows(ker, cols)) == len(ker)


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=9, max_cols=70))
def test_transform_is_invertible(mc):
    rows, cols = mc
    a = as_matrix(rows, cols)
    ech, t, piv = gf2.rref_with_transform(a)
    assert t @ a == ech
    assert gf2.rank(t) == a.rows
    assert piv == sorted(piv)


def test_matmul_matches_numpy():
    rng = np.random.default_rng(1)
    x = rng.integers(0, 2, (7, 130))
    y = rng.integers(0, 2, (130, 9))
    prod = BitMatrix.from_array(x) @ BitMatrix.from_array(y)
    assert prod.to_array().tolist() == ((x @ y) % 2).tolist()
    assert BitMatrix.from_array(x).transpose().to_array().tolist() == x.T.tolist()


def test_in_row_space():
    a = BitMatrix.from_array([[1, 0, 1], [0, 1, 1]])
    assert gf2.in_row_space(BitVec.from_str("110"), a)
    assert not gf2.in_row_space(BitVec.from_str("100"), a)
