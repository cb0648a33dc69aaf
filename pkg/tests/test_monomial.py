from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import basis_monomials
from seqinv.gf2 import BitVec
from seqinv.monomial import (
    ONE,
    Monomial,
    Polynomial,
    anf_to_string,
    enumerate_basis,
    eval_monomial,
    eval_poly,
    n_c,
    parse_anf,
)


def test_basis_m3_d2():
    split = enumerate_basis(3, 2)
    assert [str(x) for x in split.h_basis] == ["1", "x1", "x2"]
    assert [str(x) for x in split.g_basis] == ["x1", "x2", "x1*x2"]
    assert split.n_c == 6 == comb(3, 1) + comb(3, 2)
    assert [str(x) for x in split.h_terms] == ["x0", "x0*x1", "x0*x2"]


def test_basis_small_cases():
    split = enumerate_basis(2, 1)
    assert [str(x) for x in split.h_basis] == ["1"] and [str(x) for x in split.g_basis] == ["x1"]
    assert enumerate_basis(4, 2).n_c == 10
    assert [str(x) for x in enumerate_basis(3, 1, allow_constant=True).g_basis] == ["1", "x1", "x2"]


@pytest.mark.parametrize("m,d", [(2, 3), (3, 0), (0, 0)])
def test_basis_rejects_bad_degree(m, d):
    with pytest.raises(ValueError):
        enumerate_basis(m, d)


def test_basis_size_identity():
    for m in range(1, 17):
        for d in range(1, m + 1):
            lhs = sum(comb(m - 1, k) for k in range(d)) + sum(comb(m - 1, k) for k in range(1, d + 1))
            assert lhs == sum(comb(m, j) for j in range(1, d + 1)) == n_c(m, d)
            if m <= 9:
                split = enumerate_basis(m, d)
                h, g = basis_monomials(m, d)
                assert split.n_c == lhs
                assert {x.vars for x in split.h_basis} == set(h)
                assert {x.vars for x in split.g_basis} == set(g)


def test_order_is_degree_then_lex_and_total():
    mons = enumerate_basis(5, 3).g_basis
    keys = [(len(x.vars), x.vars) for x in mons]
    assert keys == sorted(keys)
    for a in mons:
        for b in mons:
            assert (a < b) + (b < a) + (a == b) == 1


def test_monomial_validation():
    with pytest.raises(ValueError):
        Monomial((2, 1))
    assert Monomial.of(2, 0, 2) == Monomial((0, 2))
    assert Monomial((0, 2)).without_x0() == Monomial((2,))
    with pytest.raises(ValueError):
        Monomial((1,)).without_x0()


def test_eval_monomial_examples():
    assert eval_monomial(ONE, [0, 0]) == 1
    assert eval_monomial(Monomial((0, 2)), [1, 0, 1]) == 1
    assert eval_monomial(Monomial((0, 2)), [1, 0, 0]) == 0
    with pytest.raises(IndexError):
        eval_monomial(Monomial((0, 3)), [1, 0, 0])


def test_eval_poly_examples():
    f, c = parse_anf("x0*x2 + x1*x2", 3)
    assert eval_poly(f, c, [0, 1, 1]) == 1
    f1, c1 = parse_anf("x0 + 1", 3)
    assert eval_poly(f1, c1, [0, 0, 0]) == 1
    assert eval_poly(f, BitVec.zeros(2), [1, 1, 1]) == 0
    with pytest.raises(ValueError):
        eval_poly(f, BitVec.zeros(3), [1, 1, 1])
    with pytest.raises(ValueError):
        eval_poly(f, c, [1, 1])


def test_anf_text():
    f = Polynomial(3, (Monomial((1, 2)), Monomial((0, 2))))
    assert str(f) == "x0*x2 + x1*x2"
    p, _ = parse_anf("x0 + 1", 3)
    assert set(p.terms) == {Monomial((0,)), ONE}
    assert not p.weakly_homogeneous
    assert str(parse_anf("0", 3)[0]) == "0"
    assert anf_to_string(f, BitVec.from_str("01")) == "x1*x2"
    for bad in ["x3", "x0*", "y1", "x0 + + x1", ""]:
        with pytest.raises(ValueError):
            parse_anf(bad, 3)


def test_repeated_terms_cancel():
    assert str(parse_anf("x1 + x1 + x2", 3)[0]) == "x2"


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 7).flatmap(lambda m: st.tuples(st.just(m), st.sets(st.frozensets(st.integers(0, m - 1), max_size=m)))))
def test_parse_print_roundtrip(arg):
    m, supports = arg
    p = Polynomial(m, tuple(Monomial(tuple(sorted(s))) for s in supports))
    q, coeffs = parse_anf(str(p), m)
    assert q == p
    assert coeffs.weight() == len(p.terms)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=8, max_size=8), st.lists(st.integers(0, 1), min_size=8, max_size=8),
       st.lists(st.integers(0, 1), min_size=4, max_size=4))
def test_eval_poly_linear_in_coefficients(c1, c2, w):
    p = Polynomial(4, tuple(enumerate_basis(4, 2).g_basis[:4] + (Monomial((0,)), Monomial((0, 3)), ONE, Monomial((1, 2, 3)))))
    a, b = BitVec.from_bits(c1), BitVec.from_bits(c2)
    assert eval_poly(p, a ^ b, w) == eval_poly(p, a, w) ^ eval_poly(p, b, w)
