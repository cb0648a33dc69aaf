import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import linear_complexity, moc_scan, pci_scan
from seqinv.complexity import (
    berlekamp_massey,
    berlekamp_massey_poly,
    complexity_relative,
    lc_inverse,
    moc,
    moc_is_degenerate,
    pci,
)
from seqinv.golomb import run_recurrence
from seqinv.hankel import BitSequence, MonomialSet, VectorSequence
from seqinv.monomial import parse_anf

bits_st = st.lists(st.integers(0, 1), min_size=1, max_size=14)


def test_bm_examples():
    assert berlekamp_massey(BitSequence.from_str("0000")) == 0
    assert berlekamp_massey(BitSequence.from_str("0001")) == 4
    assert berlekamp_massey(BitSequence.from_str("110" * 4)) == 2


@settings(max_examples=300, deadline=None)
@given(bits_st)
def test_bm_matches_exhaustive(bits):
    L, c = berlekamp_massey_poly(np.array(bits, dtype=np.uint8))
    assert L == linear_complexity(bits)
    assert c[0] == 1 and len(c) == L + 1
    for t in range(L, len(bits)):
        assert sum(c[i] & bits[t - i] for i in range(L + 1)) & 1 == 0


def test_moc_examples():
    assert moc(BitSequence.from_str("0111000")) == 3
    assert moc(BitSequence.from_str("010101")) == 1
    with pytest.raises(ValueError):
        moc(BitSequence.from_str("1"))
    s = BitSequence.from_str("01")
    assert moc(s) == 1 and moc_is_degenerate(s, 1)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=2, max_size=40))
def test_moc_matches_scan_and_is_prefix_monotone(bits):
    arr = np.array(bits, dtype=np.uint8)
    value = moc(arr)
    assert value == moc_scan(bits)
    if len(bits) > 2:
        assert moc(arr[:-1]) <= value


def test_pci_periodic_example():
    s = BitSequence.from_str("011" * 8)
    rep = pci(s, 1)
    assert rep.found and rep.m == 2
    # the element before s_0 in the periodic extension is s_23
    assert rep.solution.inverse[0] == s.array()[23]


def test_pci_zero_sequence():
    rep = pci(BitSequence.from_str("0" * 16), 1)
    assert rep.found and rep.m == 1
    assert str(rep.solution.polynomial) == "x0" and rep.solution.inverse[0] == 0


def test_pci_nonlinear_below_lc():
    f, _ = parse_anf("x0*x2 + x1*x2", 3)
    s = run_recurrence(f, [1, 1, 1], 64)
    lc = berlekamp_massey(s)
    rep = pci(s, 2)
    assert rep.found and rep.m <= max(1, lc)


def test_pci_infeasible():
    rep = pci(BitSequence.from_str("0110"), 3)
    assert rep.status == "no_feasible_m" and not rep.found
    with pytest.raises(ValueError):
        pci(BitSequence.from_str("0110"), 0)


def test_pci_matches_exhaustive_scan():
    rng = np.random.default_rng(11)
    for _ in range(150):
        n = int(rng.integers(1, 3))
        M = int(rng.integers(6, 22))
        kind = rng.integers(3)
        if kind == 0:
            arr = rng.integers(0, 2, (n, M))
        elif kind == 1:
            p = int(rng.integers(1, 6))
            arr = np.tile(rng.integers(0, 2, (n, p)), (1, M // p + 1))[:, :M]
        else:
            arr = rng.integers(0, 2, (n, M)) & rng.integers(0, 2, (n, M))
        d = int(rng.integers(1, 3))
        const = bool(rng.integers(2))
        rep = pci(VectorSequence.from_array(arr), d, const)
        want = pci_scan(arr.tolist(), d, const)
        if want is None:
            assert rep.status == "no_feasible_m"
        elif want == -1:
            assert rep.status == "no_invertible_solution"
        else:
            assert rep.found and rep.m == want
            lo, hi = rep.feasible_range
            assert sorted(list(dict(rep.rank_profile)) + rep.pruned) == list(range(lo, hi + 1))
            assert rep.max_rank == max(r for _, r in rep.rank_profile)


def test_lc_inverse():
    m, poly, inv = lc_inverse(BitSequence.from_str("110" * 6))
    assert m == 2 and inv == 0
    assert poly.degree == 1


def test_complexity_relative():
    s = BitSequence.from_str("0111000")
    c = complexity_relative(s, MonomialSet.parse("x0*x2, x1*x2"))
    assert c.defined and c.order == 3
    assert c.value == pytest.approx(math.sqrt(c.rank * 3))
    bad = complexity_relative(BitSequence.from_str("1110001"), MonomialSet.parse("x0"))
    assert not bad.defined and math.isnan(bad.value)
    zero = complexity_relative(BitSequence.from_str("0" * 8), MonomialSet.parse("x0"))
    assert zero.defined and zero.rank == 0 and zero.value == 0
