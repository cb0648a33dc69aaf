"""Complexity measures: PCI(d), linear complexity, maximal order complexity, C(M).

The PCI search needs the rank of H(m, d) over every order ``m`` that leaves
enough equations (``n*(M-m) >= n_C``).  Ranks are computed on deduplicated rows
and skipped when a cheap upper bound shows they cannot reach the running
maximum:

* ``rank <= n_C(m)`` and ``rank <= #distinct m-windows``;
* if a degree-1 recurrence holds at order ``m'``, every later window symbol is
  an affine function of the ``m'``-window, so ``rank_d(m) <= rank_d(m')`` for
  all ``m >= m'``.

Skipped orders are listed in ``PciReport.pruned``; the returned order is the
same as an exhaustive scan would give.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import gf2
from .gf2 import _pack
from .hankel import (
    BitSequence,
    MonomialSet,
    VectorSequence,
    as_rows,
    build_system_custom,
    reduced_rows,
    reduced_system,
)
from .inversion import InversionSolution, solve_invertible
from .monomial import Polynomial, enumerate_basis, n_c

Seq = Union[BitSequence, VectorSequence]


@dataclass
class PciReport:
    d: int
    allow_constant: bool
    status: str  # found | no_feasible_m | no_invertible_solution
    m: Optional[int] = None
    feasible_range: Optional[tuple[int, int]] = None
    rank_profile: list[tuple[int, int]] = field(default_factory=list)
    pruned: list[int] = field(default_factory=list)
    max_rank: Optional[int] = None
    n_c: Optional[int] = None
    solution: Optional[InversionSolution] = None

    @property
    def found(self) -> bool:
        return self.status == "found"


@dataclass(frozen=True)
class MsetComplexity:
    order: int
    rank: int
    value: float
    defined: bool


def berlekamp_massey(s: BitSequence | np.ndarray) -> int:
    """Linear complexity of a binary sequence."""
    return berlekamp_massey_poly(s)[0]


def berlekamp_massey_poly(s) -> tuple[int, list[int]]:
    """Linear complexity and connection polynomial ``c`` with ``c[0] = 1``.

    ``sum_{i=0..L} c[i] * s[t-i] = 0`` for ``L <= t < len(s)``.
    """
    bits = s.array() if isinstance(s, BitSequence) else np.asarray(s, dtype=np.uint8)
    c, b = 1, 1
    L, shift = 0, 1
    rev = 0  # bit i holds s[t - i]
    for t, bit in enumerate(bits.tolist()):
        rev = (rev << 1) | bit
        if (c & rev).bit_count() & 1:
            prev = c
            c ^= b << shift
            if 2 * L <= t:
                L = t + 1 - L
                b = prev
                shift = 1
            else:
                shift += 1
        else:
            shift += 1
    return L, [(c >> i) & 1 for i in range(L + 1)]


def _extend_classes(seq: np.ndarray, cls: list[np.ndarray], upto: int) -> None:
    """cls[k][i, j] labels the window seq[i, j:j+k+1]; equal labels mean equal windows."""
    length = seq.shape[1]
    if not cls:
        cls.append(seq.astype(np.int64))
    for k in range(len(cls), upto):
        prev = cls[-1][:, : length - k]
        _, lab = np.unique(prev * 2 + seq[:, k:], return_inverse=True)
        cls.append(lab.reshape(prev.shape))


def moc(s: BitSequence | np.ndarray) -> int:
    """Smallest m >= 1 such that every m-window of ``s`` has a single observed successor."""
    bits = s.array() if isinstance(s, BitSequence) else np.asarray(s, dtype=np.uint8)
    length = bits.size
    if length < 2:
        raise ValueError("maximal order complexity needs at least two symbols")
    lab = bits.astype(np.int64)
    for m in range(1, length):
        # lab labels the m-windows at positions 0..length-m
        positions = length - m
        nxt = bits[m:].astype(np.int64)
        pair = lab[:positions] * 2 + nxt
        n_win = np.unique(lab[:positions]).size
        uniq, new_lab = np.unique(pair, return_inverse=True)
        if uniq.size == n_win:
            return m
        lab = new_lab
    return length - 1


def moc_is_degenerate(s: BitSequence, value: int) -> bool:
    """True when only one relation was observed (value == M - 1)."""
    return value >= len(s) - 1


class _Scan:
    """Memoized rank information for one (sequence, d, allow_constant)."""

    def __init__(self, seq: np.ndarray, d: int, allow_constant: bool):
        self.seq = seq
        self.d = d
        self.allow_constant = allow_constant
        self.ranks: dict[int, int] = {}
        self._classes: list[np.ndarray] = []

    def n_c(self, m: int) -> int:
        return n_c(m, self.d, self.allow_constant)

    def rows(self, m: int) -> int:
        n, length = self.seq.shape
        return n * (length - m)

    def distinct_windows(self, m: int) -> int:
        length = self.seq.shape[1]
        _extend_classes(self.seq, self._classes, m)
        lab = self._classes[m - 1][:, : length - m]
        return int(np.unique(lab).size)

    def rank(self, m: int) -> int:
        if m not in self.ranks:
            split = enumerate_basis(m, self.d, self.allow_constant)
            mat, _ = reduced_rows(self.seq, m, split.h_terms, split.g_terms)
            self.ranks[m] = gf2.rank_words(_pack(mat), mat.shape[1])
        return self.ranks[m]


def _linear_recurrence_order(seq: np.ndarray, allow_constant: bool, hi: int) -> Optional[int]:
    """An order m' <= hi at which a degree-1 recurrence holds for all coordinates, if cheap to find."""
    lc = max(berlekamp_massey(row) for row in seq)
    m = max(lc, 1)
    if m > hi:
        return None
    split = enumerate_basis(m, 1, allow_constant)
    mat, rhs = reduced_rows(seq, m, split.h_terms, split.g_terms)
    aug = np.hstack([mat, rhs[:, None]])
    r = gf2.rank_words(_pack(mat), mat.shape[1])
    if gf2.rank_words(_pack(aug), aug.shape[1]) == r:
        return m
    return None


def pci(s: Seq, d: int, allow_constant: bool = False) -> PciReport:
    """Polynomial complexity of inversion at degree ``d`` for a scalar or vector sequence."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    seq = as_rows(s)
    n, length = seq.shape
    scan = _Scan(seq, d, allow_constant)
    report = PciReport(d=d, allow_constant=allow_constant, status="no_feasible_m")

    feasible = []
    m = d
    while m < length and scan.rows(m) >= scan.n_c(m):
        feasible.append(m)
        m += 1
    if not feasible:
        return report
    report.feasible_range = (feasible[0], feasible[-1])

    ub = {m: min(scan.n_c(m), scan.rows(m)) for m in feasible}

    rec = _linear_recurrence_order(seq, allow_constant, feasible[-1])
    if rec is not None:
        rec = max(rec, d)
        cap = scan.rank(rec)
        for m in feasible:
            if m >= rec:
                ub[m] = min(ub[m], cap)

    best = max(scan.ranks.values(), default=0)
    window_checked: set[int] = set()
    while True:
        pending = [m for m in feasible if m not in scan.ranks and ub[m] > best]
        if not pending:
            break
        m = max(pending, key=lambda k: (ub[k], -k))
        if m not in window_checked:
            window_checked.add(m)
            ub[m] = min(ub[m], scan.distinct_windows(m))
            if ub[m] <= best:
                continue
        best = max(best, scan.rank(m))

    report.max_rank = best
    for m in feasible:
        if ub[m] < best:
            continue
        if scan.rank(m) != best:
            continue
        # Deduplicated rows span the same row space, so the canonical solution is unchanged.
        sol = solve_invertible(reduced_system(seq, m, d, allow_constant))
        if sol is not None:
            report.m = m
            report.n_c = scan.n_c(m)
            report.solution = sol
            report.status = "found"
            break
    else:
        report.status = "no_invertible_solution"

    report.rank_profile = sorted(scan.ranks.items())
    report.pruned = [m for m in feasible if m not in scan.ranks]
    return report


def lc_inverse(s: BitSequence) -> Optional[tuple[int, Polynomial, int]]:
    """Degree-1 inversion: (order, linear polynomial with a0 = 1, inverse bit)."""
    rep = pci(s, 1)
    if not rep.found:
        return None
    return rep.m, rep.solution.polynomial, rep.solution.inverse[0]


def complexity_relative(s: Seq, mset: MonomialSet) -> MsetComplexity:
    """C(M) = sqrt(r * m); undefined when no invertible associated polynomial exists over M."""
    system = build_system_custom(s, mset)
    r = gf2.rank(system.matrix())
    mat, rhs = system.augmented()
    defined = gf2.is_consistent(mat, rhs)
    return MsetComplexity(mset.order, r, math.sqrt(r * mset.order) if defined else float("nan"), defined)
