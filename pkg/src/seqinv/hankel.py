"""Hankel systems of recurrence relations.

Row ``j`` of a system of order ``m`` encodes the relation
``s[m+j] = f(s[j], ..., s[j+m-1])`` as a linear equation in the coefficients of
``f = X0*h + g``.  Vector sequences stack one block of rows per coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .gf2 import BitMatrix, BitVec, _pack
from .monomial import BasisSplit, Monomial, Polynomial, enumerate_basis, eval_columns, parse_anf


@dataclass(frozen=True)
class BitSequence:
    bits: BitVec

    def __post_init__(self):
        if self.bits.length < 1:
            raise ValueError("a sequence needs at least one symbol")

    @classmethod
    def from_str(cls, text: str) -> "BitSequence":
        return cls(BitVec.from_str(text))

    @classmethod
    def from_bits(cls, bits) -> "BitSequence":
        return cls(BitVec.from_bits(bits))

    def __len__(self) -> int:
        return self.bits.length

    def __getitem__(self, i: int) -> int:
        return self.bits[i]

    def array(self) -> np.ndarray:
        return self.bits.to_array()

    def __str__(self) -> str:
        return str(self.bits)


@dataclass(frozen=True)
class VectorSequence:
    """``n`` coordinate sequences of a common length; coordinate i is bit i of each state."""

    coords: tuple[BitSequence, ...]

    def __post_init__(self):
        if not self.coords:
            raise ValueError("a vector sequence needs at least one coordinate")
        if len({len(c) for c in self.coords}) != 1:
            raise ValueError("coordinate sequences must have equal length")
        object.__setattr__(self, "coords", tuple(self.coords))

    @classmethod
    def from_lines(cls, lines: Sequence[str]) -> "VectorSequence":
        return cls(tuple(BitSequence.from_str(ln) for ln in lines))

    @classmethod
    def from_array(cls, arr) -> "VectorSequence":
        arr = np.asarray(arr, dtype=np.uint8)
        return cls(tuple(BitSequence.from_bits(row) for row in arr))

    @classmethod
    def from_states(cls, states: Sequence[Sequence[int]]) -> "VectorSequence":
        """Build from a list of n-bit states (the sequence elements)."""
        return cls.from_array(np.asarray(states, dtype=np.uint8).T)

    @property
    def n(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords[0])

    def array(self) -> np.ndarray:
        return np.stack([c.array() for c in self.coords])

    def state(self, k: int) -> tuple[int, ...]:
        return tuple(c[k] for c in self.coords)


Sequenceish = Union[BitSequence, VectorSequence]


def as_rows(s: Sequenceish) -> np.ndarray:
    """(n, M) uint8 view of a scalar or vector sequence."""
    if isinstance(s, BitSequence):
        return s.array()[None, :]
    if isinstance(s, VectorSequence):
        return s.array()
    arr = np.asarray(s, dtype=np.uint8)
    return arr[None, :] if arr.ndim == 1 else arr


@dataclass(frozen=True)
class MonomialSet:
    """An ordered set of monomials over X0..X_{m-1} used as Hankel columns."""

    monomials: tuple[Monomial, ...]
    order: Optional[int] = None

    def __post_init__(self):
        mons = tuple(self.monomials)
        if not mons:
            raise ValueError("empty monomial set")
        if len(set(mons)) != len(mons):
            raise ValueError("duplicate monomials")
        need = 1 + max(max((mo.max_index for mo in mons), default=-1), 0)
        order = need if self.order is None else self.order
        if order < need:
            raise ValueError(f"order {order} too small for monomials needing {need}")
        object.__setattr__(self, "monomials", mons)
        object.__setattr__(self, "order", order)

    @classmethod
    def parse(cls, text: str, order: Optional[int] = None) -> "MonomialSet":
        """Comma- or semicolon-separated ANF terms, e.g. ``"x0*x1, x0*x2, x1*x2"``."""
        parts = [p.strip() for p in text.replace(";", ",").split(",") if p.strip()]
        cap = order if order is not None else 1 << 16
        mons = []
        for p in parts:
            poly, _ = parse_anf(p, cap)
            if len(poly.terms) != 1:
                raise ValueError(f"{p!r} is not a single monomial")
            mons.append(poly.terms[0])
        return cls(tuple(mons), order)

    @classmethod
    def from_split(cls, split: BasisSplit) -> "MonomialSet":
        return cls(tuple(split.h_terms + split.g_terms), split.m)

    @property
    def h_terms(self) -> list[Monomial]:
        return [mo for mo in self.monomials if mo.vars and mo.vars[0] == 0]

    @property
    def g_terms(self) -> list[Monomial]:
        return [mo for mo in self.monomials if not (mo.vars and mo.vars[0] == 0)]

    def __len__(self) -> int:
        return len(self.monomials)

    def __str__(self) -> str:
        return ", ".join(str(mo) for mo in self.monomials)


@dataclass(frozen=True)
class HankelSystem:
    """``[h1 | h2] (a, b) = rhs`` together with the inversion rows ``vh``/``vg``."""

    h1: BitMatrix
    h2: BitMatrix
    rhs: BitVec
    vh: BitMatrix
    vg: BitMatrix
    m: int
    d: Optional[int]
    n: int
    length: int
    h_terms: tuple[Monomial, ...] = field(repr=False)
    g_terms: tuple[Monomial, ...] = field(repr=False)
    last: BitVec = field(repr=False)  # s_{m-1} of each coordinate
    split: Optional[BasisSplit] = field(default=None, repr=False)
    mset: Optional[MonomialSet] = field(default=None, repr=False)

    @property
    def n_a(self) -> int:
        return self.h1.cols

    @property
    def n_b(self) -> int:
        return self.h2.cols

    @property
    def n_c(self) -> int:
        return self.h1.cols + self.h2.cols

    @property
    def rows(self) -> int:
        return self.h1.rows

    def matrix(self) -> BitMatrix:
        return self.h1.hstack(self.h2)

    def augmented(self) -> tuple[BitMatrix, BitVec]:
        """``[[h1, h2], [vh, 0]]`` and ``(rhs, 1...1)``."""
        bottom = self.vh.hstack(BitMatrix.zeros(self.n, self.n_b))
        ones = BitVec.from_bits([1] * self.n)
        return self.matrix().vstack(bottom), self.rhs.concat(ones)

    def split_coeffs(self, x: BitVec) -> tuple[BitVec, BitVec]:
        bits = x.to_array()
        return BitVec.from_bits(bits[: self.n_a]), BitVec.from_bits(bits[self.n_a :])

    def polynomial(self, a: BitVec, b: BitVec) -> Polynomial:
        terms = [t for t, c in zip(self.h_terms, a) if c] + [t for t, c in zip(self.g_terms, b) if c]
        return Polynomial.from_terms(self.m, terms)

    def inverse(self, b: BitVec) -> BitVec:
        """``s_{-1} = s_{m-1} + vg . b`` per coordinate."""
        return self.last ^ self.vg.matvec(b)


def window(s: BitSequence, j: int, m: int) -> BitVec:
    if j < 0 or m < 0 or j + m > len(s):
        raise IndexError(f"window [{j}, {j + m}) outside sequence of length {len(s)}")
    return BitVec.from_bits(s.array()[j : j + m])


def _evaluate(seq: np.ndarray, m: int, h_terms: Sequence[Monomial], g_terms: Sequence[Monomial]):
    """Per-coordinate blocks of H1, H2, rhs and the vh/vg rows for one (n, M) array."""
    n, length = seq.shape
    h1, h2, rhs, vh, vg = [], [], [], [], []
    for row in seq:
        win = sliding_window_view(row, m + 1)[: length - m]
        h1.append(eval_columns(win, h_terms))
        h2.append(eval_columns(win, g_terms))
        rhs.append(win[:, m])
        # Initial window with the unknown s_{-1} at position 0; h/g columns never read it
        # except through X0, which contributes the constant 1 of <vh, a>.
        init = np.concatenate([[0], row[: m - 1]])[None, :]
        vh.append(eval_columns(init, [t.without_x0() for t in h_terms]))
        vg.append(eval_columns(init, g_terms))
    return (np.vstack(h1), np.vstack(h2), np.concatenate(rhs), np.vstack(vh), np.vstack(vg))


def _system(s: Sequenceish, m: int, d, h_terms, g_terms, split=None, mset=None) -> HankelSystem:
    seq = as_rows(s)
    n, length = seq.shape
    if length <= m:
        raise ValueError(f"sequence length {length} must exceed the order {m}")
    h1, h2, rhs, vh, vg = _evaluate(seq, m, h_terms, g_terms)
    return HankelSystem(
        h1=BitMatrix.from_array(h1),
        h2=BitMatrix.from_array(h2),
        rhs=BitVec.from_bits(rhs),
        vh=BitMatrix.from_array(vh),
        vg=BitMatrix.from_array(vg),
        m=m,
        d=d,
        n=n,
        length=length,
        h_terms=tuple(h_terms),
        g_terms=tuple(g_terms),
        last=BitVec.from_bits(seq[:, m - 1]),
        split=split,
        mset=mset,
    )


def build_system(s: BitSequence, m: int, d: int, allow_constant: bool = False) -> HankelSystem:
    split = enumerate_basis(m, d, allow_constant)
    return _system(s, m, d, split.h_terms, split.g_terms, split=split)


def build_system_vector(vs: VectorSequence, m: int, d: int, allow_constant: bool = False) -> HankelSystem:
    split = enumerate_basis(m, d, allow_constant)
    return _system(vs, m, d, split.h_terms, split.g_terms, split=split)


def build_system_custom(s: Sequenceish, mset: MonomialSet) -> HankelSystem:
    d = max(mo.degree for mo in mset.monomials)
    return _system(s, mset.order, d, mset.h_terms, mset.g_terms, mset=mset)


def build_any(s: Sequenceish, m: int, d: int, allow_constant: bool = False) -> HankelSystem:
    """Scalar or stacked vector system, whichever ``s`` is."""
    split = enumerate_basis(m, d, allow_constant)
    return _system(s, m, d, split.h_terms, split.g_terms, split=split)


def _distinct_windows(seq: np.ndarray, m: int) -> np.ndarray:
    # Rows with equal (m+1)-windows are identical equations; keep the first of each.
    n, length = seq.shape
    wins = np.vstack([sliding_window_view(row, m + 1)[: length - m] for row in seq])
    _, first = np.unique(_pack(wins), axis=0, return_index=True)
    return wins[np.sort(first)]


def reduced_rows(seq: np.ndarray, m: int, h_terms, g_terms) -> tuple[np.ndarray, np.ndarray]:
    """Deduplicated ``[H1 | H2]`` (uint8) and rhs for the stacked system of order ``m``."""
    wins = _distinct_windows(seq, m)
    mat = np.hstack([eval_columns(wins, h_terms), eval_columns(wins, g_terms)])
    return mat, wins[:, m].copy()


def reduced_system(s: Sequenceish, m: int, d: int, allow_constant: bool = False) -> HankelSystem:
    """Like ``build_any`` but with duplicate equations removed; same solution set, fewer rows."""
    seq = as_rows(s)
    n, length = seq.shape
    if length <= m:
        raise ValueError(f"sequence length {length} must exceed the order {m}")
    split = enumerate_basis(m, d, allow_constant)
    wins = _distinct_windows(seq, m)
    init = np.concatenate([np.zeros((n, 1), np.uint8), seq[:, : m - 1]], axis=1)
    return HankelSystem(
        h1=BitMatrix.from_array(eval_columns(wins, split.h_terms)),
        h2=BitMatrix.from_array(eval_columns(wins, split.g_terms)),
        rhs=BitVec.from_bits(wins[:, m]),
        vh=BitMatrix.from_array(eval_columns(init, [t.without_x0() for t in split.h_terms])),
        vg=BitMatrix.from_array(eval_columns(init, split.g_terms)),
        m=m,
        d=d,
        n=n,
        length=length,
        h_terms=tuple(split.h_terms),
        g_terms=tuple(split.g_terms),
        last=BitVec.from_bits(seq[:, m - 1]),
        split=split,
    )
