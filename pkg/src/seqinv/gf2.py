"""Bit-packed vectors and matrices over GF(2).

Rows are stored as little-endian arrays of 64-bit words: bit ``i`` of a row
lives in word ``i // 64`` at position ``i % 64``.  Pad bits beyond the logical
length are always zero.  Elimination runs in a numba kernel that XORs whole
words at a time.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np
from numba import njit

WORD = 64


def _nwords(n: int) -> int:
    return (n + WORD - 1) // WORD


def _pack(bits: np.ndarray) -> np.ndarray:
    """Pack a 2-D 0/1 array into (rows, words) uint64."""
    bits = np.asarray(bits, dtype=np.uint8) & 1
    r, c = bits.shape
    w = _nwords(c)
    padded = np.zeros((r, w * WORD), dtype=np.uint8)
    padded[:, :c] = bits
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64, copy=True)


def _unpack(words: np.ndarray, ncols: int) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype="<u8")
    if words.size == 0:
        return np.zeros((words.shape[0], ncols), dtype=np.uint8)
    as_bytes = words.view(np.uint8).reshape(words.shape[0], -1)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :ncols]


def _parity(x: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(x).sum(axis=-1) & 1).astype(np.uint8)


class BitVec:
    """Immutable packed bit vector."""

    __slots__ = ("words", "length")

    def __init__(self, words: np.ndarray, length: int):
        if length < 0:
            raise ValueError("negative length")
        words = np.asarray(words, dtype=np.uint64)
        if words.shape != (_nwords(length),):
            raise ValueError("word array does not match length")
        words = words.copy()
        if length % WORD and words.size:
            words[-1] &= np.uint64((1 << (length % WORD)) - 1)
        words.flags.writeable = False
        self.words = words
        self.length = length

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVec":
        arr = np.fromiter((int(b) & 1 for b in bits), dtype=np.uint8)
        return cls(_pack(arr[None, :])[0], arr.size)

    @classmethod
    def from_str(cls, text: str) -> "BitVec":
        text = "".join(text.split())
        if any(ch not in "01" for ch in text):
            raise ValueError(f"not a bit string: {text!r}")
        return cls.from_bits(ch == "1" for ch in text)

    @classmethod
    def zeros(cls, length: int) -> "BitVec":
        return cls(np.zeros(_nwords(length), dtype=np.uint64), length)

    @classmethod
    def unit(cls, length: int, i: int) -> "BitVec":
        bits = np.zeros(length, dtype=np.uint8)
        bits[i] = 1
        return cls.from_bits(bits)

    def to_array(self) -> np.ndarray:
        return _unpack(self.words[None, :], self.length)[0]

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError(i)
        return int(self.words[i // WORD] >> np.uint64(i % WORD)) & 1

    def __iter__(self):
        return iter(int(b) for b in self.to_array())

    def __xor__(self, other: "BitVec") -> "BitVec":
        if self.length != other.length:
            raise ValueError("length mismatch")
        return BitVec(self.words ^ other.words, self.length)

    def dot(self, other: "BitVec") -> int:
        if self.length != other.length:
            raise ValueError("length mismatch")
        return int(_parity(self.words & other.words))

    def weight(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def any(self) -> bool:
        return bool(self.words.any())

    def concat(self, other: "BitVec") -> "BitVec":
        return BitVec.from_bits(np.concatenate([self.to_array(), other.to_array()]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitVec):
            return NotImplemented
        return self.length == other.length and bool(np.array_equal(self.words, other.words))

    def __hash__(self) -> int:
        return hash((self.length, self.words.tobytes()))

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self.to_array())

    def __repr__(self) -> str:
        return f"BitVec('{self}')"


class BitMatrix:
    """Immutable packed matrix; row ``i`` is ``words[i]``."""

    __slots__ = ("words", "rows", "cols")

    def __init__(self, words: np.ndarray, rows: int, cols: int):
        words = np.asarray(words, dtype=np.uint64).reshape(rows, _nwords(cols)).copy()
        if cols % WORD and words.size:
            words[:, -1] &= np.uint64((1 << (cols % WORD)) - 1)
        words.flags.writeable = False
        self.words = words
        self.rows = rows
        self.cols = cols

    @classmethod
    def from_array(cls, bits) -> "BitMatrix":
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError("expected a 2-D array")
        return cls(_pack(arr), arr.shape[0], arr.shape[1])

    @classmethod
    def from_rows(cls, rows: Sequence[BitVec], cols: Optional[int] = None) -> "BitMatrix":
        if not rows:
            if cols is None:
                raise ValueError("cannot infer width of an empty row list")
            return cls.zeros(0, cols)
        width = rows[0].length
        if cols is not None and cols != width or any(r.length != width for r in rows):
            raise ValueError("rows have inconsistent lengths")
        return cls(np.stack([r.words for r in rows]), len(rows), width)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, _nwords(cols)), dtype=np.uint64), rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_array(np.eye(n, dtype=np.uint8))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> BitVec:
        return BitVec(self.words[i], self.cols)

    def row_list(self) -> list[BitVec]:
        return [self.row(i) for i in range(self.rows)]

    def to_array(self) -> np.ndarray:
        return _unpack(self.words, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return int(self.words[i, j // WORD] >> np.uint64(j % WORD)) & 1

    def column(self, j: int) -> BitVec:
        return BitVec.from_bits(self.to_array()[:, j])

    def select_columns(self, cols: Sequence[int]) -> "BitMatrix":
        return BitMatrix.from_array(self.to_array()[:, list(cols)])

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_array(self.to_array().T)

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return BitMatrix.from_array(np.hstack([self.to_array(), other.to_array()]))

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return BitMatrix(np.vstack([self.words, other.words]), self.rows + other.rows, self.cols)

    def with_column(self, v: BitVec) -> "BitMatrix":
        """Append ``v`` as an extra right-hand column."""
        if v.length != self.rows:
            raise ValueError("column length mismatch")
        return self.hstack(BitMatrix.from_array(v.to_array()[:, None]))

    def matvec(self, v: BitVec) -> BitVec:
        if v.length != self.cols:
            raise ValueError("dimension mismatch")
        if self.rows == 0:
            return BitVec.zeros(0)
        return BitVec.from_bits(_parity(self.words & v.words[None, :]))

    def __matmul__(self, other):
        if isinstance(other, BitVec):
            return self.matvec(other)
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        prod = self.to_array().astype(np.int64) @ other.to_array().astype(np.int64)
        return BitMatrix.from_array(prod & 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.words, other.words))

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.words.tobytes()))

    def __repr__(self) -> str:
        body = "\n ".join(str(r) for r in self.row_list())
        return f"BitMatrix({self.rows}x{self.cols}\n [{body}])"


@njit(cache=True)
def _eliminate(a, ncols, t, full):
    # In-place Gauss-Jordan (full=True) or forward elimination on packed rows.
    # t receives the same row operations; pass a (rows, 0) array to skip it.
    nrows = a.shape[0]
    nw = a.shape[1]
    tw = t.shape[1]
    pivots = np.empty(min(nrows, ncols), np.int64)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        w = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        p = -1
        for i in range(r, nrows):
            if a[i, w] & bit:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for k in range(nw):
                tmp = a[r, k]
                a[r, k] = a[p, k]
                a[p, k] = tmp
            for k in range(tw):
                tmp = t[r, k]
                t[r, k] = t[p, k]
                t[p, k] = tmp
        start = 0 if full else r + 1
        for i in range(start, nrows):
            if i != r and (a[i, w] & bit):
                for k in range(w, nw):
                    a[i, k] ^= a[r, k]
                for k in range(tw):
                    t[i, k] ^= t[r, k]
        pivots[r] = c
        r += 1
    return pivots[:r]


def _pivots(words: np.ndarray, ncols: int, full: bool = False) -> tuple[np.ndarray, np.ndarray]:
    work = np.array(words, dtype=np.uint64, copy=True, order="C")
    if work.ndim != 2:
        work = work.reshape(0, _nwords(ncols))
    piv = _eliminate(work, ncols, np.zeros((work.shape[0], 0), dtype=np.uint64), full)
    return work, piv


def rank(a: BitMatrix) -> int:
    """Row rank over GF(2)."""
    if a.rows == 0 or a.cols == 0:
        return 0
    return len(_pivots(a.words, a.cols)[1])


def rank_words(words: np.ndarray, ncols: int) -> int:
    """Rank of a raw packed (rows, words) array; skips BitMatrix construction."""
    if words.shape[0] == 0 or ncols == 0:
        return 0
    return len(_pivots(words, ncols)[1])


def rref_with_transform(a: BitMatrix) -> tuple[BitMatrix, BitMatrix, list[int]]:
    """Reduced row-echelon form ``R``, invertible ``T`` with ``T @ a == R``, pivot columns."""
    work = np.array(a.words, dtype=np.uint64, copy=True, order="C")
    t = np.ascontiguousarray(BitMatrix.identity(a.rows).words.copy())
    piv = _eliminate(work, a.cols, t, True) if a.rows else np.zeros(0, np.int64)
    return BitMatrix(work, a.rows, a.cols), BitMatrix(t, a.rows, a.rows), [int(p) for p in piv]


def _rref(a: BitMatrix) -> tuple[np.ndarray, list[int]]:
    if a.rows == 0:
        return a.words, []
    work, piv = _pivots(a.words, a.cols, full=True)
    return work, [int(p) for p in piv]


def solve(a: BitMatrix, rhs: BitVec) -> Optional[BitVec]:
    """Canonical solution of ``a x = rhs`` (free variables zero), or None if inconsistent."""
    if rhs.length != a.rows:
        raise ValueError(f"rhs has length {rhs.length}, matrix has {a.rows} rows")
    aug = a.with_column(rhs)
    work, piv = _rref(aug)
    if piv and piv[-1] == a.cols:
        return None
    x = np.zeros(a.cols, dtype=np.uint8)
    if piv:
        last = _unpack(work[: len(piv)], aug.cols)[:, a.cols]
        x[piv] = last
    return BitVec.from_bits(x)


def is_consistent(a: BitMatrix, rhs: BitVec) -> bool:
    if rhs.length != a.rows:
        raise ValueError("dimension mismatch")
    return rank(a.with_column(rhs)) == rank(a)


def kernel_basis(a: BitMatrix) -> list[BitVec]:
    """Basis of the null space, one vector per free column in ascending order."""
    work, piv = _rref(a)
    free = [c for c in range(a.cols) if c not in set(piv)]
    if not free:
        return []
    basis = np.zeros((len(free), a.cols), dtype=np.uint8)
    basis[np.arange(len(free)), free] = 1
    if piv:
        reduced = _unpack(work[: len(piv)], a.cols)
        basis[:, piv] = reduced[:, free].T
    return [BitVec.from_bits(row) for row in basis]


def in_row_space(v: BitVec, a: BitMatrix) -> bool:
    return rank(a.vstack(BitMatrix.from_rows([v]))) == rank(a)
