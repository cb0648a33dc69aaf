"""Monomials, ANF polynomials and the h/g basis split of P(m, d).

A feedback polynomial in ``m`` variables is written ``f = X0*h(X1..) + g(X1..)``.
``enumerate_basis`` returns the monomials available to ``h`` and ``g``; the
columns of a Hankel matrix are ``X0*mu`` for ``mu`` in the h-basis followed by
the g-basis monomials.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .gf2 import BitVec


@dataclass(frozen=True, order=False)
class Monomial:
    """Product of distinct variables; ``vars == ()`` is the constant 1."""

    vars: tuple[int, ...] = ()

    def __post_init__(self):
        v = tuple(int(i) for i in self.vars)
        if any(i < 0 for i in v):
            raise ValueError("negative variable index")
        if any(a >= b for a, b in zip(v, v[1:])):
            raise ValueError(f"indices must be strictly ascending: {v}")
        object.__setattr__(self, "vars", v)

    @classmethod
    def of(cls, *idx: int) -> "Monomial":
        return cls(tuple(sorted(set(idx))))

    @property
    def degree(self) -> int:
        return len(self.vars)

    @property
    def max_index(self) -> int:
        return self.vars[-1] if self.vars else -1

    def key(self) -> tuple:
        """Degree first, then lexicographic on the index tuple."""
        return (len(self.vars), self.vars)

    def __lt__(self, other: "Monomial") -> bool:
        return self.key() < other.key()

    def times_x0(self) -> "Monomial":
        if self.vars and self.vars[0] == 0:
            raise ValueError("monomial already contains X0")
        return Monomial((0,) + self.vars)

    def without_x0(self) -> "Monomial":
        if not self.vars or self.vars[0] != 0:
            raise ValueError("monomial is not a multiple of X0")
        return Monomial(self.vars[1:])

    def shifted(self, k: int) -> "Monomial":
        return Monomial(tuple(i + k for i in self.vars))

    def __str__(self) -> str:
        return "*".join(f"x{i}" for i in self.vars) if self.vars else "1"


ONE = Monomial(())


def term_key(mono: Monomial) -> tuple:
    # X0-multiples first (the h part of f = X0*h + g), then degree-lex inside each part.
    has_x0 = bool(mono.vars) and mono.vars[0] == 0
    return (0 if has_x0 else 1, len(mono.vars), mono.vars)


@dataclass(frozen=True)
class Polynomial:
    """A polynomial over GF(2) in ``order`` variables, stored as its support."""

    order: int
    terms: tuple[Monomial, ...] = ()

    def __post_init__(self):
        for t in self.terms:
            if t.max_index >= self.order:
                raise ValueError(f"monomial {t} uses a variable outside X0..X{self.order - 1}")
        if len(set(self.terms)) != len(self.terms):
            raise ValueError("duplicate terms")
        object.__setattr__(self, "terms", tuple(sorted(self.terms, key=term_key)))

    @classmethod
    def from_terms(cls, order: int, terms: Iterable[Monomial]) -> "Polynomial":
        """Build from a multiset of terms; repeated terms cancel in pairs."""
        support: set[Monomial] = set()
        for t in terms:
            support ^= {t}
        return cls(order, tuple(support))

    @property
    def weakly_homogeneous(self) -> bool:
        return ONE not in self.terms

    @property
    def degree(self) -> int:
        return max((t.degree for t in self.terms), default=0)

    def evaluate(self, window: Sequence[int]) -> int:
        w = [int(b) & 1 for b in window]
        if len(w) < self.order:
            raise ValueError("window shorter than polynomial order")
        return sum(all(w[i] for i in t.vars) for t in self.terms) & 1

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial.from_terms(max(self.order, other.order), self.terms + other.terms)

    def __str__(self) -> str:
        return " + ".join(str(t) for t in self.terms) if self.terms else "0"


@dataclass(frozen=True)
class BasisSplit:
    """Monomials available to h (degree <= d-1) and g (degree 1..d) over X1..X_{m-1}."""

    m: int
    d: int
    allow_constant: bool
    h_basis: tuple[Monomial, ...] = field(repr=False)
    g_basis: tuple[Monomial, ...] = field(repr=False)

    @property
    def n_c(self) -> int:
        return len(self.h_basis) + len(self.g_basis)

    @property
    def h_terms(self) -> list[Monomial]:
        """Column monomials of H1: X0 times each h-basis monomial."""
        return [mu.times_x0() for mu in self.h_basis]

    @property
    def g_terms(self) -> list[Monomial]:
        return list(self.g_basis)

    def polynomial(self, a: BitVec, b: BitVec) -> Polynomial:
        if a.length != len(self.h_basis) or b.length != len(self.g_basis):
            raise ValueError("coefficient lengths do not match the basis")
        terms = [t for t, c in zip(self.h_terms, a) if c] + [t for t, c in zip(self.g_terms, b) if c]
        return Polynomial.from_terms(self.m, terms)


def _monomials(variables: Sequence[int], lo: int, hi: int) -> list[Monomial]:
    out = []
    for k in range(lo, hi + 1):
        out.extend(Monomial(c) for c in combinations(variables, k))
    return out


def enumerate_basis(m: int, d: int, allow_constant: bool = False) -> BasisSplit:
    if not 1 <= d <= m:
        raise ValueError(f"need 1 <= d <= m, got m={m}, d={d}")
    rest = list(range(1, m))
    h = _monomials(rest, 0, d - 1)
    g = _monomials(rest, 0 if allow_constant else 1, d)
    return BasisSplit(m, d, allow_constant, tuple(h), tuple(g))


def n_c(m: int, d: int, allow_constant: bool = False) -> int:
    """Column count of H(m, d): sum_{j=1..d} C(m, j), plus one for a constant."""
    return sum(comb(m, j) for j in range(1, d + 1)) + int(allow_constant)


def eval_monomial(mono: Monomial, window: BitVec | Sequence[int]) -> int:
    w = list(window)
    if mono.max_index >= len(w):
        raise IndexError(f"{mono} needs a window of length {mono.max_index + 1}, got {len(w)}")
    return int(all(w[i] for i in mono.vars))


def eval_poly(p: Polynomial, coeffs: BitVec, window: BitVec | Sequence[int]) -> int:
    """XOR of the terms of ``p`` selected by ``coeffs``."""
    w = list(window)
    if coeffs.length != len(p.terms):
        raise ValueError("coefficient vector does not match the support size")
    if len(w) != p.order:
        raise ValueError(f"window length {len(w)} != order {p.order}")
    return sum(eval_monomial(t, w) for t, c in zip(p.terms, coeffs) if c) & 1


def eval_columns(windows: np.ndarray, monomials: Sequence[Monomial]) -> np.ndarray:
    """Evaluate monomials on each row of a (rows, width) 0/1 array."""
    windows = np.asarray(windows, dtype=np.uint8)
    out = np.ones((windows.shape[0], len(monomials)), dtype=np.uint8)
    for c, mono in enumerate(monomials):
        for i in mono.vars:
            out[:, c] &= windows[:, i]
    return out


_VAR = re.compile(r"^x(\d+)$")


def parse_anf(text: str, m: int) -> tuple[Polynomial, BitVec]:
    """Parse ``"x0*x2 + x1*x2"``; returns the polynomial and an all-ones coefficient vector."""
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial")
    terms = []
    if text != "0":
        for raw in text.split("+"):
            tok = raw.strip()
            if tok == "1":
                terms.append(ONE)
                continue
            idx = []
            for factor in tok.split("*"):
                match = _VAR.match(factor.strip())
                if not match:
                    raise ValueError(f"malformed token {factor.strip()!r} in {text!r}")
                i = int(match.group(1))
                if i >= m:
                    raise ValueError(f"variable x{i} out of range for order {m}")
                idx.append(i)
            terms.append(Monomial.of(*idx))
    p = Polynomial.from_terms(m, terms)
    return p, BitVec.from_bits([1] * len(p.terms))


def anf_to_string(p: Polynomial, coeffs: BitVec | None = None) -> str:
    if coeffs is None:
        return str(p)
    if coeffs.length != len(p.terms):
        raise ValueError("coefficient vector does not match the support size")
    chosen = [t for t, c in zip(p.terms, coeffs) if c]
    return " + ".join(str(t) for t in chosen) if chosen else "0"
