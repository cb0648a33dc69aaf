"""Non-singular feedback shift registers in Golomb form ``f = X0 + g(X1..X_{m-1})``."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import gf2
from .gf2 import BitVec
from .hankel import BitSequence, VectorSequence, build_any
from .monomial import Monomial, Polynomial, enumerate_basis, eval_columns, parse_anf

EXHAUSTIVE_CAP = 20
DEFAULT_SPEC_LIMIT = 1024


@dataclass(frozen=True)
class FsrSpec:
    m: int
    g: Polynomial

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("FSR order must be >= 1")
        if self.g.order > self.m:
            raise ValueError("g uses variables beyond the register")
        if any(t.vars and t.vars[0] == 0 for t in self.g.terms):
            raise ValueError("g must not involve X0")
        if self.g.order != self.m:
            object.__setattr__(self, "g", Polynomial(self.m, self.g.terms))

    @property
    def f(self) -> Polynomial:
        return Polynomial.from_terms(self.m, (Monomial((0,)),) + self.g.terms)

    @classmethod
    def parse(cls, text: str) -> "FsrSpec":
        """``"m=3; g=x1 + x2 + x1*x2"``."""
        fields = dict(_kv(text))
        if set(fields) != {"m", "g"}:
            raise ValueError(f"expected 'm=<k>; g=<ANF>', got {text!r}")
        m = int(fields["m"])
        g, _ = parse_anf(fields["g"], m)
        return cls(m, g)

    def __str__(self) -> str:
        return f"m={self.m}; g={self.g}"


def _kv(text: str):
    for part in re.split(r"[;,]\s*(?=[a-z_]+\s*=)", text.strip()):
        if not part.strip():
            continue
        if "=" not in part:
            raise ValueError(f"malformed field {part!r}")
        k, v = part.split("=", 1)
        yield k.strip(), v.strip()


@dataclass(frozen=True)
class GolombMember:
    spec: FsrSpec
    b: BitVec
    inverse: BitVec  # s_{-1} per coordinate


def _state_bits(state) -> list[int]:
    if isinstance(state, BitVec):
        return state.to_array().tolist()
    return [int(x) & 1 for x in state]


def fsr_step(spec: FsrSpec, state) -> BitVec:
    bits = _state_bits(state)
    if len(bits) != spec.m:
        raise ValueError(f"state has {len(bits)} bits, register has {spec.m}")
    return BitVec.from_bits(bits[1:] + [spec.f.evaluate(bits)])


def run_recurrence(f: Polynomial, seed, length: int) -> BitSequence:
    """Output of the FSR with feedback ``f`` (any form) from ``seed``."""
    bits = _state_bits(seed)
    m = f.order
    if len(bits) != m:
        raise ValueError(f"seed has {len(bits)} bits, order is {m}")
    if length < m:
        raise ValueError("length must be at least the order")
    out = bits[:]
    for j in range(length - m):
        out.append(f.evaluate(out[j : j + m]))
    return BitSequence.from_bits(out[:length])


def generate(spec: FsrSpec, seed_state, length: int) -> BitSequence:
    return run_recurrence(spec.f, seed_state, length)


def solve_golomb(
    s: Union[BitSequence, VectorSequence],
    m: int,
    d: int,
    allow_constant: bool = True,
    limit: int = DEFAULT_SPEC_LIMIT,
) -> list[GolombMember]:
    """Golomb-form associated polynomials of ``s`` at order ``m``, degree ``d``, with inverses.

    With h fixed to 1 the recurrences become ``H2 b = s_{m+j} + s_j``.  At most
    ``limit`` members are returned, in kernel-combination order.
    """
    sys = build_any(s, m, d, allow_constant)
    h2 = sys.h2
    x0_col = sys.h1.column(0)  # the bare X0 column: s_j
    rhs = sys.rhs ^ x0_col
    part = gf2.solve(h2, rhs)
    if part is None:
        return []
    kernel = gf2.kernel_basis(h2)
    out = []
    count = min(limit, 1 << min(len(kernel), 62))
    for k in range(count):
        b = part
        for i, kv in enumerate(kernel[:62]):
            if (k >> i) & 1:
                b = b ^ kv
        g = Polynomial.from_terms(m, [t for t, c in zip(sys.g_terms, b) if c])
        out.append(GolombMember(FsrSpec(m, g), b, sys.inverse(b)))
    return out


def _all_states(m: int) -> np.ndarray:
    idx = np.arange(1 << m, dtype=np.int64)
    return ((idx[:, None] >> np.arange(m)) & 1).astype(np.uint8)


def is_nonsingular_fsr(f: Union[Polynomial, FsrSpec], m: Optional[int] = None, cap: int = EXHAUSTIVE_CAP) -> bool:
    """Exhaustively check that the state map of ``f`` is a bijection on {0,1}^m."""
    poly = f.f if isinstance(f, FsrSpec) else f
    m = poly.order if m is None else m
    if m > cap:
        raise ValueError(f"exhaustive check over 2^{m} states exceeds the cap 2^{cap}")
    if poly.order > m:
        raise ValueError("polynomial order exceeds the register length")
    states = _all_states(m)
    vals = eval_columns(states, list(poly.terms)).sum(axis=1, dtype=np.int64) & 1
    # image state (x1..x_{m-1}, f) packed with x_{k+1} at bit k
    idx = np.arange(1 << m, dtype=np.int64)
    image = (idx >> 1) | (vals << (m - 1))
    return np.unique(image).size == (1 << m)


def random_g(rng: np.random.Generator, m: int, d: int, allow_constant: bool = False, density: float = 0.5) -> Polynomial:
    """Random g over X1..X_{m-1} with terms of degree 1..d (plus an optional constant)."""
    basis = enumerate_basis(m, min(d, m), allow_constant).g_terms
    pick = rng.random(len(basis)) < density
    return Polynomial.from_terms(m, [t for t, p in zip(basis, pick) if p])
