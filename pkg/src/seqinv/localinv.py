"""Local inversion of black-box maps F: F2^n -> F2^n through the iterate sequence y, F(y), F(F(y)), ...

States are n-bit vectors; coordinate i of the iterate sequence is bit i of each
state.  Internally a state is also an integer with bit i = coordinate i.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .complexity import PciReport, pci
from .gf2 import BitVec
from .golomb import FsrSpec
from .hankel import VectorSequence

PERMUTATION_CAP = 24
TABLE_DTYPE = np.dtype("<u4")


def _to_int(bits) -> int:
    return sum(int(b) << i for i, b in enumerate(bits))


def _to_bits(x: int, n: int) -> list[int]:
    return [(x >> i) & 1 for i in range(n)]


class BlackBoxMap:
    """A total deterministic map on n-bit states, evaluated through ``apply_int``."""

    def __init__(self, n: int, apply_int: Callable[[int], int], label: str = "map"):
        if n < 1:
            raise ValueError("dimension must be >= 1")
        self.n = n
        self._f = apply_int
        self.label = label
        self.calls = 0

    def apply_int(self, x: int) -> int:
        self.calls += 1
        return self._f(x)

    def apply(self, state) -> BitVec:
        bits = state.to_array() if isinstance(state, BitVec) else state
        if len(bits) != self.n:
            raise ValueError(f"state has {len(bits)} bits, map has dimension {self.n}")
        return BitVec.from_bits(_to_bits(self.apply_int(_to_int(bits)), self.n))

    def __repr__(self) -> str:
        return f"BlackBoxMap(n={self.n}, {self.label})"


@dataclass
class LocalInverseResult:
    candidate: Optional[BitVec]
    verified: bool
    pci_used: PciReport
    length: int


def make_fsr_map(spec: FsrSpec) -> BlackBoxMap:
    m = spec.m
    f = spec.f

    def step(x: int) -> int:
        return (x >> 1) | (f.evaluate(_to_bits(x, m)) << (m - 1))

    return BlackBoxMap(m, step, f"fsr:{spec}")


def make_table_map(table) -> BlackBoxMap:
    tab = np.asarray(table, dtype=np.int64).ravel()
    size = tab.size
    n = size.bit_length() - 1
    if size < 2 or size != 1 << n:
        raise ValueError(f"table must have 2^n entries, got {size}")
    if tab.min() < 0 or tab.max() >= size:
        raise ValueError("table entries must lie in [0, 2^n)")
    values = tab.tolist()
    return BlackBoxMap(n, values.__getitem__, f"table[{size}]")


def make_permutation_map(seed: int, n: int) -> BlackBoxMap:
    if not 1 <= n <= PERMUTATION_CAP:
        raise ValueError(f"permutation maps need 1 <= n <= {PERMUTATION_CAP}")
    perm = np.random.default_rng(seed).permutation(1 << n)
    m = make_table_map(perm)
    m.label = f"perm:seed={seed};n={n}"
    return m


def load_table(path: str | Path) -> BlackBoxMap:
    """Binary file of 2^n states, each a little-endian uint32."""
    raw = Path(path).read_bytes()
    if len(raw) % TABLE_DTYPE.itemsize:
        raise ValueError("table file size is not a multiple of 4 bytes")
    return make_table_map(np.frombuffer(raw, dtype=TABLE_DTYPE))


def parse_map_spec(text: str) -> BlackBoxMap:
    """``fsr:m=<k>;g=<ANF>``, ``perm:seed=<u64>;n=<k>`` or ``table:<path>``."""
    kind, _, rest = text.partition(":")
    kind = kind.strip()
    if kind == "fsr":
        return make_fsr_map(FsrSpec.parse(rest))
    if kind == "perm":
        fields = {}
        for part in rest.split(";"):
            k, eq, v = part.partition("=")
            if not eq:
                raise ValueError(f"malformed field {part!r} in {text!r}")
            fields[k.strip()] = int(v.strip())
        if set(fields) != {"seed", "n"}:
            raise ValueError(f"expected 'perm:seed=<u64>;n=<k>', got {text!r}")
        return make_permutation_map(fields["seed"], fields["n"])
    if kind == "table":
        return load_table(rest.strip())
    raise ValueError(f"unknown map kind {kind!r}")


def iterate_map(f: BlackBoxMap, y, m_steps: int) -> VectorSequence:
    """The first ``m_steps`` elements of y, F(y), F(F(y)), ... as a vector sequence."""
    if m_steps < 2:
        raise ValueError("need at least two iterates")
    bits = y.to_array() if isinstance(y, BitVec) else list(y)
    if len(bits) != f.n:
        raise ValueError(f"point has {len(bits)} bits, map has dimension {f.n}")
    x = _to_int(bits)
    states = [x]
    for _ in range(m_steps - 1):
        x = f.apply_int(x)
        states.append(x)
    arr = (np.asarray(states, dtype=np.int64)[None, :] >> np.arange(f.n)[:, None]) & 1
    return VectorSequence.from_array(arr)


def local_invert(f: BlackBoxMap, y, m_steps: int, d: int = 1, allow_constant: bool = False) -> LocalInverseResult:
    """Invert the iterate sequence of ``y`` and check the candidate with one application of ``f``."""
    seq = iterate_map(f, y, m_steps)
    rep = pci(seq, d, allow_constant)
    if rep.solution is None:
        return LocalInverseResult(None, False, rep, m_steps)
    cand = rep.solution.inverse
    target = y if isinstance(y, BitVec) else BitVec.from_bits(y)
    return LocalInverseResult(cand, f.apply(cand) == target, rep, m_steps)


def predecessors(f: BlackBoxMap, y) -> list[BitVec]:
    """All x with F(x) = y, by exhaustive search over 2^n states."""
    target = _to_int(y.to_array() if isinstance(y, BitVec) else y)
    return [BitVec.from_bits(_to_bits(x, f.n)) for x in range(1 << f.n) if f.apply_int(x) == target]
