"""Associated polynomials and inverses of a sequence.

A coefficient pair ``(a, b)`` defines ``f = X0*h_a + g_b``.  It is associated to
the sequence when it satisfies the recurrence rows ``H1 a + H2 b = s``; it
gives a unique inverse when additionally ``<vh, a> = 1`` for every coordinate,
in which case ``s_{-1} = s_{m-1} + <vg, b>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import gf2
from .gf2 import BitMatrix, BitVec
from .hankel import HankelSystem
from .monomial import Polynomial

DEFAULT_FAMILY_LIMIT = 1 << 20
COUNT_CAP_BITS = 63


class NoInverseError(ValueError):
    """Raised by checks that presuppose an invertible system."""


@dataclass(frozen=True)
class AssociatedFamily:
    system: HankelSystem = field(repr=False)
    particular: Optional[BitVec]
    kernel: tuple[BitVec, ...]
    constrained: bool

    @property
    def dimension(self) -> int:
        return len(self.kernel)

    @property
    def exists(self) -> bool:
        return self.particular is not None


@dataclass(frozen=True)
class CountBounds:
    lower: int
    upper: int
    lower_log2: int
    upper_log2: int
    saturated: bool
    rr_rank: int


@dataclass(frozen=True)
class InversionSolution:
    inverse: BitVec
    a: BitVec
    b: BitVec
    polynomial: Polynomial
    family: AssociatedFamily = field(repr=False)
    common_inverse: bool
    bounds: CountBounds

    @property
    def count_lower(self) -> int:
        return self.bounds.lower

    @property
    def count_upper(self) -> int:
        return self.bounds.upper

    @property
    def family_log2(self) -> int:
        """log2 of the exact number of invertible associated polynomials."""
        return self.family.dimension


@dataclass(frozen=True)
class ProjectionDecomposition:
    h11: BitMatrix
    h12: BitMatrix
    h22: BitMatrix
    s1: BitVec
    s2: BitVec
    transform: BitMatrix


@dataclass(frozen=True)
class FamilyMember:
    a: BitVec
    b: BitVec
    inverse: Optional[BitVec]  # None when some coordinate has h(S) = 0


def solve_associated(sys: HankelSystem) -> AssociatedFamily:
    """All solutions of the recurrence rows alone."""
    mat = sys.matrix()
    return AssociatedFamily(sys, gf2.solve(mat, sys.rhs), tuple(gf2.kernel_basis(mat)), False)


def solve_constrained(sys: HankelSystem) -> AssociatedFamily:
    """All solutions of the recurrence rows plus ``<vh, a> = 1`` per coordinate."""
    mat, rhs = sys.augmented()
    return AssociatedFamily(sys, gf2.solve(mat, rhs), tuple(gf2.kernel_basis(mat)), True)


def status(sys: HankelSystem) -> str:
    """``ok``, ``no_invertible_polynomial`` (RRs solvable, h(S)=1 impossible) or ``no_associated_polynomial``."""
    mat, rhs = sys.augmented()
    if gf2.is_consistent(mat, rhs):
        return "ok"
    if gf2.is_consistent(sys.matrix(), sys.rhs):
        return "no_invertible_polynomial"
    return "no_associated_polynomial"


def solve_invertible(sys: HankelSystem) -> Optional[InversionSolution]:
    fam = solve_constrained(sys)
    if fam.particular is None:
        return None
    a, b = sys.split_coeffs(fam.particular)
    return InversionSolution(
        inverse=sys.inverse(b),
        a=a,
        b=b,
        polynomial=sys.polynomial(a, b),
        family=fam,
        common_inverse=_common_inverse(sys, fam),
        bounds=count_bounds(sys),
    )


def _common_inverse(sys: HankelSystem, fam: AssociatedFamily) -> bool:
    # The inverse depends on b only through vg.b; it is common iff vg kills every kernel direction.
    for x in fam.kernel:
        _, kb = sys.split_coeffs(x)
        if sys.vg.matvec(kb).any():
            return False
    return True


def project(sys: HankelSystem) -> ProjectionDecomposition:
    """Eliminate the a-columns of the augmented system, leaving ``h22 b = s2``."""
    mat, rhs = sys.augmented()
    a_part = mat.select_columns(range(sys.n_a)) if sys.n_a else BitMatrix.zeros(mat.rows, 0)
    _, transform, piv = gf2.rref_with_transform(a_part)
    reduced = transform @ mat
    s = transform @ rhs
    r = len(piv)
    full = reduced.to_array()
    bits = s.to_array()
    return ProjectionDecomposition(
        h11=BitMatrix.from_array(full[:r, : sys.n_a]),
        h12=BitMatrix.from_array(full[:r, sys.n_a :]),
        h22=BitMatrix.from_array(full[r:, sys.n_a :]),
        s1=BitVec.from_bits(bits[:r]),
        s2=BitVec.from_bits(bits[r:]),
        transform=transform,
    )


def inverse_exists(sys: HankelSystem) -> bool:
    proj = project(sys)
    return gf2.is_consistent(proj.h22, proj.s2)


def common_inverse_check(sys: HankelSystem) -> bool:
    proj = project(sys)
    if not gf2.is_consistent(proj.h22, proj.s2):
        raise NoInverseError("no associated polynomial with a unique inverse exists")
    return gf2.rank(proj.h22.vstack(sys.vg)) == gf2.rank(proj.h22)


def _saturate(exp: int) -> tuple[int, bool]:
    if exp > COUNT_CAP_BITS:
        return (1 << COUNT_CAP_BITS) - 1, True
    return 1 << exp, False


def count_bounds(sys: HankelSystem) -> CountBounds:
    """Bounds on the number of invertible associated polynomials.

    With ``r`` the rank of the recurrence rows, the constrained system has rank
    between ``r`` and ``r + n`` (one inversion row per coordinate).
    """
    r = gf2.rank(sys.matrix())
    upper_exp = sys.n_c - r
    lower_exp = max(0, sys.n_c - r - sys.n)
    lower, sat_lo = _saturate(lower_exp)
    upper, sat_hi = _saturate(upper_exp)
    return CountBounds(lower, upper, lower_exp, upper_exp, sat_lo or sat_hi, r)


def enumerate_family(fam: AssociatedFamily, limit: int = DEFAULT_FAMILY_LIMIT) -> tuple[list[FamilyMember], bool]:
    """Members ``particular + sum(bit_i(k) * kernel[i])`` for ``k = 0, 1, ...``; returns (members, truncated)."""
    if fam.particular is None:
        raise NoInverseError("family has no particular solution")
    sys = fam.system
    dim = len(fam.kernel)
    total = 1 << dim if dim < 62 else None
    count = limit if total is None else min(total, limit)
    truncated = total is None or total > limit
    base = fam.particular.to_array()
    xs = np.repeat(base[None, :], count, axis=0)
    idx = np.arange(count, dtype=np.int64)
    for i, kv in enumerate(fam.kernel[: min(dim, 62)]):
        sel = ((idx >> i) & 1).astype(bool)
        if sel.any():
            xs[sel] ^= kv.to_array()
    a_all = xs[:, : sys.n_a]
    b_all = xs[:, sys.n_a :]
    vh = sys.vh.to_array().astype(np.int64)
    vg = sys.vg.to_array().astype(np.int64)
    h_vals = (a_all.astype(np.int64) @ vh.T) & 1
    inv = (sys.last.to_array()[None, :] ^ ((b_all.astype(np.int64) @ vg.T) & 1)).astype(np.uint8)
    members = []
    for k in range(count):
        ok = bool(h_vals[k].all())
        members.append(
            FamilyMember(BitVec.from_bits(a_all[k]), BitVec.from_bits(b_all[k]), BitVec.from_bits(inv[k]) if ok else None)
        )
    return members, truncated


def verify_inverse(poly: Polynomial, seq_rows: np.ndarray, inverse: BitVec) -> bool:
    """Forward check: ``f(s_{-1}, s_0..s_{m-2}) == s_{m-1}`` for every coordinate."""
    m = poly.order
    for i, row in enumerate(np.asarray(seq_rows)):
        window = [inverse[i]] + [int(v) for v in row[: m - 1]]
        if poly.evaluate(window) != int(row[m - 1]):
            return False
    return True


def satisfies_recurrences(poly: Polynomial, seq_rows: np.ndarray) -> bool:
    m = poly.order
    for row in np.asarray(seq_rows):
        for j in range(len(row) - m):
            if poly.evaluate(row[j : j + m]) != int(row[j + m]):
                return False
    return True
