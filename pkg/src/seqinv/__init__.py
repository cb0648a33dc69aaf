"""Inverses of binary sequences from polynomial recurrence relations over GF(2)."""

__version__ = "0.1.0"

from .complexity import PciReport, berlekamp_massey, complexity_relative, lc_inverse, moc, pci
from .gf2 import BitMatrix, BitVec
from .golomb import FsrSpec, fsr_step, generate, is_nonsingular_fsr, solve_golomb
from .hankel import BitSequence, HankelSystem, MonomialSet, VectorSequence, build_any, build_system
from .inversion import count_bounds, enumerate_family, solve_associated, solve_invertible
from .localinv import BlackBoxMap, local_invert
from .monomial import Monomial, Polynomial, enumerate_basis, parse_anf

__all__ = [
    "BitMatrix",
    "BitSequence",
    "BitVec",
    "BlackBoxMap",
    "FsrSpec",
    "HankelSystem",
    "Monomial",
    "MonomialSet",
    "PciReport",
    "Polynomial",
    "VectorSequence",
    "berlekamp_massey",
    "build_any",
    "build_system",
    "complexity_relative",
    "count_bounds",
    "enumerate_basis",
    "enumerate_family",
    "fsr_step",
    "generate",
    "is_nonsingular_fsr",
    "lc_inverse",
    "local_invert",
    "moc",
    "parse_anf",
    "pci",
    "solve_associated",
    "solve_golomb",
    "solve_invertible",
]
