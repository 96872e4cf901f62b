"""Numeric tolerances shared by the library and its tests."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-9
    trace: float = 1e-9
    psd_clamp: float = 1e-10
    unit_norm: float = 1e-10
    probability_sum: float = 1e-10
    jacobi_offdiag: float = 1e-12
    jacobi_max_sweeps: int = 100
    prune: float = 1e-12
    haar_pivot: float = 1e-12
    tie_band: float = 1e-12
    printed_matrix: float = 1e-3


TOL = Tolerances()

#: Default cap on path length for full outcome-tree enumeration (4**7 branches).
MAX_PATH_LENGTH = 8
