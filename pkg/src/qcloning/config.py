"""Numerical tolerances shared by every module.

All thresholds live here so that a single record controls what counts as
"normalized", "Hermitian", "positive semidefinite" and so on.
"""
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    normalization: float = 1e-12
    hermitian: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-10  # eigenvalues in [-psd, 0) are clamped to zero
    rank: float = 1e-14  # relative floor below which PSD eigenvalues count as roundoff
    eig_residual: float = 1e-9
    isometry: float = 1e-10
    machine_vectors: float = 1e-10
    parameters: float = 1e-12
    bound: float = 1e-12
    jacobi_eps: float = 1e-14  # relative off-diagonal threshold ending a sweep loop
    jacobi_max_sweeps: int = 60


TOL = Tolerances()
