"""Numerical tolerances shared by production checks and the test-suite."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-10
    purity: float = 1e-10
    # Jacobi stops once the off-diagonal Frobenius mass drops below
    # ``jacobi_off * max(1, ||A||_F)``.
    jacobi_off: float = 1e-12
    jacobi_max_sweeps: int = 100
    reconstruction: float = 1e-9
    centroid_inequality: float = 1e-6


DEFAULT = Tolerances()
