"""Numerical tolerances shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    hermiticity: float = 1e-10
    # input validation: beyond these, inputs are rejected instead of repaired
    hermiticity_reject: float = 1e-8
    negative_eig_reject: float = 1e-8
    trace_reject: float = 1e-8
    completeness: float = 1e-8
    orthonormality: float = 1e-9
    probability_sum: float = 1e-12
    zero_eigenvalue: float = 1e-10
    support: float = 1e-8
    q_one: float = 1e-9
    jacobi_offdiag: float = 1e-12
    jacobi_max_sweeps: int = 100
    nonsingular: float = 1e-8
    verifier: float = 1e-9
    closed_form: float = 1e-10


DEFAULT_TOLERANCES = Tolerances()
