"""Density matrices, probability vectors, random states and purifications."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qfano.config import DEFAULT_TOLERANCES as TOL
from qfano.linalg import from_eig, hermitian, hermitian_eig, partial_trace


def make_density(m) -> np.ndarray:
    """Validate ``m`` as a density matrix and return a cleaned copy.

    The matrix is symmetrized, eigenvalues in ``[-1e-8, 0)`` are clamped to
    zero and the trace is renormalized to one. Anything further from a valid
    state raises ``ValueError`` rather than being silently repaired.
    """
    h = hermitian(m, tol=TOL.hermiticity_reject)
    tr = np.trace(h).real
    if abs(tr - 1.0) > TOL.trace_reject:
        raise ValueError(f"trace deviates from 1 (trace = {tr:.12g})")
    values, vectors = hermitian_eig(h)
    if values[0] < -TOL.negative_eig_reject:
        raise ValueError(f"matrix has a negative eigenvalue {values[0]:.3g}")
    if values[0] < 0.0:
        values = np.clip(values, 0.0, None)
        h = from_eig(values, vectors)
    return h / np.trace(h).real


def make_probability(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("probability vector must be a non-empty 1-d array")
    if np.any(p < 0.0) or not np.all(np.isfinite(p)):
        raise ValueError("probabilities must be finite and nonnegative")
    if abs(p.sum() - 1.0) > TOL.probability_sum:
        raise ValueError(f"probabilities sum to {p.sum():.15g}, not 1")
    return p


def _ginibre(shape, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def haar_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random isometry (``rows >= cols``) from QR of a Ginibre matrix.

    The diagonal of ``R`` is made real positive, which fixes the otherwise
    arbitrary column phases that LAPACK leaves behind.
    """
    q, r = np.linalg.qr(_ginibre((rows, cols), rng))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    return haar_isometry(d, d, rng)


def random_state_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    v = _ginibre(d, rng)
    return v / np.linalg.norm(v)


def random_pure(d: int, rng: np.random.Generator) -> np.ndarray:
    if d < 1:
        raise ValueError("dimension must be positive")
    v = random_state_vector(d, rng)
    return np.outer(v, v.conj())


def random_mixed(d: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    """Reduced state of a Haar-random pure state on ``d * rank`` dimensions."""
    if not 1 <= rank <= d:
        raise ValueError(f"rank must lie in [1, {d}], got {rank}")
    g = random_state_vector(d * rank, rng).reshape(d, rank)
    rho = g @ g.conj().T
    return 0.5 * (rho + rho.conj().T) / np.trace(rho).real


@dataclass(frozen=True)
class PurifiedState:
    vec: np.ndarray
    d_R: int
    d_Q: int
    # spectral data of the purified state, kept for closed-form evaluations
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def projector(self) -> np.ndarray:
        return np.outer(self.vec, self.vec.conj())

    def reduced(self) -> np.ndarray:
        return partial_trace(self.projector(), (self.d_R, self.d_Q), keep="Q")


def purify(rho) -> PurifiedState:
    """Purification ``sum_k sqrt(lambda_k) |k> (x) |lambda_k>`` on R (x) Q.

    The reference basis is the canonical one and ``d_R = d_Q``. Because the
    eigenvector phases are fixed by :func:`hermitian_eig`, equal inputs give
    identical vectors.
    """
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    values, vectors = hermitian_eig(rho)
    values = np.clip(values, 0.0, None)
    amps = np.sqrt(values)
    # row k of the (d_R, d_Q) coefficient matrix is sqrt(lambda_k) <.|lambda_k>
    vec = (amps[:, None] * vectors.T).reshape(d * d)
    vec = vec / np.linalg.norm(vec)
    return PurifiedState(vec, d, d, values, vectors)


def with_reference_unitary(psi: PurifiedState, u) -> PurifiedState:
    """Another purification of the same state: ``(U (x) I)|psi>``."""
    u = np.asarray(u, dtype=complex)
    coeff = u @ psi.vec.reshape(psi.d_R, psi.d_Q)
    return PurifiedState(coeff.reshape(-1), psi.d_R, psi.d_Q, psi.eigenvalues, psi.eigenvectors)
