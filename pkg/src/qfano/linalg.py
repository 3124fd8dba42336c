"""Dense complex linear algebra used throughout the package.

Operators are plain ``numpy`` arrays. Hermitian inputs are symmetrized on
entry, so small round-off asymmetries never reach the eigensolver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from qfano.config import DEFAULT_TOLERANCES as TOL


class DomainError(ValueError):
    """A scalar function was evaluated outside its domain."""


class ConvergenceError(ArithmeticError):
    pass


class EigenSystem(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class JordanSplit:
    proj_plus: np.ndarray
    proj_minus: np.ndarray
    t: float


def _square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def hermitian(m, tol: float = TOL.hermiticity_reject) -> np.ndarray:
    """Return ``(m + m^dagger)/2`` after checking ``m`` is Hermitian within ``tol``."""
    m = _square(m)
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3g})")
    return 0.5 * (m + m.conj().T)


def tensor(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(m, dims: tuple[int, int], keep: str = "A") -> np.ndarray:
    """Trace out one factor of a bipartite operator.

    ``dims`` is ``(d_A, d_B)`` and ``keep`` names the factor that survives
    (``"A"`` or ``"B"``; ``"R"``/``"Q"`` are accepted as aliases for the
    reference and principal systems).
    """
    m = _square(m)
    d_a, d_b = dims
    if m.shape[0] != d_a * d_b:
        raise ValueError(f"dimension mismatch: {m.shape[0]} != {d_a}*{d_b}")
    t = m.reshape(d_a, d_b, d_a, d_b)
    keep = {"R": "A", "Q": "B"}.get(keep, keep)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"unknown subsystem tag {keep!r}")


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    # largest-magnitude component of each column made real positive,
    # ties resolved toward the lowest index
    mags = np.abs(vectors)
    idx = np.argmax(mags >= mags.max(axis=0, keepdims=True) - 1e-12, axis=0)
    pivots = vectors[idx, np.arange(vectors.shape[1])]
    return vectors * (np.abs(pivots) / pivots)


def jacobi_eigh(
    a,
    tol: float = TOL.jacobi_offdiag,
    max_sweeps: int = TOL.jacobi_max_sweeps,
) -> EigenSystem:
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix.

    Each rotation first removes the phase of the pivot element, then applies
    the real symmetric Jacobi rotation that annihilates it. Sweeps stop once
    the off-diagonal Frobenius mass drops below ``tol * max(1, ||a||_F)``.

    Raises:
        ConvergenceError: if ``max_sweeps`` sweeps do not reach the threshold.
    """
    a = hermitian(a).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    threshold = tol * max(1.0, np.linalg.norm(a))

    def off(x):
        return np.linalg.norm(x - np.diag(np.diag(x)))

    for _ in range(max_sweeps):
        if off(a) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                mag = abs(b)
                if mag == 0.0:
                    continue
                phase = b / mag
                alpha, gamma = a[p, p].real, a[q, q].real
                theta = 0.5 * np.arctan2(2.0 * mag, gamma - alpha)
                c, s = np.cos(theta), np.sin(theta)
                # J = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                j = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = [p, q]
                a[:, cols] = a[:, cols] @ j
                a[cols, :] = j.conj().T @ a[cols, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p], a[q, q] = a[p, p].real, a[q, q].real
                v[:, cols] = v[:, cols] @ j
    else:
        if off(a) > threshold:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")

    values = np.diag(a).real
    order = np.argsort(values, kind="stable")
    return EigenSystem(values[order], _fix_phases(v[:, order]))


def hermitian_eig(h, method: str = "lapack") -> EigenSystem:
    """Eigen-decomposition with ascending eigenvalues and phase-fixed eigenvectors.

    ``method="lapack"`` uses ``numpy.linalg.eigh``; ``method="jacobi"`` uses
    :func:`jacobi_eigh`. Both return the same phase convention.
    """
    if method == "jacobi":
        return jacobi_eigh(h)
    if method != "lapack":
        raise ValueError(f"unknown eigensolver {method!r}")
    h = hermitian(h)
    try:
        values, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    return EigenSystem(values, _fix_phases(vectors))


def from_eig(values, vectors) -> np.ndarray:
    return (vectors * values) @ vectors.conj().T


def matrix_function(h, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a real scalar function to a Hermitian operator through its spectrum.

    ``f`` is called once on the array of eigenvalues.

    Raises:
        DomainError: if ``f`` yields a non-finite value on some eigenvalue.
    """
    values, vectors = hermitian_eig(h)
    with np.errstate(all="ignore"):
        mapped = np.asarray(f(values), dtype=float)
    if mapped.shape != values.shape or not np.all(np.isfinite(mapped)):
        bad = values[~np.isfinite(mapped)] if mapped.shape == values.shape else values
        raise DomainError(f"function undefined on eigenvalue(s) {bad}")
    return from_eig(mapped, vectors)


def trace_norm(a) -> float:
    a = _square(a)
    if np.allclose(a, a.conj().T, atol=TOL.hermiticity, rtol=0.0):
        return float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (a + a.conj().T)))))
    return float(np.sum(np.linalg.svd(a, compute_uv=False)))


def projector(vectors: Sequence[np.ndarray] | np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the span of the given orthonormal columns."""
    v = np.asarray(vectors, dtype=complex)
    if v.ndim == 1:
        v = v[:, None]
    return v @ v.conj().T


def jordan_split(rho, sigma, zero_tol: float = TOL.zero_eigenvalue) -> JordanSplit:
    """Positive/negative spectral projectors of ``rho - sigma``.

    Eigenvectors whose eigenvalue lies in ``[-zero_tol, zero_tol]`` are put
    into the positive projector.
    """
    rho, sigma = _square(rho), _square(sigma)
    if rho.shape != sigma.shape:
        raise ValueError("states have different dimensions")
    values, vectors = hermitian_eig(rho - sigma)
    plus = values >= -zero_tol
    p_plus = projector(vectors[:, plus])
    p_minus = projector(vectors[:, ~plus])
    t = float(np.sum(values[values > zero_tol]))
    return JordanSplit(p_plus, p_minus, t)
