"""Tsallis q-entropies and relative q-entropies.

Every functional switches to its natural-log form when ``|q - 1| <= 1e-9``.
Powers use the convention ``0**q = 0`` for every ``q >= 0`` (so ``S_0``
counts nonzero probabilities minus one). A divergence that is infinite
because of a support mismatch is returned as ``math.inf``.
"""

from __future__ import annotations

import math

import numpy as np

from qfano.config import DEFAULT_TOLERANCES as TOL
from qfano.linalg import hermitian_eig

INF = math.inf


def _check_q(q: float) -> float:
    q = float(q)
    if not (q >= 0.0 and math.isfinite(q)):
        raise ValueError(f"entropic order must be finite and nonnegative, got {q}")
    return q


def is_one(q: float) -> bool:
    return abs(q - 1.0) <= TOL.q_one


def q_log(x, q: float):
    """``ln_q x = (x**(1-q) - 1) / (1 - q)``, natural log at ``q = 1``."""
    q = _check_q(q)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise ValueError("q-logarithm needs positive arguments")
    out = np.log(x) if is_one(q) else np.expm1((1.0 - q) * np.log(x)) / (1.0 - q)
    return float(out) if out.ndim == 0 else out


def _power(x: np.ndarray, a: float) -> np.ndarray:
    """``x**a`` with ``0**a = 0``, including ``a = 0``."""
    out = np.zeros_like(x, dtype=float)
    pos = x > 0.0
    out[pos] = x[pos] ** a
    return out


def eta(x, q: float):
    """``eta_q(x) = (x**q - x) / (1 - q)`` with ``eta_q(0) = 0``; ``-x ln x`` at ``q = 1``."""
    q = _check_q(q)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0.0
    xp = x[pos]
    if is_one(q):
        out[pos] = -xp * np.log(xp)
    else:
        # x**q - x = x * (x**(q-1) - 1); expm1 keeps precision near q = 1, the
        # direct form avoids overflow for tiny x where the exponent is large
        z = (q - 1.0) * np.log(xp)
        small = np.abs(z) <= 1.0
        diff = np.empty_like(xp)
        diff[small] = xp[small] * np.expm1(z[small])
        diff[~small] = xp[~small] ** q - xp[~small]
        out[pos] = diff / (1.0 - q)
    return float(out) if out.ndim == 0 else out


def spectrum(rho, zero_tol: float = TOL.zero_eigenvalue) -> np.ndarray:
    """Eigenvalues of a Hermitian operator with values below ``zero_tol`` set to 0."""
    values = hermitian_eig(rho).values
    return np.where(values < zero_tol, 0.0, values)


def tsallis_entropy_vec(p, q: float) -> float:
    p = np.asarray(p, dtype=float)
    return float(np.sum(eta(p, q)))


def tsallis_entropy_state(rho, q: float) -> float:
    return tsallis_entropy_vec(spectrum(rho), q)


def binary_entropy(p: float, q: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"binary entropy argument {p} outside [0, 1]")
    return tsallis_entropy_vec([p, 1.0 - p], q)


def relative_entropy_classical(p, r, q: float) -> float:
    """``D_q(p||r) = (1 - sum_i p_i**q r_i**(1-q)) / (1 - q)``.

    Entries with ``p_i = 0`` contribute nothing. For ``q >= 1`` an index with
    ``r_i = 0 < p_i`` makes the divergence infinite.
    """
    q = _check_q(q)
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    r = np.clip(np.asarray(r, dtype=float), 0.0, None)
    if p.shape != r.shape:
        raise ValueError("probability vectors have different lengths")
    pos = p > 0.0
    if q >= 1.0 - TOL.q_one and np.any(r[pos] == 0.0):
        return INF
    if is_one(q):
        pp, rr = p[pos], r[pos]
        return float(np.sum(pp * (np.log(pp) - np.log(rr))))
    s = np.sum(_power(p, q) * _power(r, 1.0 - q) * pos)
    return float((1.0 - s) / (1.0 - q))


def relative_entropy_binary(u: float, v: float, q: float) -> float:
    if not (0.0 <= u <= 1.0 and 0.0 <= v <= 1.0):
        raise ValueError("binary arguments must lie in [0, 1]")
    return relative_entropy_classical([u, 1.0 - u], [v, 1.0 - v], q)


def relative_entropy_quantum(rho, sigma, q: float) -> float:
    """``D_q(rho||sigma) = (1 - tr(rho**q sigma**(1-q))) / (1 - q)``.

    Powers of ``sigma`` are taken on its support. For ``q >= 1`` the result is
    ``inf`` when ``rho`` has weight above ``1e-8`` outside that support; at
    ``q = 1`` the Umegaki relative entropy ``tr rho (ln rho - ln sigma)`` is
    returned.
    """
    q = _check_q(q)
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise ValueError("states have different dimensions")
    lam, a = hermitian_eig(rho)
    mu, b = hermitian_eig(sigma)
    lam = np.where(lam < TOL.zero_eigenvalue, 0.0, lam)
    mu = np.where(mu < TOL.zero_eigenvalue, 0.0, mu)
    # overlaps[i, j] = |<a_i|b_j>|^2
    overlaps = np.abs(a.conj().T @ b) ** 2
    supp = mu > 0.0
    if q >= 1.0 - TOL.q_one:
        kernel_weight = float(np.real(np.trace(rho @ (b[:, ~supp] @ b[:, ~supp].conj().T))))
        if kernel_weight > TOL.support:
            return INF
    ov = overlaps[:, supp]
    mus = mu[supp]
    if is_one(q):
        pos = lam > 0.0
        first = float(np.sum(lam[pos] * np.log(lam[pos])))
        second = float(lam[pos] @ ov[pos] @ np.log(mus))
        return first - second
    s = float(_power(lam, q) @ ov @ mus ** (1.0 - q))
    return (1.0 - s) / (1.0 - q)


def operator_power(rho, a: float) -> np.ndarray:
    """``rho**a`` on the support of ``rho`` (also for ``a = 0``)."""
    values, vectors = hermitian_eig(rho)
    values = np.where(values < TOL.zero_eigenvalue, 0.0, values)
    return (vectors * _power(values, a)) @ vectors.conj().T


def operator_q_log(omega, q: float) -> np.ndarray:
    """``ln_q`` of a nonsingular positive operator."""
    values, vectors = hermitian_eig(omega)
    return (vectors * q_log(values, q)) @ vectors.conj().T
