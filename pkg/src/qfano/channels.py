"""Trace-preserving channels in Kraus form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from qfano.config import DEFAULT_TOLERANCES as TOL
from qfano.linalg import hermitian_eig, from_eig
from qfano.states import PurifiedState, haar_isometry

STANDARD_KINDS = ("identity", "unitary", "depolarizing", "amplitude_damping", "phase_damping")


@dataclass(frozen=True)
class KrausChannel:
    """A channel ``rho -> sum_m E_m rho E_m^dagger`` on a ``dim``-level system.

    ``kraus`` is stacked as an array of shape ``(M, dim, dim)``.
    """

    kraus: np.ndarray
    label: str = "custom"

    @property
    def dim(self) -> int:
        return self.kraus.shape[1]

    @property
    def n_kraus(self) -> int:
        return self.kraus.shape[0]

    def __call__(self, rho) -> np.ndarray:
        return apply(self, rho)


def make_channel(kraus: Sequence, label: str = "custom", tol: float = TOL.completeness) -> KrausChannel:
    ks = np.asarray([np.asarray(k, dtype=complex) for k in kraus])
    if ks.ndim != 3 or ks.shape[0] == 0 or ks.shape[1] != ks.shape[2]:
        raise ValueError("Kraus operators must be a non-empty list of equal square matrices")
    completeness = np.einsum("mji,mjk->ik", ks.conj(), ks)
    dev = np.max(np.abs(completeness - np.eye(ks.shape[1])))
    if dev > tol:
        raise ValueError(f"Kraus operators violate completeness (max deviation {dev:.3g})")
    return KrausChannel(ks, label)


def _check_dim(e: KrausChannel, d: int) -> None:
    if e.dim != d:
        raise ValueError(f"dimension mismatch: channel acts on {e.dim}, state has {d}")


def apply(e: KrausChannel, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    _check_dim(e, rho.shape[0])
    out = np.einsum("mij,jk,mlk->il", e.kraus, rho, e.kraus.conj())
    return 0.5 * (out + out.conj().T)


def joint_output(e: KrausChannel, psi: PurifiedState) -> np.ndarray:
    """``(id_R (x) E)(|psi><psi|)`` on the joint reference-principal space."""
    _check_dim(e, psi.d_Q)
    coeff = psi.vec.reshape(psi.d_R, psi.d_Q)
    # (I (x) E_m)|psi> has coefficient matrix C E_m^T
    branches = np.einsum("rj,mij->mri", coeff, e.kraus).reshape(e.n_kraus, -1)
    out = branches.T @ branches.conj()
    return 0.5 * (out + out.conj().T)


def pinching_channel(basis, tol: float = TOL.orthonormality) -> KrausChannel:
    """Channel with Kraus set ``{|b_i><b_i|}`` for the orthonormal basis columns."""
    b = np.asarray(basis, dtype=complex)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("basis must be a square matrix of column vectors")
    dev = np.max(np.abs(b.conj().T @ b - np.eye(b.shape[0])))
    if dev > tol:
        raise ValueError(f"basis is not orthonormal (max deviation {dev:.3g})")
    ks = np.einsum("im,jm->mij", b, b.conj())
    return KrausChannel(ks, "pinching")


def _shift_and_clock(d: int) -> tuple[np.ndarray, np.ndarray]:
    x = np.roll(np.eye(d), 1, axis=0)
    z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return x.astype(complex), z


def unitary_basis(d: int) -> list[np.ndarray]:
    """Orthogonal unitary operator basis; Pauli matrices for ``d = 2``."""
    if d == 2:
        return [
            np.eye(2, dtype=complex),
            np.array([[0, 1], [1, 0]], dtype=complex),
            np.array([[0, -1j], [1j, 0]], dtype=complex),
            np.array([[1, 0], [0, -1]], dtype=complex),
        ]
    x, z = _shift_and_clock(d)
    return [np.linalg.matrix_power(x, j) @ np.linalg.matrix_power(z, k) for j in range(d) for k in range(d)]


def _fixed_unitary(d: int, param: float) -> np.ndarray:
    x, _ = _shift_and_clock(d)
    gen = 0.5 * (x + x.conj().T) + np.diag(np.arange(d) / d)
    values, vectors = hermitian_eig(gen)
    return from_eig(np.exp(-1j * np.pi * param * values), vectors)


def standard_channel(kind: str, d: int, param: float = 0.0) -> KrausChannel:
    """Named channel families.

    ``unitary`` is ``exp(-i pi param G)`` for a fixed generator ``G``;
    ``amplitude_damping`` decays every excited level to ``|0>`` with
    probability ``param``; ``phase_damping`` scales off-diagonal entries by
    ``1 - param``.
    """
    if kind not in STANDARD_KINDS:
        raise ValueError(f"unknown channel kind {kind!r}")
    if d < 1:
        raise ValueError("dimension must be positive")
    if kind != "identity" and not 0.0 <= param <= 1.0:
        raise ValueError(f"parameter {param} outside [0, 1]")
    eye = np.eye(d, dtype=complex)
    if kind == "identity":
        ks = [eye]
    elif kind == "unitary":
        ks = [_fixed_unitary(d, param)]
    elif kind == "depolarizing":
        basis = unitary_basis(d)
        ks = [np.sqrt(1.0 - param * (d * d - 1) / (d * d)) * eye]
        ks += [np.sqrt(param / (d * d)) * u for u in basis[1:]]
    elif kind == "amplitude_damping":
        e0 = np.diag([1.0] + [np.sqrt(1.0 - param)] * (d - 1)).astype(complex)
        ks = [e0]
        for k in range(1, d):
            ek = np.zeros((d, d), dtype=complex)
            ek[0, k] = np.sqrt(param)
            ks.append(ek)
    else:
        ks = [np.sqrt(1.0 - param) * eye]
        for k in range(d):
            ek = np.zeros((d, d), dtype=complex)
            ek[k, k] = np.sqrt(param)
            ks.append(ek)
    return make_channel(ks, label=f"{kind}({param:g})")


def random_channel(d: int, m: int | None = None, rng: np.random.Generator | None = None) -> KrausChannel:
    """Channel from a Haar-random Stinespring isometry into ``d * m`` dimensions.

    ``m`` is the environment dimension (Kraus count) and defaults to ``d**2``.
    """
    m = d * d if m is None else m
    if m < 1:
        raise ValueError("Kraus count must be positive")
    rng = np.random.default_rng() if rng is None else rng
    v = haar_isometry(d * m, d, rng)
    # row index of V is q * m + k, so E_k[q, :] = V[q * m + k, :]
    ks = v.reshape(d, m, d).transpose(1, 0, 2)
    return make_channel(ks, label=f"random(m={m})")


def unitary_channel(u) -> KrausChannel:
    return make_channel([u], label="unitary")


def mix_channels(theta: float, g: KrausChannel, f: KrausChannel) -> KrausChannel:
    """Kraus form of ``theta * G + (1 - theta) * F``."""
    if not 0.0 <= theta <= 1.0:
        raise ValueError("mixing weight must lie in [0, 1]")
    if g.dim != f.dim:
        raise ValueError("channels act on different dimensions")
    ks = np.concatenate([np.sqrt(theta) * g.kraus, np.sqrt(1.0 - theta) * f.kraus])
    return KrausChannel(ks, f"mix({theta:g};{g.label},{f.label})")


def regauge(e: KrausChannel, u) -> KrausChannel:
    """Equivalent Kraus set ``F_k = sum_m u_km E_m`` for a unitary mixing matrix ``u``."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (e.n_kraus, e.n_kraus):
        raise ValueError("mixing matrix must be square of size equal to the Kraus count")
    return KrausChannel(np.einsum("km,mij->kij", u, e.kraus), e.label)
