"""Channel functionals: environment matrix, q-entropy exchange, entanglement
fidelity and coherent q-information."""

from __future__ import annotations

import numpy as np

from qfano.channels import KrausChannel, apply, joint_output
from qfano.entropies import tsallis_entropy_state
from qfano.states import PurifiedState, purify


def w_matrix(rho, e: KrausChannel) -> np.ndarray:
    """Environment state ``w_mn = tr(E_m rho E_n^dagger)``, an ``M x M`` density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[0] != e.dim:
        raise ValueError(f"dimension mismatch: channel acts on {e.dim}, state has {rho.shape[0]}")
    w = np.einsum("mij,jk,nik->mn", e.kraus, rho, e.kraus.conj())
    return 0.5 * (w + w.conj().T)


def entropy_exchange(
    rho, e: KrausChannel, q: float, route: str = "w", psi: PurifiedState | None = None
) -> float:
    """q-entropy exchange ``S_q(rho, E)``.

    ``route="w"`` evaluates ``tr eta_q(W)``; ``route="joint"`` evaluates
    ``tr eta_q`` of the joint reference-principal output, using ``psi`` as
    purification when given. The two agree because both operators share their
    nonzero spectrum.
    """
    if route == "w":
        return tsallis_entropy_state(w_matrix(rho, e), q)
    if route == "joint":
        psi = purify(rho) if psi is None else psi
        return tsallis_entropy_state(joint_output(e, psi), q)
    raise ValueError(f"unknown route {route!r}")


def entanglement_fidelity(
    rho, e: KrausChannel, route: str = "kraus", psi: PurifiedState | None = None
) -> float:
    """``F(rho, E) = sum_m |tr(rho E_m)|**2``, or ``<psi|rho_RQ'|psi>`` with ``route="joint"``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[0] != e.dim:
        raise ValueError(f"dimension mismatch: channel acts on {e.dim}, state has {rho.shape[0]}")
    if route == "kraus":
        f = float(np.sum(np.abs(np.einsum("ij,mji->m", rho, e.kraus)) ** 2))
    elif route == "joint":
        psi = purify(rho) if psi is None else psi
        f = float(np.real(psi.vec.conj() @ joint_output(e, psi) @ psi.vec))
    else:
        raise ValueError(f"unknown route {route!r}")
    return min(max(f, 0.0), 1.0)


def coherent_q_information(rho, e: KrausChannel, q: float) -> float:
    return tsallis_entropy_state(apply(e, rho), q) - entropy_exchange(rho, e, q)
