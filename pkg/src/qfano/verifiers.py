"""Bound evaluators and inequality checks.

Every check returns an :class:`InequalityReport` stating ``lhs <= rhs``.
Checks that involve several chained comparisons attach the secondary ones as
``extras``; a report only counts as a pass when all of them pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from qfano.channels import KrausChannel, apply, joint_output
from qfano.config import DEFAULT_TOLERANCES as TOL
from qfano.entropies import (
    binary_entropy,
    is_one,
    operator_power,
    operator_q_log,
    q_log,
    relative_entropy_binary,
    relative_entropy_classical,
    relative_entropy_quantum,
    spectrum,
    tsallis_entropy_state,
)
from qfano.exchange import coherent_q_information, entanglement_fidelity, entropy_exchange, w_matrix
from qfano.linalg import jordan_split, partial_trace, tensor, trace_norm
from qfano.states import purify


class ConsistencyError(ArithmeticError):
    """Two independent evaluations of the same quantity disagree."""


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: float
    rhs: float
    tol: float = TOL.verifier
    instance: str = ""
    extras: tuple["InequalityReport", ...] = ()
    details: dict = field(default_factory=dict)

    @property
    def gap(self) -> float:
        if math.isinf(self.lhs) or math.isinf(self.rhs):
            return math.inf if self.satisfied else -math.inf
        return self.rhs - self.lhs

    @property
    def satisfied(self) -> bool:
        if self.rhs == math.inf:
            return True
        if self.lhs == math.inf:
            return False
        return self.lhs <= self.rhs + self.tol

    @property
    def all_satisfied(self) -> bool:
        return self.satisfied and all(r.all_satisfied for r in self.extras)

    def comparisons(self) -> list["InequalityReport"]:
        out = [self]
        for r in self.extras:
            out.extend(r.comparisons())
        return out

    @property
    def worst_gap(self) -> float:
        return min(r.gap for r in self.comparisons())


def _window(q: float, lo: float, hi: float, name: str, lo_open=False, hi_open=False) -> None:
    below = q <= lo if lo_open else q < lo
    above = q >= hi if hi_open else q > hi
    if below or above or not math.isfinite(q):
        lb, rb = "(" if lo_open else "[", ")" if hi_open else "]"
        raise ValueError(f"{name} requires q in {lb}{lo}, {hi}{rb}, got {q}")


# --- Fano type bound -----------------------------------------------------


def fano_bound(fidelity: float, d_R: int, d: int, q: float) -> float:
    """``H_q(F) + (1 - F)**q ln_q(d_R d - 1)``."""
    if not 0.0 <= fidelity <= 1.0:
        raise ValueError(f"fidelity {fidelity} outside [0, 1]")
    if d_R * d < 2:
        raise ValueError("bound needs d_R * d >= 2")
    rest = 1.0 - fidelity
    weight = 0.0 if rest == 0.0 else rest**q
    return binary_entropy(fidelity, q) + weight * q_log(d_R * d - 1, q)


def check_fano(rho, e: KrausChannel, q: float, tol: float = TOL.verifier, instance: str = "") -> InequalityReport:
    d = e.dim
    lhs = entropy_exchange(rho, e, q)
    f = entanglement_fidelity(rho, e)
    return InequalityReport("fano", lhs, fano_bound(f, d, d, q), tol, instance, details={"fidelity": f})


def check_coherent_bound(rho, e: KrausChannel, q: float, tol: float = TOL.verifier, instance: str = "") -> InequalityReport:
    _window(q, 1.0, math.inf, "coherent q-information bound", lo_open=True, hi_open=True)
    return InequalityReport(
        "coherent", coherent_q_information(rho, e, q), tsallis_entropy_state(rho, q), tol, instance
    )


def check_subadditivity(
    rho_ab, dims: tuple[int, int], q: float, tol: float = TOL.verifier, instance: str = ""
) -> tuple[InequalityReport, InequalityReport]:
    """Subadditivity ``S(AB) <= S(A) + S(B)`` and triangle ``|S(A) - S(B)| <= S(AB)``."""
    _window(q, 1.0, math.inf, "subadditivity", lo_open=True, hi_open=True)
    s_ab = tsallis_entropy_state(rho_ab, q)
    s_a = tsallis_entropy_state(partial_trace(rho_ab, dims, keep="A"), q)
    s_b = tsallis_entropy_state(partial_trace(rho_ab, dims, keep="B"), q)
    return (
        InequalityReport("subadditivity", s_ab, s_a + s_b, tol, instance),
        InequalityReport("triangle", abs(s_a - s_b), s_ab, tol, instance),
    )


def check_quantum_monotonicity(
    rho, sigma, e: KrausChannel, q: float, tol: float = TOL.verifier, instance: str = ""
) -> InequalityReport:
    _window(q, 0.0, 2.0, "quantum monotonicity")
    lhs = relative_entropy_quantum(apply(e, rho), apply(e, sigma), q)
    rhs = relative_entropy_quantum(rho, sigma, q)
    return InequalityReport("monotonicity", lhs, rhs, tol, instance)


# --- Pinsker type bounds -------------------------------------------------


def pinsker_report(rho, sigma, q: float, tol: float = TOL.verifier, instance: str = "") -> InequalityReport:
    """``D_q(rho||sigma) >= d_q(u, v)`` with ``u, v`` the weights of the positive part of ``rho - sigma``.

    At ``q = 1/2`` the chain ``D >= 2 - 2 sqrt(1 - t**2) >= t**2`` is
    attached; at ``q = 1`` the classical Pinsker bound ``D >= 2 t**2``.
    Here ``t`` is half the trace distance.
    """
    _window(q, 0.0, 2.0, "Pinsker bound")
    split = jordan_split(rho, sigma)
    u = float(np.clip(np.trace(split.proj_plus @ rho).real, 0.0, 1.0))
    v = float(np.clip(np.trace(split.proj_plus @ sigma).real, 0.0, 1.0))
    t = 0.5 * trace_norm(np.asarray(rho) - np.asarray(sigma))
    d_full = relative_entropy_quantum(rho, sigma, q)
    extras = []
    if abs(q - 0.5) <= TOL.q_one:
        middle = 2.0 - 2.0 * math.sqrt(max(1.0 - t * t, 0.0))
        extras = [
            InequalityReport("pinsker_half_sqrt", middle, d_full, tol, instance),
            InequalityReport("pinsker_half_square", t * t, middle, tol, instance),
        ]
    elif is_one(q):
        extras = [InequalityReport("pinsker_classical", 2.0 * t * t, d_full, tol, instance)]
    return InequalityReport(
        "pinsker",
        relative_entropy_binary(u, v, q),
        d_full,
        tol,
        instance,
        tuple(extras),
        {"u": u, "v": v, "t": t, "u_minus_v": split.t},
    )


def collapse_matrix(positive: np.ndarray) -> np.ndarray:
    """2-by-n stochastic matrix summing the marked entries into the first outcome."""
    positive = np.asarray(positive, dtype=bool)
    return np.vstack([positive, ~positive]).astype(float)


def first_vs_rest_matrix(n: int) -> np.ndarray:
    """2-by-n stochastic matrix separating entry 0 from the rest."""
    mask = np.zeros(n, dtype=bool)
    mask[0] = True
    return collapse_matrix(mask)


def check_classical_monotonicity(
    p, r, t_matrix, q: float, tol: float = TOL.verifier, instance: str = ""
) -> InequalityReport:
    if q < 0.0:
        raise ValueError("classical monotonicity requires q >= 0")
    t_matrix = np.asarray(t_matrix, dtype=float)
    if np.any(t_matrix < 0.0) or np.max(np.abs(t_matrix.sum(axis=0) - 1.0)) > 1e-12:
        raise ValueError("transition matrix must be column stochastic")
    p, r = np.asarray(p, dtype=float), np.asarray(r, dtype=float)
    lhs = relative_entropy_classical(t_matrix @ p, t_matrix @ r, q)
    return InequalityReport("classical_monotonicity", lhs, relative_entropy_classical(p, r, q), tol, instance)


def lemma_g(u: float, v: float) -> float:
    if not (0.0 <= u <= 1.0 and 0.0 <= v <= 1.0):
        raise ValueError("arguments must lie in [0, 1]")
    return math.sqrt(u * v) + math.sqrt((1.0 - u) * (1.0 - v))


def lemma_g_check(t: float, points: int = 10_001, tol: float = TOL.verifier, instance: str = "") -> InequalityReport:
    """Grid maximum of ``g`` on the segment ``u = t + v`` against ``sqrt(1 - t**2)``.

    Among grid points tying for the maximum (within 1e-12) the one nearest
    the segment midpoint is reported as maximizer.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    v = np.linspace(0.0, 1.0 - t, points)
    u = np.minimum(v + t, 1.0)
    g = np.sqrt(u * v) + np.sqrt((1.0 - u) * (1.0 - v))
    ties = np.flatnonzero(g >= g.max() - 1e-12)
    k = ties[np.argmin(np.abs(v[ties] - 0.5 * (1.0 - t)))]
    step = (1.0 - t) / (points - 1) if points > 1 else 0.0
    location = InequalityReport("lemma_g_argmax", abs(float(u[k]) - 0.5 * (1.0 + t)), step, 1e-12, instance)
    return InequalityReport(
        "lemma_g",
        float(g[k]),
        math.sqrt(max(1.0 - t * t, 0.0)),
        tol,
        instance,
        (location,),
        details={"u_max": float(u[k]), "v_max": float(v[k]), "step": step},
    )


def check_relative_ordering(
    rho, sigma, p_order: float, q_order: float, tol: float = TOL.verifier, instance: str = ""
) -> InequalityReport:
    """``D_q <= D_1 <= D_p`` for ``q in [0, 1)`` and ``p in (1, 2]``."""
    _window(p_order, 1.0, 2.0, "upper order", lo_open=True)
    _window(q_order, 0.0, 1.0, "lower order", hi_open=True)
    d_p = relative_entropy_quantum(rho, sigma, p_order)
    d_1 = relative_entropy_quantum(rho, sigma, 1.0)
    d_q = relative_entropy_quantum(rho, sigma, q_order)
    upper = InequalityReport("ordering_upper", d_1, d_p, tol, instance)
    return InequalityReport("ordering", d_q, d_1, tol, instance, (upper,))


# --- monotonicity-based Fano family --------------------------------------


def theorem4_bound(
    rho, e: KrausChannel, omega, q: float, tol: float = TOL.verifier, instance: str = ""
) -> InequalityReport:
    """``S_q(rho, E) <= -d_q(F_e, F_omega) - tr(rho_RQ'**q ln_q omega)``.

    ``omega`` is a nonsingular state on the joint reference-principal space.
    For ``1 <= q <= 2`` the weaker bound with ``rho_RQ'`` in place of its
    ``q``-th power is attached, together with the check that it is indeed
    weaker.
    """
    _window(q, 0.0, 2.0, "monotonicity-based Fano bound")
    omega = np.asarray(omega, dtype=complex)
    psi = purify(rho)
    if omega.shape != (psi.d_R * psi.d_Q,) * 2:
        raise ValueError("omega must act on the joint reference-principal space")
    if np.linalg.eigvalsh(0.5 * (omega + omega.conj().T))[0] <= TOL.nonsingular:
        raise ValueError("omega must be nonsingular")
    rho_rq = joint_output(e, psi)
    f_e = entanglement_fidelity(rho, e)
    f_omega = float(np.clip(np.real(psi.vec.conj() @ omega @ psi.vec), 0.0, 1.0))
    ln_omega = operator_q_log(omega, q)
    d_bin = relative_entropy_binary(f_e, f_omega, q)
    rhs = -d_bin - float(np.real(np.trace(operator_power(rho_rq, q) @ ln_omega)))
    lhs = entropy_exchange(rho, e, q)
    extras = ()
    if 1.0 - TOL.q_one <= q <= 2.0:
        rhs_weak = -d_bin - float(np.real(np.trace(rho_rq @ ln_omega)))
        extras = (
            InequalityReport("theorem4_weak", lhs, rhs_weak, tol, instance),
            InequalityReport("theorem4_weaker_than_strong", rhs, rhs_weak, tol, instance),
        )
    return InequalityReport(
        "theorem4", lhs, rhs, tol, instance, extras, {"F_e": f_e, "F_omega": f_omega}
    )


class ProductOmegaTerms(NamedTuple):
    F_omega: float
    trace_term: float
    F_omega_dense: float
    trace_term_dense: float


def product_omega_terms(rho, e: KrausChannel, mu, omega_q, q: float, tol: float = TOL.closed_form) -> ProductOmegaTerms:
    """Closed-form ``F_omega`` and ``tr(rho_RQ' ln_q omega~)`` for a product reference weight.

    ``omega~ = sum_j mu_j |j><j| (x) omega_q`` in the reference basis of
    :func:`qfano.states.purify`. Both quantities are re-evaluated densely;
    a disagreement beyond ``tol`` raises :class:`ConsistencyError`.
    """
    _window(q, 0.0, 2.0, "product omega terms")
    mu = np.asarray(mu, dtype=float)
    omega_q = np.asarray(omega_q, dtype=complex)
    if np.any(mu <= 0.0):
        raise ValueError("reference weights must be strictly positive")
    if np.linalg.eigvalsh(0.5 * (omega_q + omega_q.conj().T))[0] <= TOL.nonsingular:
        raise ValueError("omega_q must be nonsingular")
    psi = purify(rho)
    lam, vecs = psi.eigenvalues, psi.eigenvectors
    if mu.shape != lam.shape:
        raise ValueError("mu must have one weight per reference basis vector")

    diag_omega = np.real(np.einsum("ij,ik,kj->j", vecs.conj(), omega_q, vecs))
    f_closed = float(np.sum(lam * mu * diag_omega))
    ln_w = operator_q_log(omega_q, q)
    outputs = [np.real(np.trace(apply(e, np.outer(vecs[:, j], vecs[:, j].conj())) @ ln_w)) for j in range(lam.size)]
    trace_closed = float(np.sum(lam * q_log(mu, q)) + np.sum(mu ** (1.0 - q) * lam * np.asarray(outputs)))

    omega_full = tensor(np.diag(mu), omega_q)
    f_dense = float(np.real(psi.vec.conj() @ omega_full @ psi.vec))
    trace_dense = float(np.real(np.trace(joint_output(e, psi) @ operator_q_log(omega_full, q))))

    if abs(f_closed - f_dense) > tol or abs(trace_closed - trace_dense) > tol:
        raise ConsistencyError(
            f"closed forms disagree with dense evaluation: "
            f"F {f_closed!r} vs {f_dense!r}, trace {trace_closed!r} vs {trace_dense!r}"
        )
    return ProductOmegaTerms(f_closed, trace_closed, f_dense, trace_dense)


# --- functional identities used as standing cross-checks -----------------


def exchange_routes_agree(rho, e: KrausChannel, q: float, tol: float = TOL.verifier) -> InequalityReport:
    diff = abs(entropy_exchange(rho, e, q, route="w") - entropy_exchange(rho, e, q, route="joint"))
    return InequalityReport("exchange_routes", diff, 0.0, tol)


def fidelity_routes_agree(rho, e: KrausChannel, tol: float = TOL.verifier) -> InequalityReport:
    diff = abs(entanglement_fidelity(rho, e, route="kraus") - entanglement_fidelity(rho, e, route="joint"))
    return InequalityReport("fidelity_routes", diff, 0.0, tol)


def environment_spectrum_matches(rho, e: KrausChannel, tol: float = 1e-8) -> InequalityReport:
    """Nonzero spectra of ``W`` and of the joint output coincide."""
    w = spectrum(w_matrix(rho, e))
    j = spectrum(joint_output(e, purify(rho)))
    n = max(w.size, j.size)
    w = np.sort(np.pad(w, (n - w.size, 0)))
    j = np.sort(np.pad(j, (n - j.size, 0)))
    return InequalityReport("environment_spectrum", float(np.max(np.abs(w - j))), 0.0, tol)


__all__ = [
    "ConsistencyError",
    "InequalityReport",
    "ProductOmegaTerms",
    "check_classical_monotonicity",
    "check_coherent_bound",
    "check_fano",
    "check_quantum_monotonicity",
    "check_relative_ordering",
    "check_subadditivity",
    "collapse_matrix",
    "environment_spectrum_matches",
    "exchange_routes_agree",
    "fano_bound",
    "fidelity_routes_agree",
    "first_vs_rest_matrix",
    "lemma_g",
    "lemma_g_check",
    "pinsker_report",
    "product_omega_terms",
    "theorem4_bound",
]
