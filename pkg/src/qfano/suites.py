"""Randomized verification suites.

A suite turns ``(rng, d, q)`` into one :class:`InequalityReport`. Instance
``i`` of a suite draws from its own generator seeded by
``(master seed, suite id, i)``, so results do not depend on evaluation order
or on how many worker threads are used.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from qfano.channels import (
    KrausChannel,
    mix_channels,
    pinching_channel,
    random_channel,
    standard_channel,
    unitary_channel,
)
from qfano.config import DEFAULT_TOLERANCES as TOL
from qfano.entropies import tsallis_entropy_state
from qfano.exchange import entropy_exchange
from qfano.linalg import hermitian_eig, tensor
from qfano.states import random_mixed, random_pure, random_unitary
from qfano.verifiers import (
    InequalityReport,
    check_classical_monotonicity,
    check_coherent_bound,
    check_fano,
    check_quantum_monotonicity,
    check_relative_ordering,
    check_subadditivity,
    collapse_matrix,
    lemma_g_check,
    pinsker_report,
    product_omega_terms,
    theorem4_bound,
)

Q_GRID_0_2 = tuple(round(0.2 * k, 10) for k in range(11))


@dataclass(frozen=True)
class Suite:
    name: str
    ident: int
    default_q: tuple[float, ...]
    q_ok: Callable[[float], bool]
    window: str
    instance: Callable[[np.random.Generator, int, float, float, str], InequalityReport]
    uses_q: bool = True


@dataclass
class SuiteResult:
    name: str
    trials: int
    violations: int
    worst_gap: float
    failures: list[dict] = field(default_factory=list)
    reports: list[InequalityReport] = field(default_factory=list, repr=False)


# --- random instance helpers ---------------------------------------------


def random_state(rng: np.random.Generator, d: int, full_rank: bool = False) -> np.ndarray:
    """Random state of random rank, or a full-rank one with spectrum floored at ``1e-2 / d``.

    The floor bounds ``sigma**(1-q)`` so that divergences stay within the
    range where an absolute 1e-9 comparison is meaningful in double precision.
    """
    if full_rank:
        return random_omega(rng, d, floor=1e-2)
    return random_mixed(d, int(rng.integers(1, d + 1)), rng)


def random_test_channel(rng: np.random.Generator, d: int) -> KrausChannel:
    """Mostly Haar-random channels with Kraus count 1, d or d**2, plus named families."""
    pick = rng.random()
    if pick < 0.7:
        m = int(rng.choice([1, d, d * d]))
        return random_channel(d, m, rng)
    kind = str(rng.choice(["depolarizing", "amplitude_damping", "phase_damping", "unitary", "identity"]))
    return standard_channel(kind, d, float(rng.random()))


def random_omega(rng: np.random.Generator, n: int, floor: float = 1e-3) -> np.ndarray:
    return (1.0 - floor) * random_mixed(n, n, rng) + floor * np.eye(n) / n


def random_stochastic(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    t = rng.random((rows, cols))
    return t / t.sum(axis=0, keepdims=True)


# --- instances -----------------------------------------------------------


def _fano(rng, d, q, tol, tag):
    e = random_test_channel(rng, d)
    return check_fano(random_state(rng, d), e, q, tol, f"{tag} channel={e.label}")


def _coherent(rng, d, q, tol, tag):
    e = random_test_channel(rng, d)
    return check_coherent_bound(random_state(rng, d), e, q, tol, f"{tag} channel={e.label}")


def _subadditivity(rng, d, q, tol, tag):
    kind = str(rng.choice(["mixed", "pure", "product_pure_factor"]))
    if kind == "mixed":
        rho = random_state(rng, d * d)
    elif kind == "pure":
        rho = random_pure(d * d, rng)
    else:
        rho = tensor(random_state(rng, d), random_pure(d, rng))
    sub, tri = check_subadditivity(rho, (d, d), q, tol, f"{tag} state={kind}")
    return InequalityReport(sub.name, sub.lhs, sub.rhs, tol, sub.instance, (tri,))


def _monotonicity_channel(rng, d, rho, sigma):
    kind = str(rng.choice(["pinching_jordan", "pinching_random", "depolarizing", "amplitude_damping", "random", "unitary"]))
    if kind == "pinching_jordan":
        return pinching_channel(hermitian_eig(rho - sigma).vectors), kind
    if kind == "pinching_random":
        return pinching_channel(random_unitary(d, rng)), kind
    if kind == "random":
        return random_channel(d, int(rng.choice([1, d, d * d])), rng), kind
    if kind == "unitary":
        return unitary_channel(random_unitary(d, rng)), kind
    return standard_channel(kind, d, float(rng.random())), kind


def _monotonicity(rng, d, q, tol, tag):
    rho = random_state(rng, d)
    sigma = random_state(rng, d, full_rank=True)
    e, kind = _monotonicity_channel(rng, d, rho, sigma)
    return check_quantum_monotonicity(rho, sigma, e, q, tol, f"{tag} channel={kind}")


def _pinsker(rng, d, q, tol, tag):
    rho = random_state(rng, d)
    sigma = random_state(rng, d, full_rank=True)
    return pinsker_report(rho, sigma, q, tol, tag)


def _theorem4(rng, d, q, tol, tag):
    rho = random_state(rng, d)
    e = random_test_channel(rng, d)
    omega = random_omega(rng, d * d)
    return theorem4_bound(rho, e, omega, q, tol, f"{tag} channel={e.label}")


def _product_omega(rng, d, q, tol, tag):
    rho = random_state(rng, d)
    e = random_test_channel(rng, d)
    # moderate floors keep omega~ well conditioned enough for an absolute 1e-10 comparison
    mu = 0.9 * rng.dirichlet(np.ones(d)) + 0.1 / d
    omega_q = random_omega(rng, d, floor=0.1)
    terms = product_omega_terms(rho, e, mu, omega_q, q, tol=math.inf)
    diff = max(abs(terms.F_omega - terms.F_omega_dense), abs(terms.trace_term - terms.trace_term_dense))
    return InequalityReport("product_omega", diff, TOL.closed_form, 0.0, f"{tag} channel={e.label}")


def _classical(rng, d, q, tol, tag):
    p = rng.dirichlet(np.ones(d))
    r = rng.dirichlet(np.ones(d))
    if rng.random() < 0.5:
        t = random_stochastic(rng, int(rng.integers(2, d + 1)), d)
        kind = "random"
    else:
        mask = rng.random(d) < 0.5
        t = collapse_matrix(mask)
        kind = "collapse"
    return check_classical_monotonicity(p, r, t, q, tol, f"{tag} T={kind}")


def _lemma(rng, d, q, tol, tag):
    return lemma_g_check(float(rng.random()), tol=tol, instance=tag)


def _ordering(rng, d, orders, tol, tag):
    p_order, q_order = orders
    rho = random_state(rng, d, full_rank=True)
    sigma = random_state(rng, d, full_rank=True)
    return check_relative_ordering(rho, sigma, p_order, q_order, tol, tag)


def _concavity(rng, d, q, tol, tag):
    theta = float(rng.random())
    rho1, rho2 = random_state(rng, d), random_state(rng, d)
    g, f = random_test_channel(rng, d), random_test_channel(rng, d)
    mixed = theta * rho1 + (1.0 - theta) * rho2

    def ex(r, ch):
        return entropy_exchange(r, ch, q)

    first = InequalityReport(
        "concavity_state", theta * ex(rho1, g) + (1 - theta) * ex(rho2, g), ex(mixed, g), tol, tag
    )
    second = InequalityReport(
        "concavity_channel", theta * ex(rho1, g) + (1 - theta) * ex(rho1, f), ex(rho1, mix_channels(theta, g, f)), tol, tag
    )
    trace_f = InequalityReport(
        "concavity_trace_eta",
        theta * tsallis_entropy_state(rho1, q) + (1 - theta) * tsallis_entropy_state(rho2, q),
        tsallis_entropy_state(mixed, q),
        tol,
        tag,
    )
    return InequalityReport(first.name, first.lhs, first.rhs, tol, tag, (second, trace_f))


def _nonneg(q):
    return q >= 0.0 and math.isfinite(q)


def _above_one(q):
    return q > 1.0 and math.isfinite(q)


def _zero_two(q):
    return 0.0 <= q <= 2.0


def _ordering_ok(q):
    return 0.0 <= q < 1.0 or 1.0 < q <= 2.0


SUITES: dict[str, Suite] = {
    s.name: s
    for s in [
        Suite("fano", 1, (0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0), _nonneg, "q >= 0", _fano),
        Suite("coherent", 2, (1.3, 2.0, 3.0), _above_one, "q > 1", _coherent),
        Suite("subadditivity", 3, (1.5, 2.0, 3.0), _above_one, "q > 1", _subadditivity),
        Suite("monotonicity", 4, Q_GRID_0_2, _zero_two, "0 <= q <= 2", _monotonicity),
        Suite("pinsker", 5, tuple(sorted(Q_GRID_0_2 + (0.5,))), _zero_two, "0 <= q <= 2", _pinsker),
        Suite("ordering", 6, (0.5, 1.5), _ordering_ok, "q in [0, 1) or (1, 2]", _ordering),
        Suite("theorem4", 7, Q_GRID_0_2, _zero_two, "0 <= q <= 2", _theorem4),
        Suite("product_omega", 8, Q_GRID_0_2, _zero_two, "0 <= q <= 2", _product_omega),
        Suite("classical_monotonicity", 9, (0.0, 0.5, 1.0, 1.5, 2.0, 3.0), _nonneg, "q >= 0", _classical),
        Suite("lemma", 10, (), lambda q: True, "unused", _lemma, uses_q=False),
        Suite("concavity", 11, (0.0, 0.5, 1.0, 1.5, 2.0, 3.0), _nonneg, "q >= 0", _concavity),
    ]
}


def resolve_q(suite: Suite, q_values: Sequence[float] | None) -> tuple:
    """Per-instance order parameters for ``suite``; raises ``ValueError`` outside the window."""
    if not suite.uses_q:
        return (None,)
    qs = tuple(float(q) for q in (q_values if q_values else suite.default_q))
    bad = [q for q in qs if not suite.q_ok(q)]
    if bad:
        raise ValueError(f"suite {suite.name!r} requires {suite.window}; got {bad}")
    if suite.name == "ordering":
        uppers = [q for q in qs if q > 1.0]
        lowers = [q for q in qs if q < 1.0]
        if not uppers or not lowers:
            raise ValueError("suite 'ordering' needs at least one order in [0, 1) and one in (1, 2]")
        return tuple((p, q) for q in lowers for p in uppers)
    return qs


def instance_rng(seed: int, suite: Suite, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), suite.ident, int(index)])


def run_instance(suite: Suite, seed: int, index: int, dims: Sequence[int], qs: tuple, tol: float) -> InequalityReport:
    q = qs[index % len(qs)]
    d = int(dims[(index // len(qs)) % len(dims)])
    tag = f"{suite.name}#{index} seed={seed} d={d}"
    if q is not None:
        tag += f" q={q!r}" if not isinstance(q, tuple) else f" p={q[0]!r} q={q[1]!r}"
    return suite.instance(instance_rng(seed, suite, index), d, q, tol, tag)


def run_suite(
    name: str,
    trials: int,
    seed: int,
    dims: Sequence[int] = (2, 3, 4),
    q_values: Sequence[float] | None = None,
    tol: float = TOL.verifier,
    workers: int = 1,
) -> SuiteResult:
    """Run ``trials`` instances of a suite, collecting every violation."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    suite = SUITES[name]
    qs = resolve_q(suite, q_values)

    def work(i):
        return run_instance(suite, seed, i, dims, qs, tol)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(work, range(trials)))
    else:
        reports = [work(i) for i in range(trials)]

    failures = []
    violations = 0
    for rep in reports:
        if not rep.all_satisfied:
            violations += 1
            failures.extend(
                {"instance": f"{c.instance} [{c.name}]", "lhs": c.lhs, "rhs": c.rhs}
                for c in rep.comparisons()
                if not c.satisfied
            )
    worst = min(rep.worst_gap for rep in reports) if reports else math.inf
    return SuiteResult(name, trials, violations, worst, failures, reports)
