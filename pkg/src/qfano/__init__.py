"""Tsallis q-entropy functionals for quantum channels and numerical checks of
the Fano-, Pinsker- and monotonicity-type inequalities they satisfy."""

from qfano.config import DEFAULT_TOLERANCES, Tolerances
from qfano.linalg import (
    ConvergenceError,
    DomainError,
    EigenSystem,
    JordanSplit,
    hermitian,
    hermitian_eig,
    jacobi_eigh,
    jordan_split,
    matrix_function,
    partial_trace,
    tensor,
    trace_norm,
)
from qfano.states import (
    PurifiedState,
    make_density,
    make_probability,
    purify,
    random_mixed,
    random_pure,
    random_unitary,
)
from qfano.channels import (
    KrausChannel,
    apply,
    joint_output,
    make_channel,
    mix_channels,
    pinching_channel,
    random_channel,
    regauge,
    standard_channel,
)
from qfano.entropies import (
    binary_entropy,
    eta,
    q_log,
    relative_entropy_binary,
    relative_entropy_classical,
    relative_entropy_quantum,
    tsallis_entropy_state,
    tsallis_entropy_vec,
)
from qfano.exchange import (
    coherent_q_information,
    entanglement_fidelity,
    entropy_exchange,
    w_matrix,
)

__version__ = "0.1.0"
