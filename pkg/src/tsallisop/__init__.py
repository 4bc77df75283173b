"""Tsallis relative operator entropies and numerical certification of their inequalities."""

__version__ = "0.1.0"

from .errors import ConvergenceError, DomainError, NotStrictlyPositiveError, ParameterError
from .linalg import (
    EigenDecomposition,
    apply_spectral,
    congruence,
    eigh,
    logm,
    loewner_leq,
    min_eigenvalue,
    power,
)
from .operators import (
    OperatorPair,
    generalized_roe,
    generalized_tsallis,
    natural_power,
    quantum_tsallis,
    relative_operator_entropy,
    tsallis_operator,
)
from .scalar import (
    dq_statistical,
    kl_lower_bound,
    prop2_lower_bound,
    q_log,
    tsallis_entropy,
    tsallis_relative,
)
