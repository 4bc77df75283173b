"""Entropies of strictly positive probability vectors.

``tsallis_relative`` uses the operator-theoretic sign convention
(``S_lam(a|a) = 0`` and ``S_lam <= 0``); ``dq_statistical`` is the usual
statistical-physics form, related by ``S_lam(a|b) = -D_{1-lam}(a|b)``.
Power differences are evaluated as ``a * expm1(lam * log(b / a))`` so that
nothing cancels as ``lam -> 0``.
"""

import math

import numpy as np

from .errors import ParameterError

PROB_SUM_TOL = 1e-12


def as_prob_vector(p, *, allow_zero=False, name="probability vector"):
    """Validate ``p`` as a probability vector and return it as a float array.

    Components must be strictly positive (nonnegative with ``allow_zero``)
    and sum to one within ``1e-12``.
    """
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d array")
    if not np.all(np.isfinite(p)):
        raise ValueError(f"{name} has non-finite components")
    if allow_zero:
        if np.any(p < 0):
            raise ValueError(f"{name} has negative components")
    elif np.any(p <= 0):
        raise ValueError(f"{name} must have strictly positive components")
    if abs(math.fsum(p) - 1.0) > PROB_SUM_TOL:
        raise ValueError(f"{name} does not sum to 1 (sum={math.fsum(p)!r})")
    return p


def _pair(a, b):
    a = as_prob_vector(a, name="a")
    b = as_prob_vector(b, name="b")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.size} vs {b.size}")
    return a, b


def _check_lambda(lam):
    lam = float(lam)
    if not 0.0 < lam <= 1.0:
        raise ParameterError(f"lambda must lie in (0, 1], got {lam!r}")
    return lam


def q_log(x, q):
    """Deformed logarithm ``(x**(1-q) - 1) / (1 - q)``; natural log at ``q = 1``."""
    x = float(x)
    if not x > 0:
        raise ValueError(f"q_log requires x > 0, got {x!r}")
    if q == 1:
        return math.log(x)
    s = 1.0 - q
    return math.expm1(s * math.log(x)) / s


def tsallis_entropy(p, q):
    """Tsallis entropy ``(sum p**q - 1) / (1 - q)``, Shannon entropy at ``q = 1``.

    Zero components are allowed here.  Each term is accumulated as
    ``p * (p**(q-1) - 1)``, which has a fixed sign, so the deterministic
    limit loses no digits.
    """
    q = float(q)
    if not q > 0:
        raise ParameterError(f"q must be positive, got {q!r}")
    p = as_prob_vector(p, allow_zero=True)
    p = p[p > 0]
    logp = np.log(p)
    if q == 1.0:
        return -math.fsum(p * logp)
    return math.fsum(p * np.expm1((q - 1.0) * logp)) / (1.0 - q)


def _relative_kernel(a, b, s):
    # sum_j a_j ((b_j/a_j)**s - 1) / s
    return math.fsum(a * np.expm1(s * np.log(b / a))) / s


def tsallis_relative(a, b, lam):
    """Tsallis relative entropy ``(sum a**(1-lam) b**lam - 1) / lam``, ``0 < lam <= 1``."""
    a, b = _pair(a, b)
    return _relative_kernel(a, b, _check_lambda(lam))


def kl_lower_bound(a, b):
    """``sum a log(b / a)``: the ``lam -> 0`` limit and lower bound of ``tsallis_relative``."""
    a, b = _pair(a, b)
    return math.fsum(a * np.log(b / a))


def prop2_lower_bound(a, b, lam):
    """Lower bound ``((sum a**2 / b)**(-lam) - 1) / lam`` on ``tsallis_relative``."""
    a, b = _pair(a, b)
    lam = _check_lambda(lam)
    chi = math.fsum(a * a / b)
    return math.expm1(-lam * math.log(chi)) / lam


def dq_statistical(a, b, q):
    """Statistical-physics Tsallis relative entropy ``(1 - sum a**q b**(1-q)) / (1 - q)``."""
    a, b = _pair(a, b)
    q = float(q)
    if q < 0 or q == 1.0:
        raise ParameterError(f"q must satisfy q >= 0 and q != 1, got {q!r}")
    return -_relative_kernel(a, b, 1.0 - q)
