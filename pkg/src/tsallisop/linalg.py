"""Spectral calculus on dense real symmetric matrices.

Every matrix function in the package goes through :func:`eigh`, which runs a
cyclic Jacobi eigensolver (numba-compiled unless ``TSALLISOP_DISABLE_NUMBA``
is set).  Matrices are plain ``numpy.ndarray`` objects; functions symmetrize
their inputs and outputs as ``(H + H.T) / 2``.
"""

from typing import Callable, NamedTuple

import numpy as np

from . import _accel, _kernels
from .errors import ConvergenceError, DomainError, NotStrictlyPositiveError

#: Relative floor below which a matrix is not considered strictly positive.
POSITIVITY_FLOOR = 1e-10


class EigenDecomposition(NamedTuple):
    """Ascending eigenvalues and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return symmetrize((v * self.eigenvalues) @ v.T)


class LoewnerResult(NamedTuple):
    holds: bool
    violation: float
    scale: float

    @property
    def relative_violation(self):
        return self.violation / self.scale


def symmetrize(h):
    return 0.5 * (h + h.T)


def as_symmetric(h):
    """Validate a square finite matrix and return its symmetric part as float64."""
    h = np.asarray(h, dtype=np.float64)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise ValueError("matrix has non-finite entries")
    return symmetrize(h)


def max_norm(h):
    return float(np.max(np.abs(h)))


def _check_same_shape(x, y):
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")


def eigh(h, *, max_sweeps=_kernels.MAX_SWEEPS):
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Raises
    ------
    ConvergenceError
        If the off-diagonal part has not vanished after ``max_sweeps`` sweeps.
    """
    h = as_symmetric(h)
    if h.shape[0] == 1:
        return EigenDecomposition(h[0].copy(), np.ones((1, 1)))
    kernel = _kernels.jacobi_numba if _accel.USE_NUMBA else _kernels.jacobi_numpy
    w, v, converged = kernel(np.ascontiguousarray(h), max_sweeps)
    if not converged:
        raise ConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(w[order], np.ascontiguousarray(v[:, order]))


def from_spectrum(eig, values):
    """``V diag(values) V^T`` for a precomputed decomposition."""
    v = eig.eigenvectors
    return symmetrize((v * values) @ v.T)


def apply_spectral(h, f: Callable[[np.ndarray], np.ndarray], eig=None):
    """Apply ``f`` to the eigenvalues of ``h``: ``V diag(f(w)) V^T``.

    ``f`` is called once with the full eigenvalue array.  A non-finite value
    of ``f`` at a finite eigenvalue raises :class:`DomainError` carrying that
    eigenvalue.
    """
    if eig is None:
        eig = eigh(h)
    w = eig.eigenvalues
    with np.errstate(all="ignore"):
        fw = np.asarray(f(w), dtype=np.float64)
    if fw.shape != w.shape:
        fw = np.broadcast_to(fw, w.shape)
    bad = ~np.isfinite(fw)
    if bad.any():
        ev = float(w[np.argmax(bad)])
        raise DomainError(f"function undefined at eigenvalue {ev:.6g}", eigenvalue=ev)
    return from_spectrum(eig, fw)


def positivity_threshold(h):
    return POSITIVITY_FLOOR * (1.0 + max_norm(h))


def check_strictly_positive(h, eig=None, name="matrix"):
    """Raise :class:`NotStrictlyPositiveError` unless ``h`` clears the positivity floor."""
    if eig is None:
        eig = eigh(h)
    lo = float(eig.eigenvalues[0])
    if lo < positivity_threshold(h):
        raise NotStrictlyPositiveError(
            f"{name} not strictly positive: min eigenvalue {lo:.6g}", eigenvalue=lo
        )
    return eig


def is_strictly_positive(h):
    h = as_symmetric(h)
    return float(eigh(h).eigenvalues[0]) >= positivity_threshold(h)


def power(h, p, eig=None):
    """Real matrix power ``h**p`` via the spectrum.

    Nonnegative integer powers are accepted for any symmetric ``h``; negative
    or fractional powers require ``h`` strictly positive.
    """
    h = as_symmetric(h)
    p = float(p)
    if p == 0.0:
        return np.eye(h.shape[0])
    if p == 1.0:
        return h
    if eig is None:
        eig = eigh(h)
    if p < 0 or not p.is_integer():
        check_strictly_positive(h, eig)
        return from_spectrum(eig, np.exp(p * np.log(eig.eigenvalues)))
    return from_spectrum(eig, eig.eigenvalues ** p)


def logm(h, eig=None):
    """Principal matrix logarithm of a strictly positive matrix."""
    h = as_symmetric(h)
    if eig is None:
        eig = eigh(h)
    check_strictly_positive(h, eig)
    return from_spectrum(eig, np.log(eig.eigenvalues))


def congruence(c, h):
    """``C H C`` (``C`` symmetric), symmetrized."""
    c = np.asarray(c, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    _check_same_shape(c, h)
    return symmetrize(c @ h @ c)


def min_eigenvalue(h):
    return float(eigh(h).eigenvalues[0])


def loewner_leq(x, y, tol=0.0):
    """Test ``X <= Y`` in the Loewner order.

    ``holds`` is true when ``min eig(Y - X) >= -tol * scale`` with
    ``scale = 1 + max(|X|_max, |Y|_max)``; ``violation`` is
    ``max(0, -min eig(Y - X))`` in absolute units.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    x = as_symmetric(x)
    y = as_symmetric(y)
    _check_same_shape(x, y)
    scale = 1.0 + max(max_norm(x), max_norm(y))
    lo = min_eigenvalue(y - x)
    return LoewnerResult(lo >= -tol * scale, max(0.0, -lo), scale)
