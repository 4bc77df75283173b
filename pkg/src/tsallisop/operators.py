"""Operator-valued relative entropies of strictly positive matrices.

All functionals of a pair ``(A, B)`` are spectral functions of
``X = A^{-1/2} B A^{-1/2}`` sandwiched by ``A^{1/2}``.  :class:`OperatorPair`
performs the eigendecompositions once, so evaluating many parameters for the
same pair reuses the same spectra::

    pair = OperatorPair(A, B)
    pair.natural_power(0.5)              # A #_{1/2} B
    pair.tsallis(0.3)                    # (A #_{0.3} B - A) / 0.3
    pair.generalized_tsallis(0.0, 2, 1)  # B A^{-1} B - B

The module-level functions are one-shot wrappers around it.
"""

import math

import numpy as np

from . import linalg
from .errors import DomainError, NotStrictlyPositiveError, ParameterError

DENSITY_TRACE_TOL = 1e-12


class OperatorPair:
    """Shared spectral data for a pair of strictly positive matrices.

    Two decompositions back the functionals: ``X = A^{-1/2} B A^{-1/2}`` for
    nonnegative exponents and ``X^{-1} = A^{1/2} B^{-1} A^{1/2}`` (built on
    first use) for negative ones.  Small eigenvalues of ``X`` are only known
    to ``eps * |X|`` absolutely, so negative powers taken on the ``X`` side
    would amplify that error by up to ``cond(X)``.
    """

    def __init__(self, a, b):
        a = linalg.as_symmetric(a)
        b = linalg.as_symmetric(b)
        if a.shape != b.shape:
            raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
        eig_a = linalg.check_strictly_positive(a, name="matrix A")
        self._eig_b = linalg.check_strictly_positive(b, name="matrix B")
        wa = eig_a.eigenvalues
        self.a = a
        self.b = b
        self.a_half = linalg.from_spectrum(eig_a, np.sqrt(wa))
        a_mhalf = linalg.from_spectrum(eig_a, 1.0 / np.sqrt(wa))
        self.x = linalg.congruence(a_mhalf, b)
        self._backward = None
        if a.shape[0] == 1:
            # scalar case: log1p keeps relative accuracy near b = a, log(b/a) away from it
            d = (b[0] - a[0]) / a[0]
            ell = np.log1p(d) if abs(d) < 0.5 else np.log(b[0] / a[0])
            self._forward = self._backward = (self.a_half.copy(), ell)
        else:
            self._forward = self._side(self.x, 1.0)

    def _side(self, m, sign):
        eig = linalg.eigh(m)
        s = eig.eigenvalues
        if s[0] <= 0:
            raise NotStrictlyPositiveError(
                f"congruence of B by A lost positivity: min eigenvalue {s[0]:.6g}",
                eigenvalue=float(s[0]),
            )
        # (A^{1/2} V, log-eigenvalues of X in that basis)
        return self.a_half @ eig.eigenvectors, sign * np.log(s)

    def _basis(self, exponent):
        if exponent >= 0:
            return self._forward
        if self._backward is None:
            wb = self._eig_b.eigenvalues
            b_inv = linalg.from_spectrum(self._eig_b, 1.0 / wb)
            self._backward = self._side(linalg.congruence(self.a_half, b_inv), -1.0)
        return self._backward

    @property
    def spectrum(self):
        """Eigenvalues of ``X`` (ascending)."""
        return np.exp(self._forward[1])

    def _apply(self, exponent, f):
        """``A^{1/2} f(log X) A^{1/2}``, evaluated on the side chosen by ``exponent``."""
        w, ell = self._basis(exponent)
        return linalg.symmetrize((w * f(ell)) @ w.T)

    def natural_power(self, lam):
        """``A #_lam B = A^{1/2} X^lam A^{1/2}``; exactly ``A`` at 0 and ``B`` at 1."""
        lam = float(lam)
        if lam == 0.0:
            return self.a.copy()
        if lam == 1.0:
            return self.b.copy()
        return self._apply(lam, lambda ell: np.exp(lam * ell))

    def tsallis(self, lam, *, relaxed=False):
        """``(A #_lam B - A) / lam``.

        ``lam`` must lie in ``(0, 1]`` unless ``relaxed`` is set, in which
        case any nonzero value is evaluated.
        """
        lam = float(lam)
        if lam == 0.0:
            raise ParameterError("lambda must be nonzero")
        if not relaxed and not 0.0 < lam <= 1.0:
            raise ParameterError(f"lambda must lie in (0, 1] (pass relaxed=True to extend), got {lam!r}")
        return self._apply(lam, lambda ell: np.expm1(lam * ell) / lam)

    def relative_entropy(self):
        """Relative operator entropy ``A^{1/2} log(X) A^{1/2}``."""
        return self._apply(0.0, lambda ell: ell)

    def generalized_relative_entropy(self, lam):
        """``A^{1/2} X^lam log(X) A^{1/2}``; equals :meth:`relative_entropy` at 0."""
        lam = float(lam)
        return self._apply(lam, lambda ell: np.exp(lam * ell) * ell)

    def generalized_tsallis(self, mu, k, lam):
        """``(A #_{mu+k lam} B - A #_{mu+(k-1) lam} B) / lam`` for integer ``k``."""
        lam = float(lam)
        if lam == 0.0:
            raise ParameterError("lambda must be nonzero")
        if int(k) != k:
            raise ParameterError(f"k must be an integer, got {k!r}")
        base = float(mu) + (int(k) - 1) * lam
        return self._apply(base + 0.5 * lam, lambda ell: np.exp(base * ell) * np.expm1(lam * ell) / lam)


def natural_power(a, b, lam):
    return OperatorPair(a, b).natural_power(lam)


def tsallis_operator(a, b, lam, *, relaxed=False):
    """Tsallis relative operator entropy ``(A #_lam B - A) / lam``."""
    return OperatorPair(a, b).tsallis(lam, relaxed=relaxed)


def relative_operator_entropy(a, b):
    return OperatorPair(a, b).relative_entropy()


def generalized_roe(a, b, lam):
    return OperatorPair(a, b).generalized_relative_entropy(lam)


def generalized_tsallis(a, b, mu, k, lam):
    return OperatorPair(a, b).generalized_tsallis(mu, k, lam)


def as_density_matrix(rho, name="density matrix"):
    """Validate a strictly positive unit-trace matrix; returns ``(rho, eig)``."""
    rho = linalg.as_symmetric(rho)
    eig = linalg.check_strictly_positive(rho, name=name)
    tr = math.fsum(np.diag(rho))
    if abs(tr - 1.0) > DENSITY_TRACE_TOL:
        raise DomainError(f"{name} does not have unit trace (trace={tr!r})")
    return rho, eig


def quantum_tsallis(rho, sigma, q):
    """``(1 - tr(rho^q sigma^(1-q))) / (1 - q)`` for ``0 <= q < 1``."""
    q = float(q)
    if not 0.0 <= q < 1.0:
        raise ParameterError(f"q must lie in [0, 1), got {q!r}")
    rho, eig_r = as_density_matrix(rho, "rho")
    sigma, eig_s = as_density_matrix(sigma, "sigma")
    if rho.shape != sigma.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    rq = linalg.power(rho, q, eig_r)
    sq = linalg.power(sigma, 1.0 - q, eig_s)
    tr = math.fsum((rq * sq).ravel())
    return (1.0 - tr) / (1.0 - q)
