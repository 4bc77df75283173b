"""Seeded random instances: SPD matrices, identity partitions, probability vectors."""

import numpy as np

from . import linalg
from .errors import DomainError

PARTITION_SUM_TOL = 1e-11
PARTITION_ATTEMPTS = 10
PROB_FLOOR = 1e-3


def _rng(rng):
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def random_orthogonal(dim, rng):
    """Haar-distributed orthogonal matrix (QR of a Gaussian with sign correction)."""
    rng = _rng(rng)
    z = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    return q * np.where(np.diag(r) < 0, -1.0, 1.0)


def random_spd(dim, condition_cap, rng):
    """Random SPD matrix with eigenvalues log-uniform in ``[cap**-0.5, cap**0.5]``."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if condition_cap < 1:
        raise ValueError("condition_cap must be >= 1")
    rng = _rng(rng)
    half = 0.5 * np.log(condition_cap)
    w = np.exp(rng.uniform(-half, half, size=dim))
    q = random_orthogonal(dim, rng)
    return linalg.symmetrize((q * w) @ q.T)


def random_partition(n, dim, rng, condition_cap=1e4):
    """``n`` strictly positive ``dim x dim`` blocks summing to the identity.

    Draws SPD ``M_j`` and normalizes ``A_j = S^{-1/2} M_j S^{-1/2}`` with
    ``S = sum M_j``.  Draws failing the positivity floor or the ``1e-11``
    sum check are redrawn, at most 10 times.
    """
    if n < 1 or dim < 1:
        raise ValueError("n and dim must be >= 1")
    if n == 1:
        return [np.eye(dim)]
    rng = _rng(rng)
    eye = np.eye(dim)
    for _ in range(PARTITION_ATTEMPTS):
        ms = [random_spd(dim, condition_cap, rng) for _ in range(n)]
        s = sum(ms)
        try:
            s_mhalf = linalg.power(s, -0.5)
        except DomainError:
            continue
        blocks = [linalg.congruence(s_mhalf, m) for m in ms]
        if linalg.max_norm(sum(blocks) - eye) > PARTITION_SUM_TOL:
            continue
        if all(linalg.is_strictly_positive(blk) for blk in blocks):
            return blocks
    raise RuntimeError(f"could not draw a valid partition in {PARTITION_ATTEMPTS} attempts")


def random_prob_vector(n, rng):
    """Strictly positive probability vector with every component at least ``1e-3``.

    For ``n >= 500`` the floor shrinks to ``0.5 / n`` so that it stays feasible.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return np.ones(1)
    rng = _rng(rng)
    floor = min(PROB_FLOOR, 0.5 / n)
    u = rng.uniform(0.0, 1.0, size=n) + 1e-12
    p = floor + (1.0 - n * floor) * (u / u.sum())
    return p / p.sum()
