"""Cyclic Jacobi eigensolver kernels for dense real symmetric matrices.

Two implementations of the same rotation scheme live here:

* ``jacobi_numba``: row-cyclic sweeps, one plane rotation at a time, compiled
  with numba when it is available.
* ``jacobi_numpy``: round-robin (Brent-Luk) ordering, so each round applies
  ``n // 2`` disjoint rotations at once as a single orthogonal congruence.

A pair ``(p, q)`` is left alone when
``|a_pq| <= max(EPS * sqrt(|a_pp * a_qq|), TINY * scale)``; a sweep that
rotates nothing means convergence.  Both return unsorted eigenvalues.
"""

import math

import numpy as np

from ._accel import njit

EPS = np.finfo(np.float64).eps
TINY = 1e-18
MAX_SWEEPS = 100


@njit(cache=True, nogil=True)
def jacobi_numba(h, max_sweeps):
    n = h.shape[0]
    a = h.copy()
    v = np.eye(n)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale = max(scale, abs(a[i, j]))
    floor = TINY * scale
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                app = a[p, p]
                aqq = a[q, q]
                if abs(apq) <= max(EPS * math.sqrt(abs(app * aqq)), floor):
                    continue
                rotated = True
                theta = (aqq - app) / (2.0 * apq)
                sgn = 1.0 if theta >= 0.0 else -1.0
                t = sgn / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
        if not rotated:
            return np.diag(a).copy(), v, True
    return np.diag(a).copy(), v, False


def _round_robin(n):
    """Disjoint (p, q) index pairs, ``m - 1`` rounds covering all pairs once."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < n and q < n]
        p_idx = np.array([p for p, _ in pairs], dtype=np.intp)
        q_idx = np.array([q for _, q in pairs], dtype=np.intp)
        rounds.append((p_idx, q_idx))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_numpy(h, max_sweeps):
    n = h.shape[0]
    a = np.array(h, dtype=np.float64, copy=True)
    v = np.eye(n)
    floor = TINY * np.max(np.abs(a))
    rounds = _round_robin(n)
    for _ in range(max_sweeps):
        rotated = False
        for p_idx, q_idx in rounds:
            apq = a[p_idx, q_idx]
            app = a[p_idx, p_idx]
            aqq = a[q_idx, q_idx]
            active = np.abs(apq) > np.maximum(EPS * np.sqrt(np.abs(app * aqq)), floor)
            if not active.any():
                continue
            rotated = True
            p, q = p_idx[active], q_idx[active]
            apq, app, aqq = apq[active], app[active], aqq[active]
            theta = (aqq - app) / (2.0 * apq)
            t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            rot = np.eye(n)
            rot[p, p] = c
            rot[q, q] = c
            rot[p, q] = s
            rot[q, p] = -s
            a = rot.T @ a @ rot
            a = 0.5 * (a + a.T)
            a[p, q] = 0.0
            a[q, p] = 0.0
            v = v @ rot
        if not rotated:
            return np.diag(a).copy(), v, True
    return np.diag(a).copy(), v, False
