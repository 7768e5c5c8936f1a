"""Hot inner loops, compiled with numba when available.

Each kernel has a numba implementation and a pure-numpy fallback with the
same signature. The dispatching names (``perm_root_sum``, ``phase_ascent``)
pick the numba path unless ``GCONC_DISABLE_NUMBA`` is set to a truthy value
or numba cannot be imported. Both paths stay importable so tests and the
benchmark can compare them directly.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

_DISABLED = os.environ.get("GCONC_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _DISABLED

_CHUNK = 20_000


def perm_root_sum_numpy(P: np.ndarray) -> float:
    """Sum of ``(prod_i P[i, s(i)]) ** (1/d)`` over all non-identity permutations ``s``."""
    P = np.ascontiguousarray(P, dtype=np.float64)
    d = P.shape[0]
    rows = np.arange(d)
    inv_d = 1.0 / d
    total = 0.0
    perms = itertools.permutations(range(d))
    next(perms)  # identity comes first in lexicographic order
    while True:
        block = np.array(list(itertools.islice(perms, _CHUNK)), dtype=np.int64)
        if block.size == 0:
            break
        prods = P[rows, block].prod(axis=1)
        total += float(np.sum(prods**inv_d))
    return total


def phase_ascent_numpy(M: np.ndarray, v: np.ndarray, tol: float, max_sweeps: int):
    """Cyclic coordinate ascent of ``Re(v^H M v)`` over unit-modulus ``v``.

    ``M`` must be Hermitian. Returns the updated vector, the objective and
    the number of sweeps performed.
    """
    M = np.ascontiguousarray(M, dtype=np.complex128)
    v = np.array(v, dtype=np.complex128)
    d = v.shape[0]
    obj = float(np.real(np.vdot(v, M @ v)))
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        for j in range(d):
            s = M[j] @ v - M[j, j] * v[j]
            mag = abs(s)
            if mag > 0.0:
                v[j] = s / mag
        new = float(np.real(np.vdot(v, M @ v)))
        done = new - obj < tol
        obj = new
        if done:
            break
    return v, obj, sweeps


if HAVE_NUMBA:

    @njit(cache=True)
    def perm_root_sum_numba(P):
        d = P.shape[0]
        inv_d = 1.0 / d
        total = 0.0
        perm = np.empty(d, np.int64)
        used = np.zeros(d, np.bool_)
        prefix = np.ones(d + 1)
        fixed = np.zeros(d + 1, np.int64)
        nxt = np.zeros(d, np.int64)
        level = 0
        while level >= 0:
            if level == d:
                if fixed[d] != d:
                    total += prefix[d] ** inv_d
                level -= 1
                used[perm[level]] = False
                continue
            placed = False
            c = nxt[level]
            while c < d:
                if not used[c]:
                    val = prefix[level] * P[level, c]
                    if val != 0.0:
                        perm[level] = c
                        used[c] = True
                        prefix[level + 1] = val
                        fixed[level + 1] = fixed[level] + (1 if c == level else 0)
                        nxt[level] = c + 1
                        if level + 1 < d:
                            nxt[level + 1] = 0
                        level += 1
                        placed = True
                        break
                c += 1
            if not placed:
                nxt[level] = 0
                level -= 1
                if level >= 0:
                    used[perm[level]] = False
        return total

    @njit(cache=True)
    def phase_ascent_numba(M, v, tol, max_sweeps):
        d = v.shape[0]
        v = v.copy()
        obj = 0.0
        for i in range(d):
            for j in range(d):
                obj += (np.conj(v[i]) * M[i, j] * v[j]).real
        sweeps = 0
        for sweep in range(1, max_sweeps + 1):
            sweeps = sweep
            for j in range(d):
                s = 0.0 + 0.0j
                for i in range(d):
                    if i != j:
                        s += M[j, i] * v[i]
                mag = abs(s)
                if mag > 0.0:
                    v[j] = s / mag
            new = 0.0
            for i in range(d):
                for j in range(d):
                    new += (np.conj(v[i]) * M[i, j] * v[j]).real
            done = new - obj < tol
            obj = new
            if done:
                break
        return v, obj, sweeps

else:  # pragma: no cover
    perm_root_sum_numba = None
    phase_ascent_numba = None


def perm_root_sum(P: np.ndarray) -> float:
    if USE_NUMBA:
        return float(perm_root_sum_numba(np.ascontiguousarray(P, dtype=np.float64)))
    return perm_root_sum_numpy(P)


def phase_ascent(M: np.ndarray, v: np.ndarray, tol: float = 1e-12, max_sweeps: int = 10_000):
    if USE_NUMBA:
        v, obj, sweeps = phase_ascent_numba(
            np.ascontiguousarray(M, dtype=np.complex128),
            np.ascontiguousarray(v, dtype=np.complex128),
            tol,
            max_sweeps,
        )
        return v, float(obj), int(sweeps)
    return phase_ascent_numpy(M, v, tol, max_sweeps)
