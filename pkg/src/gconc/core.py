"""States, validation and exact linear-algebra primitives.

States are plain numpy arrays. A pure state is a ``d x d`` complex amplitude
matrix ``c`` with ``c[j, k]`` the coefficient of ``|jk>``; a density matrix is
``d**2 x d**2`` with composite index ``j * d + k``. The ``as_*`` helpers
validate and return fresh arrays; everything else is a pure function.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np
from scipy.stats import unitary_group

MAX_DIM = 16

PURE_NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = -1e-9

T = TypeVar("T")
R = TypeVar("R")


class InvalidStateError(ValueError):
    """Raised when an input violates a state invariant."""


# --------------------------------------------------------------------------
# validation


def _check_dim(d: int, max_dim: int = MAX_DIM) -> int:
    d = int(d)
    if d < 2:
        raise InvalidStateError(f"local dimension must be >= 2, got {d}")
    if d > max_dim:
        raise InvalidStateError(f"local dimension {d} exceeds cap {max_dim}")
    return d


def dim_of(rho: np.ndarray) -> int:
    """Local dimension ``d`` of a ``d**2 x d**2`` operator."""
    n = rho.shape[0]
    d = math.isqrt(n)
    if rho.ndim != 2 or rho.shape != (n, n) or d * d != n:
        raise InvalidStateError(f"expected a square d^2 x d^2 matrix, got shape {rho.shape}")
    return d


def as_pure_state(c, max_dim: int = MAX_DIM, normalize: bool = False) -> np.ndarray:
    """Validate a pure state and return its ``d x d`` amplitude matrix.

    Accepts the matrix itself or a flat vector of length ``d**2`` in
    row-major order. With ``normalize=True`` a nonzero input is rescaled to
    unit norm instead of being rejected.
    """
    c = np.array(c, dtype=np.complex128)
    if c.ndim == 1:
        d = math.isqrt(c.size)
        if d * d != c.size:
            raise InvalidStateError(f"vector length {c.size} is not a perfect square")
        c = c.reshape(d, d)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise InvalidStateError(f"amplitude matrix must be square d x d, got shape {c.shape}")
    _check_dim(c.shape[0], max_dim)
    if not np.all(np.isfinite(c)):
        raise InvalidStateError("amplitudes contain non-finite values")
    norm = np.linalg.norm(c)
    if normalize:
        if norm == 0:
            raise InvalidStateError("zero vector cannot be normalized")
        return c / norm
    if abs(norm**2 - 1.0) > PURE_NORM_TOL:
        raise InvalidStateError(f"pure state not normalized: sum |c|^2 = {norm**2:.15g}")
    return c


def as_density_matrix(rho, max_dim: int = MAX_DIM) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, numerically PSD."""
    rho = np.array(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"density matrix must be square, got shape {rho.shape}")
    _check_dim(dim_of(rho), max_dim)
    if not np.all(np.isfinite(rho)):
        raise InvalidStateError("density matrix contains non-finite values")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERMITIAN_TOL:
        raise InvalidStateError(f"not Hermitian: residual {herm:.3e} > {HERMITIAN_TOL:g}")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"trace must be 1: got {tr:.15g}")
    lmin = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if lmin < PSD_TOL:
        raise InvalidStateError(f"not positive semidefinite: min eigenvalue {lmin:.3e}")
    return rho


def as_unnormalized_state(tau, max_dim: int = MAX_DIM) -> np.ndarray:
    """Validate a Hermitian PSD operator with trace in ``(0, 1]``."""
    tau = np.array(tau, dtype=np.complex128)
    _check_dim(dim_of(tau), max_dim)
    herm = np.max(np.abs(tau - tau.conj().T))
    if herm > HERMITIAN_TOL:
        raise InvalidStateError(f"not Hermitian: residual {herm:.3e}")
    tr = np.trace(tau).real
    if not 0.0 < tr <= 1.0 + TRACE_TOL:
        raise InvalidStateError(f"trace must lie in (0, 1]: got {tr:.15g}")
    lmin = np.linalg.eigvalsh(0.5 * (tau + tau.conj().T))[0]
    if lmin < PSD_TOL * max(tr, 1e-300):
        raise InvalidStateError(f"not positive semidefinite: min eigenvalue {lmin:.3e}")
    return tau


# --------------------------------------------------------------------------
# primitives


def dm_from_pure(psi) -> np.ndarray:
    c = as_pure_state(psi)
    v = c.reshape(-1)
    return np.outer(v, v.conj())


def partial_trace(rho: np.ndarray, side: str = "A") -> np.ndarray:
    """Reduced state on ``side`` (``"A"`` keeps the first factor)."""
    d = dim_of(rho)
    t = np.asarray(rho).reshape(d, d, d, d)
    side = side.upper()
    if side == "A":
        return np.einsum("ikjk->ij", t)
    if side == "B":
        return np.einsum("kikj->ij", t)
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def schmidt(psi) -> np.ndarray:
    """Schmidt coefficients, nonincreasing, squares summing to one."""
    c = as_pure_state(psi)
    return np.linalg.svd(c, compute_uv=False)


def max_entangled(d: int) -> np.ndarray:
    d = _check_dim(d, max_dim=max(d, 2))
    return np.eye(d, dtype=np.complex128) / math.sqrt(d)


def phi_projector(d: int) -> np.ndarray:
    v = max_entangled(d).reshape(-1)
    return np.outer(v, v.conj())


def fidelity_phi(rho: np.ndarray) -> float:
    """Overlap ``<Phi_d|rho|Phi_d>``, read from the ``<jj|rho|kk>`` block."""
    d = dim_of(rho)
    idx = np.arange(d) * (d + 1)
    f = np.sum(np.asarray(rho)[np.ix_(idx, idx)]).real / d
    return float(min(max(f, 0.0), 1.0))


def hs_distance(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise InvalidStateError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def apply_local(rho: np.ndarray, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """``(A x B) rho (A x B)^dagger`` without renormalization.

    Raises
    ------
    InvalidStateError
        If ``A`` or ``B`` is singular or has the wrong size.
    """
    d = dim_of(rho)
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    for name, m in (("A", A), ("B", B)):
        if m.shape != (d, d):
            raise InvalidStateError(f"local operator {name} must be {d}x{d}, got {m.shape}")
        s = np.linalg.svd(m, compute_uv=False)
        if s[-1] <= 1e-14 * max(s[0], 1e-300):
            raise InvalidStateError(f"local operator {name} is singular")
    K = np.kron(A, B)
    return K @ np.asarray(rho) @ K.conj().T


# --------------------------------------------------------------------------
# random states (used by oracles, tests and the verify command)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    if d == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    return unitary_group.rvs(d, random_state=rng)


def random_pure(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Haar-random pure state, optionally restricted to Schmidt rank ``<= rank``."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    if rank is not None and rank < d:
        left = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
        right = rng.standard_normal((rank, d)) + 1j * rng.standard_normal((rank, d))
        g = left @ right
    return g / np.linalg.norm(g)


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density matrix of the given rank (Hilbert-Schmidt measure when full rank)."""
    n = d * d
    r = n if rank is None else int(rank)
    g = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def isotropic(d: int, p: float) -> np.ndarray:
    """``p |Phi_d><Phi_d| + (1 - p) identity / d**2``."""
    return p * phi_projector(d) + (1.0 - p) * np.eye(d * d) / d**2


# --------------------------------------------------------------------------
# deterministic parallel map


def thread_count() -> int:
    env = os.environ.get("GCONC_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Map ``fn`` over ``items`` with results in input order.

    Uses up to ``GCONC_THREADS`` worker threads (default: all cores). Every
    task must be deterministic on its own; the ordering of the output makes
    reductions independent of scheduling.
    """
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def spawn_rngs(seed: int, n: int) -> Sequence[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]
