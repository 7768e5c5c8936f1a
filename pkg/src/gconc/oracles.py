"""Brute-force references used to sandwich and cross-check the bounds.

Nothing here depends on the witness, the axisymmetric solution or the
normal form; the checks in the test-suite and in ``gconc verify`` rely on
that independence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from .core import dim_of, parallel_map, spawn_rngs
from .pure_measures import cg_unnormalized


def threshold_bisect(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10) -> float:
    """Root of ``f`` on ``[lo, hi]`` by bisection; ``f(lo)`` and ``f(hi)`` must differ in sign."""
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise ValueError(f"no sign change on [{lo}, {hi}]: f = {flo:.3e}, {fhi:.3e}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --------------------------------------------------------------------------
# convex roof from above


@dataclass(frozen=True)
class UpperBoundResult:
    value: float
    trials: int
    best_decomposition_size: int
    history: tuple[float, ...] = ()


def _haar_isometry(m: int, r: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))
    q, rr = np.linalg.qr(g)
    return q * (np.diagonal(rr) / np.abs(np.diagonal(rr)))


def _ensemble_value(U: np.ndarray, V: np.ndarray, d: int) -> float:
    C = (U @ V.T).reshape(U.shape[0], d, d)
    return float(np.sum(cg_unnormalized(C)))


def _smoothed(U: np.ndarray, V: np.ndarray, d: int, eps: float):
    """Smoothed roof average ``d * sum_k (|det C_k|^2 + eps) ** (1/d)`` and its conjugate gradient in ``U``."""
    m = U.shape[0]
    C = (U @ V.T).reshape(m, d, d)
    W, s, Yh = np.linalg.svd(C)
    det2 = np.prod(s * s, axis=1)
    base = det2 + eps
    val = d * np.sum(base ** (1.0 / d))
    # |det|^2 C^{-dagger} = W diag(s_i prod_{j != i} s_j^2) Y^dagger, finite for singular C
    scal = np.empty_like(s)
    for i in range(d):
        scal[:, i] = s[:, i] * np.prod(np.delete(s, i, axis=1) ** 2, axis=1)
    G = np.einsum("kab,kb,kbc->kac", W, scal, Yh)
    G *= (base ** (1.0 / d - 1.0))[:, None, None]
    grad = G.reshape(m, d * d) @ V.conj()
    return val, grad


def _refine(U: np.ndarray, V: np.ndarray, d: int, steps: int) -> np.ndarray:
    """Riemannian gradient descent on the Stiefel manifold with a shrinking smoothing parameter."""
    m = U.shape[0]
    scale = (1.0 / (m * d)) ** d
    # large eta first: the surrogate sum |det C_k|^2 steers toward rank-deficient members
    stages = (1e4, 1e2, 1.0, 1e-2, 1e-4, 1e-6, 1e-9)
    per_stage = max(1, steps // len(stages))
    for eta in stages:
        eps = eta * scale**2
        t = 1.0
        val, grad = _smoothed(U, V, d, eps)
        for _ in range(per_stage):
            Z = -grad
            herm = U.conj().T @ Z
            xi = Z - U @ (0.5 * (herm + herm.conj().T))
            nrm2 = float(np.real(np.vdot(xi, xi)))
            if nrm2 < 1e-30:
                break
            t = min(t * 2.0, 1e6)
            while True:
                Un, rr = np.linalg.qr(U + t * xi)
                Un = Un * (np.diagonal(rr) / np.abs(np.diagonal(rr)))
                nval, ngrad = _smoothed(Un, V, d, eps)
                if nval <= val - 1e-4 * t * nrm2 or t < 1e-14:
                    break
                t *= 0.5
            if nval > val:
                break
            U, val, grad = Un, nval, ngrad
    return U


def convex_roof_upper(
    rho: np.ndarray,
    trials: int = 20,
    seed: int = 0,
    refine_steps: int = 200,
) -> UpperBoundResult:
    """Upper estimate of the convex-roof G-concurrence.

    Trial 0 is the eigen-decomposition. Every other trial draws a Haar
    isometry ``U`` of size ``m x r`` (``r`` the rank, ``r <= m <= 2r``)
    and uses the ensemble ``sqrt(rho) U^T``, which reproduces ``rho`` for
    any isometry. With ``refine_steps > 0`` each ensemble is then improved
    by local descent over the isometry. The value is the running minimum
    of the ensemble averages.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    d = dim_of(rho)
    mu, E = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    keep = mu > 1e-13 * max(mu[-1], 1e-300)
    V = E[:, keep] * np.sqrt(mu[keep])
    r = V.shape[1]

    def run(args):
        idx, rng = args
        if idx == 0:
            U = np.eye(r, dtype=np.complex128)
        else:
            m = int(rng.integers(r, 2 * r + 1))
            U = _haar_isometry(m, r, rng)
        best = _ensemble_value(U, V, d)
        if refine_steps > 0 and r > 1:
            U2 = _refine(U, V, d, refine_steps)
            best = min(best, _ensemble_value(U2, V, d))
        return best, U.shape[0]

    trials = max(1, int(trials))
    rngs = spawn_rngs(seed, trials)
    out = parallel_map(run, list(enumerate(rngs)))
    history = []
    best_val, best_size = math.inf, 0
    for val, size in out:
        if val < best_val:
            best_val, best_size = val, size
        history.append(best_val)
    return UpperBoundResult(
        value=max(0.0, best_val),
        trials=trials,
        best_decomposition_size=best_size,
        history=tuple(history),
    )


# --------------------------------------------------------------------------
# pure-state minimum at fixed fidelity


def _two_value_candidates(d: int, F: float) -> list[np.ndarray]:
    """Feasible Schmidt vectors with ``m`` entries equal to one value and ``d - m`` to another."""
    out = []
    a = math.sqrt(F / d)
    b = math.sqrt((1.0 - F) / d)
    for m in range(1, d):
        for sign in (1.0, -1.0):
            x = a + sign * math.sqrt((d - m) / m) * b
            y = a - sign * math.sqrt(m / (d - m)) * b
            if x >= -1e-15 and y >= -1e-15:
                out.append(np.array([max(x, 0.0)] * m + [max(y, 0.0)] * (d - m)))
    return out


def _objective(lam: np.ndarray, d: int) -> float:
    lam = np.clip(lam, 0.0, None)
    if np.any(lam == 0.0):
        return 0.0
    return float(d * math.exp((2.0 / d) * np.sum(np.log(lam))))


def constrained_cg_min(d: int, F: float, trials: int = 8, seed: int = 0) -> float:
    """Numerically minimize ``d * prod(lam) ** (2/d)`` with ``sum lam = sqrt(d F)``, ``sum lam^2 = 1``, ``lam >= 0``."""
    d = int(d)
    lo = (d - 1) / d
    if not (lo - 1e-12 <= F <= 1.0 + 1e-12):
        raise ValueError(f"F = {F} outside [{lo}, 1]")
    F = min(max(F, lo), 1.0)
    target = math.sqrt(d * F)
    cons = (
        {"type": "eq", "fun": lambda x: np.sum(x) - target, "jac": lambda x: np.ones_like(x)},
        {"type": "eq", "fun": lambda x: np.sum(x * x) - 1.0, "jac": lambda x: 2.0 * x},
    )

    def obj(x):
        # product of squares raised to 1/d; smooth for x > 0
        x = np.clip(x, 1e-300, None)
        return d * math.exp((2.0 / d) * np.sum(np.log(x)))

    def jac(x):
        x = np.clip(x, 1e-300, None)
        return obj(x) * (2.0 / d) / x

    candidates = _two_value_candidates(d, F)
    best = min((_objective(c, d) for c in candidates), default=math.inf)
    if F >= 1.0 - 1e-15:
        return _objective(np.full(d, 1.0 / math.sqrt(d)), d)
    rng = np.random.default_rng(seed)
    starts = list(candidates)
    for _ in range(trials):
        # random feasible point: Dirichlet weights pushed toward the constraint set by the solver
        x0 = rng.dirichlet(np.ones(d)) * target
        starts.append(x0)
    for x0 in starts:
        res = minimize(
            obj,
            np.clip(x0, 1e-6, None),
            jac=jac,
            method="SLSQP",
            bounds=[(0.0, 1.0)] * d,
            constraints=cons,
            options={"ftol": 1e-14, "maxiter": 500},
        )
        x = res.x
        if abs(np.sum(x) - target) < 1e-7 and abs(np.sum(x * x) - 1.0) < 1e-7 and np.all(x >= -1e-9):
            best = min(best, _objective(x, d))
    return float(best)
