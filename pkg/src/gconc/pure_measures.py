"""Entanglement monotones of pure bipartite states."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import as_pure_state, dm_from_pure, partial_trace


def cg_pure(psi) -> float:
    """G-concurrence ``d * (prod of Schmidt coefficients) ** (2/d)``.

    Computed from singular values; the determinant form underflows for
    large ``d`` with small coefficients. Use :func:`cg_pure_det` as a
    cross-check in low dimension.
    """
    c = as_pure_state(psi, max_dim=1 << 12)
    d = c.shape[0]
    lam = np.linalg.svd(c, compute_uv=False)
    # numerical rank cut as in numpy.linalg.matrix_rank; the 2/d root would
    # otherwise turn a 1e-16 rounding residue into a visible 1e-8
    if lam[-1] <= d * np.finfo(float).eps * lam[0]:
        return 0.0
    # geometric mean through logs keeps d = 64 products representable
    return float(min(d * math.exp(2.0 * np.mean(np.log(lam))), 1.0))


def cg_pure_det(psi) -> float:
    c = as_pure_state(psi)
    d = c.shape[0]
    return float(d * abs(np.linalg.det(c)) ** (2.0 / d))


def cg_unnormalized(c: np.ndarray) -> np.ndarray:
    """``d * |det c| ** (2/d)`` for a stack of unnormalized amplitude matrices.

    Degree-1 homogeneous in ``|c|**2``, so ``cg_unnormalized(sqrt(p) c) = p * cg_pure(c)``.
    """
    c = np.asarray(c)
    d = c.shape[-1]
    s = np.linalg.svd(c, compute_uv=False)
    with np.errstate(divide="ignore"):
        logs = np.log(s)
    return d * np.exp(2.0 * np.mean(logs, axis=-1))


def c2_pure(psi) -> float:
    """Normalized 2-concurrence ``sqrt(d/(d-1) * (1 - Tr rho_A**2))``."""
    c = as_pure_state(psi)
    d = c.shape[0]
    rho_a = partial_trace(dm_from_pure(c), "A")
    purity = float(np.real(np.trace(rho_a @ rho_a)))
    return math.sqrt(max(0.0, d / (d - 1) * (1.0 - purity)))


def cg_pure_lower(psi) -> float:
    """Polynomial lower bound on :func:`cg_pure` built from diagonal and permuted amplitudes.

    ``sum_{i != j} c_ii conj(c_jj) - (d - 2) sum_i |c_ii|^2
    - d sum_{s != id} |prod_i c_{i s(i)}| ** (2/d)``. May be negative.
    """
    c = as_pure_state(psi)
    d = c.shape[0]
    diag = np.diagonal(c)
    cross = abs(np.sum(diag)) ** 2 - np.sum(np.abs(diag) ** 2)
    diag_term = (d - 2) * np.sum(np.abs(diag) ** 2)
    perm_term = d * _kernels.perm_root_sum(np.abs(c) ** 2)
    return float(cross - diag_term - perm_term)


@dataclass(frozen=True)
class PureCurvePoint:
    F: float
    alpha: float
    beta: float
    cg: float


def cg_of_F(d: int, F: float) -> PureCurvePoint:
    """Minimum of the pure-state G-concurrence at fixed fidelity ``F >= (d-1)/d``.

    The minimizer has one small Schmidt coefficient ``alpha`` and ``d - 1``
    equal ones ``beta``.
    """
    d = int(d)
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    lo = (d - 1) / d
    if not (lo - 1e-15 <= F <= 1.0 + 1e-15):
        raise ValueError(f"F = {F} outside [{lo}, 1]")
    F = min(max(F, lo), 1.0)
    sF = math.sqrt(F)
    s1 = math.sqrt(1.0 - F)
    # cancellation-free form of sqrt(F) - sqrt((d-1)(1-F))
    gap = d * F - (d - 1)
    if gap <= 4 * d * np.finfo(float).eps:
        gap = 0.0
    alpha = max(gap / (sF + math.sqrt(d - 1) * s1) / math.sqrt(d), 0.0)
    beta = (sF + s1 / math.sqrt(d - 1)) / math.sqrt(d)
    if alpha == 0.0:
        cg = 0.0
    else:
        cg = d * math.exp((2.0 / d) * (math.log(alpha) + (d - 1) * math.log(beta)))
    return PureCurvePoint(F=F, alpha=alpha, beta=beta, cg=min(cg, 1.0))
