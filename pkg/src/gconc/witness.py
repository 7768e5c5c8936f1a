"""Nonlinear witness lower bound on the mixed-state G-concurrence.

The bound reads only two small blocks of the density matrix: the ``d**2``
populations ``<jk|rho|jk>`` and the coherences ``<ii|rho|jj>``. Everything
here goes through :func:`witness_inputs`, which extracts exactly those
entries, so the access pattern can be audited with
:func:`accessed_entries`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .core import MAX_DIM, dim_of, isotropic, parallel_map, spawn_rngs
from .oracles import threshold_bisect


@dataclass(frozen=True)
class WitnessResult:
    raw: float
    clamped: float
    positive_term: float
    diagonal_term: float
    permutation_term: float
    phases_applied: tuple[float, ...] | None = None

    def as_dict(self) -> dict:
        return {
            "raw": self.raw,
            "clamped": self.clamped,
            "positive_term": self.positive_term,
            "diagonal_term": self.diagonal_term,
            "permutation_term": self.permutation_term,
            "phases_applied": None if self.phases_applied is None else list(self.phases_applied),
        }


def accessed_entries(d: int) -> list[tuple[int, int]]:
    """Matrix positions read by the witness: populations, then upper-triangle coherences.

    There are ``d**2 + d*(d-1)/2`` of them. The lower-triangle coherences
    are recovered by Hermiticity.
    """
    pops = [(i, i) for i in range(d * d)]
    coh = [(i * (d + 1), j * (d + 1)) for i in range(d) for j in range(i + 1, d)]
    return pops + coh


def witness_inputs(rho: np.ndarray, max_dim: int = MAX_DIM) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(P, M)``: populations ``P[j, k] = <jk|rho|jk>`` and the Hermitian ``M[i, j] = <ii|rho|jj>``."""
    rho = np.asarray(rho)
    d = dim_of(rho)
    if d > max_dim:
        raise ValueError(f"witness requires d <= {max_dim} (d! permutations), got d = {d}")
    entries = accessed_entries(d)
    rows, cols = np.array(entries).T
    vals = rho[rows, cols]
    P = np.real(vals[: d * d]).reshape(d, d)
    M = np.zeros((d, d), dtype=np.complex128)
    iu = np.triu_indices(d, 1)
    M[iu] = vals[d * d :]
    M = M + M.conj().T
    M[np.diag_indices(d)] = np.diagonal(P)
    return P, M


def _from_inputs(P: np.ndarray, M: np.ndarray, phases=None) -> WitnessResult:
    d = P.shape[0]
    positive = float(np.sum(M).real - np.trace(M).real)
    diagonal = float((d - 2) * np.trace(P))
    perm = float(d * _kernels.perm_root_sum(np.clip(P, 0.0, None)))
    raw = positive - diagonal - perm
    return WitnessResult(
        raw=raw,
        clamped=max(0.0, raw),
        positive_term=positive,
        diagonal_term=diagonal,
        permutation_term=perm,
        phases_applied=None if phases is None else tuple(float(x) for x in phases),
    )


def bg_witness(rho: np.ndarray, max_dim: int = MAX_DIM) -> WitnessResult:
    """Evaluate the witness bound ``B_G(rho) <= C_G(rho)``."""
    P, M = witness_inputs(rho, max_dim)
    return _from_inputs(P, M)


def _rephase(M: np.ndarray, v: np.ndarray) -> np.ndarray:
    return (v.conj()[:, None] * M) * v[None, :]


def phase_optimized_bg(
    rho: np.ndarray, restarts: int = 4, seed: int = 0, max_dim: int = MAX_DIM
) -> WitnessResult:
    """Witness bound after optimizing local diagonal phases.

    Phases ``diag(exp(i theta_j)) x diag(exp(i phi_k))`` leave the
    populations untouched and rotate ``<ii|rho|jj>`` by
    ``exp(i(chi_i - chi_j))`` with ``chi = theta + phi``. The positive term
    is then ``Re(v^H M v) - tr M`` with ``v = exp(-i chi)``, maximized by
    coordinate ascent from the leading eigenvector of ``M`` and from
    ``restarts - 1`` random phase vectors. ``phases_applied`` holds
    ``(theta_0..theta_{d-1}, phi_0..phi_{d-1})`` with ``phi = 0``.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    P, M = witness_inputs(rho, max_dim)
    d = P.shape[0]
    base = _from_inputs(P, M)

    w, vecs = np.linalg.eigh(M)
    lead = vecs[:, -1]
    starts = [np.where(np.abs(lead) > 1e-15, lead / np.maximum(np.abs(lead), 1e-300), 1.0)]
    for rng in spawn_rngs(seed, restarts - 1):
        starts.append(np.exp(2j * np.pi * rng.random(d)))

    def run(v0):
        v, obj, _ = _kernels.phase_ascent(M, np.asarray(v0, dtype=np.complex128))
        return v, obj

    results = parallel_map(run, starts)
    best_idx = 0
    for i, (_, obj) in enumerate(results):
        if obj > results[best_idx][1]:
            best_idx = i
    v = results[best_idx][0]
    # fix the global gauge: chi_0 = 0
    v = v * np.conj(v[0]) / abs(v[0])
    chi = -np.angle(v)
    res = _from_inputs(P, _rephase(M, v), phases=np.concatenate([chi, np.zeros(d)]))
    if res.raw < base.raw:
        return replace(base, phases_applied=tuple([0.0] * (2 * d)))
    return res


def isotropic_threshold(d: int, tol: float = 1e-10, grid: int = 200) -> float:
    """Smallest mixing ``p`` at which the witness certifies ``rho(p) = p Phi + (1-p) 1/d^2``.

    Raises ``ValueError`` if the witness does not change sign monotonically
    on ``[0, 1]``.
    """
    if not 2 <= d <= MAX_DIM:
        raise ValueError(f"d must lie in [2, {MAX_DIM}]")

    def raw(p: float) -> float:
        return bg_witness(isotropic(d, p)).raw

    ps = np.linspace(0.0, 1.0, grid + 1)
    vals = np.array([raw(p) for p in ps])
    signs = np.sign(vals)
    changes = np.count_nonzero(np.diff(signs[signs != 0]))
    if vals[0] >= 0 or vals[-1] <= 0 or changes != 1:
        raise ValueError(f"no single sign change of the witness on [0, 1] for d = {d}")
    k = int(np.argmax(vals > 0))
    return threshold_bisect(raw, float(ps[k - 1]), float(ps[k]), tol)
