"""Sharpening the bounds with local filtering and local unitaries.

Two transformations leave the G-concurrence unchanged and can only help the
bounds:

* determinant-one local filters ``f_A x f_B``, which drive the state to its
  normal form (both marginals proportional to the identity). The trace of
  the filtered state tracks the rescaling exactly, since the measure is
  homogeneous of degree one in the density matrix;
* local unitaries ``U_A x U_B`` chosen to maximize the overlap with
  ``Phi_d``.

For the second step the pair ``(U_A, U_B)`` enters the overlap only through
``(U_A^dagger x U_B^dagger)|Phi_d> = |Phi_W>`` with
``|Phi_W> = sum_jk W_jk |jk> / sqrt(d)`` and ``W = U_A^dagger conj(U_B)``
(``(A x B) vec(X) = vec(A X B^T)`` in row-major order), so one unitary
``W`` suffices and ``F(W) = vec(W)^dagger rho vec(W) / d``. Since ``F`` is a
convex quadratic form, replacing ``W`` by the unitary polar factor of the
gradient ``unvec(rho vec(W))`` never decreases it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import polar

from .axisym import cg_axisym, distance_lower_bound, project_axisym
from .core import (
    apply_local,
    dim_of,
    fidelity_phi,
    haar_unitary,
    parallel_map,
    partial_trace,
    spawn_rngs,
)
from .witness import WitnessResult, bg_witness, phase_optimized_bg

VANISH_TOL = 1e-12


@dataclass(frozen=True)
class NormalFormResult:
    tau: np.ndarray
    trace_factor: float
    converged: bool
    iterations: int
    vanished: bool
    trace_history: tuple[float, ...] = ()


def _marginal_error(m: np.ndarray) -> float:
    d = m.shape[0]
    tr = np.trace(m).real
    return float(np.max(np.abs(m / tr - np.eye(d) / d)))


def _filter(m: np.ndarray) -> np.ndarray | None:
    """``det(m)^(1/(2d)) m^(-1/2)``, or ``None`` if ``m`` is numerically singular."""
    d = m.shape[0]
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    if w[0] < VANISH_TOL:
        return None
    log_det = float(np.sum(np.log(w)))
    scale = math.exp(log_det / (2 * d))
    return (v * (scale / np.sqrt(w))) @ v.conj().T


def normal_form(rho: np.ndarray, tol: float = 1e-10, max_iter: int = 500) -> NormalFormResult:
    """Alternate determinant-one filters on A and B until both marginals are maximally mixed.

    Each filter sends the filtered marginal to ``det(m)^(1/d) * identity``,
    so the trace can only decrease (arithmetic vs geometric mean).
    Non-convergence is reported, not raised; every iterate carries the same
    G-concurrence, so bounds computed from it stay valid.
    """
    tau = np.array(rho, dtype=np.complex128)
    d = dim_of(tau)
    eye = np.eye(d)
    history = [float(np.trace(tau).real)]
    side = "A"
    it = 0
    vanished = False
    converged = False
    while True:
        ma = partial_trace(tau, "A")
        mb = partial_trace(tau, "B")
        tr = float(np.trace(tau).real)
        if tr < VANISH_TOL:
            vanished = True
            break
        if max(_marginal_error(ma), _marginal_error(mb)) <= tol:
            converged = True
            break
        if it >= max_iter:
            break
        m = ma if side == "A" else mb
        f = _filter(m)
        if f is None:
            vanished = True
            break
        tau = apply_local(tau, f, eye) if side == "A" else apply_local(tau, eye, f)
        tau = 0.5 * (tau + tau.conj().T)
        history.append(float(np.trace(tau).real))
        side = "B" if side == "A" else "A"
        it += 1
    t = float(np.trace(tau).real)
    return NormalFormResult(
        tau=tau,
        trace_factor=0.0 if vanished else t,
        converged=converged,
        iterations=it,
        vanished=vanished,
        trace_history=tuple(history),
    )


# --------------------------------------------------------------------------
# fully entangled fraction


@dataclass(frozen=True)
class FefResult:
    f_max: float
    correlation_unitary: np.ndarray
    restarts_used: int
    start_index: int = 0


def fef_of(rho: np.ndarray, W: np.ndarray) -> float:
    d = W.shape[0]
    v = W.reshape(-1)
    return float(np.real(np.vdot(v, rho @ v)) / d)


def _power_polar(apply_rho, W: np.ndarray, d: int, tol: float, max_iter: int):
    v = W.reshape(-1)
    g = apply_rho(v)
    f = float(np.real(np.vdot(v, g))) / d
    for _ in range(max_iter):
        Wn, _ = polar(g.reshape(d, d))
        vn = Wn.reshape(-1)
        gn = apply_rho(vn)
        fn = float(np.real(np.vdot(vn, gn))) / d
        if fn < f - 1e-12:
            # the update is monotone in exact arithmetic; keep the previous iterate
            break
        done = fn - f < tol
        W, g, f = Wn, gn, fn
        if done:
            break
    return W, f


def maximize_fef(
    rho: np.ndarray,
    restarts: int = 8,
    seed: int = 0,
    tol: float = 1e-12,
    max_iter: int = 2000,
) -> FefResult:
    """Maximize ``<Phi_W|rho|Phi_W>`` over unitary ``W`` by power-polar iteration.

    Start 0 is the identity; starts ``1..restarts-1`` are Haar-random.
    Ties go to the lowest start index.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    rho = np.asarray(rho, dtype=np.complex128)
    d = dim_of(rho)
    starts = [np.eye(d, dtype=np.complex128)]
    starts += [haar_unitary(d, rng) for rng in spawn_rngs(seed, restarts - 1)]
    results = parallel_map(lambda W0: _power_polar(lambda v: rho @ v, W0, d, tol, max_iter), starts)
    best = max(range(len(results)), key=lambda i: (results[i][1], -i))
    W, f = results[best]
    return FefResult(f_max=min(max(f, 0.0), 1.0), correlation_unitary=W, restarts_used=restarts, start_index=best)


def maximize_fef_pure(psi: np.ndarray, tol: float = 1e-12, max_iter: int = 100) -> FefResult:
    """Power-polar iteration for ``rho = |psi><psi|`` without forming ``rho``.

    Works for large ``d`` (``d**2 x d**2`` matrices are never built). The
    gradient at any ``W`` is proportional to ``c`` itself, so starting from
    the polar factor of ``c`` (rather than the identity, whose gradient
    vanishes when ``tr c = 0``) the iteration is already at the optimum
    ``(sum of Schmidt coefficients)^2 / d``.
    """
    c = np.asarray(psi, dtype=np.complex128)
    d = c.shape[0]
    v = c.reshape(-1)
    W0, _ = polar(c)
    W, f = _power_polar(lambda x: v * np.vdot(v, x), W0, d, tol, max_iter)
    return FefResult(f_max=min(max(f, 0.0), 1.0), correlation_unitary=W, restarts_used=1)


def rotate_to_phi(rho: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Apply ``W^dagger x 1`` so that ``fidelity_phi`` of the result equals ``F(W)``."""
    d = W.shape[0]
    return apply_local(rho, W.conj().T, np.eye(d))


# --------------------------------------------------------------------------
# pipeline


@dataclass(frozen=True)
class BoundConfig:
    use_nf: bool = True
    use_lu: bool = True
    use_phases: bool = True
    restarts: int = 8
    seed: int = 0
    nf_tol: float = 1e-10
    nf_max_iter: int = 500
    witness_max_d: int = 8


@dataclass
class BoundReport:
    d: int
    fidelity: float
    fidelity_optimized: float | None
    witness: WitnessResult | None
    witness_pipeline: WitnessResult | None
    axisym_bound: float
    axisym_pipeline: float | None
    nf_used: bool
    nf_converged: bool | None
    nf_iterations: int | None
    trace_factor: float | None
    vanished: bool
    exact: bool
    final_bound: float
    distance_bounds: dict[int, float]
    seed: int
    input_digest: str | None = None
    upper_bound: float | None = None
    timings: dict[str, float] = field(default_factory=dict)

    def lower_bounds(self) -> dict[str, float]:
        """Every individual lower bound that entered ``final_bound``."""
        out = {"axisym": self.axisym_bound}
        if self.witness is not None:
            out["witness"] = self.witness.raw
        if self.axisym_pipeline is not None:
            out["axisym_pipeline"] = self.axisym_pipeline
        if self.witness_pipeline is not None:
            scale = 1.0 if self.trace_factor is None else self.trace_factor
            out["witness_pipeline"] = scale * self.witness_pipeline.raw
        return out

    def as_dict(self, include_timings: bool = False) -> dict:
        return {
            "input_digest": self.input_digest,
            "d": self.d,
            "fidelity": self.fidelity,
            "fidelity_optimized": self.fidelity_optimized,
            "witness": None if self.witness is None else self.witness.as_dict(),
            "witness_pipeline": None if self.witness_pipeline is None else self.witness_pipeline.as_dict(),
            "axisym_bound": self.axisym_bound,
            "axisym_pipeline": self.axisym_pipeline,
            "nf_used": self.nf_used,
            "nf_converged": self.nf_converged,
            "nf_iterations": self.nf_iterations,
            "trace_factor": self.trace_factor,
            "vanished": self.vanished,
            "exact": self.exact,
            "final_bound": self.final_bound,
            "distance_bounds": {str(k): v for k, v in sorted(self.distance_bounds.items())},
            "upper_bound": self.upper_bound,
            "seed": self.seed,
            "timings": dict(sorted(self.timings.items())) if include_timings else {},
        }


def _witness(state: np.ndarray, cfg: BoundConfig) -> WitnessResult | None:
    if dim_of(state) > cfg.witness_max_d:
        return None
    if cfg.use_phases:
        return phase_optimized_bg(state, restarts=cfg.restarts, seed=cfg.seed)
    return bg_witness(state)


def best_bound(rho: np.ndarray, config: BoundConfig | None = None) -> BoundReport:
    """Run normal form, local-unitary rotation, witness and twirl bound; keep the best.

    The bounds on the untouched input are always computed as well, so
    ``final_bound`` is never worse than the plain witness or twirl bound.
    """
    cfg = config or BoundConfig()
    rho = np.asarray(rho, dtype=np.complex128)
    d = dim_of(rho)
    timings: dict[str, float] = {}

    t0 = time.perf_counter()
    fid = fidelity_phi(rho)
    wit = _witness(rho, cfg)
    axi = cg_axisym(project_axisym(rho).fidelity, d)
    dist = {k: distance_lower_bound(rho, k) for k in range(1, d)}
    timings["direct_ms"] = 1e3 * (time.perf_counter() - t0)

    state = rho
    scale = 1.0
    nf = None
    if cfg.use_nf:
        t0 = time.perf_counter()
        nf = normal_form(rho, tol=cfg.nf_tol, max_iter=cfg.nf_max_iter)
        timings["normal_form_ms"] = 1e3 * (time.perf_counter() - t0)
        if nf.vanished:
            return BoundReport(
                d=d,
                fidelity=fid,
                fidelity_optimized=None,
                witness=wit,
                witness_pipeline=None,
                axisym_bound=axi,
                axisym_pipeline=None,
                nf_used=True,
                nf_converged=nf.converged,
                nf_iterations=nf.iterations,
                trace_factor=0.0,
                vanished=True,
                exact=True,
                final_bound=0.0,
                distance_bounds=dist,
                seed=cfg.seed,
                timings=timings,
            )
        scale = nf.trace_factor
        state = nf.tau / scale

    fid_opt = None
    if cfg.use_lu:
        t0 = time.perf_counter()
        fef = maximize_fef(state, restarts=cfg.restarts, seed=cfg.seed)
        if fef.f_max > fidelity_phi(state):
            state = rotate_to_phi(state, fef.correlation_unitary)
        fid_opt = fidelity_phi(state)
        timings["lu_ms"] = 1e3 * (time.perf_counter() - t0)

    wit_p = axi_p = None
    if cfg.use_nf or cfg.use_lu:
        t0 = time.perf_counter()
        wit_p = _witness(state, cfg)
        axi_p = scale * cg_axisym(project_axisym(state).fidelity, d)
        timings["pipeline_bounds_ms"] = 1e3 * (time.perf_counter() - t0)

    candidates = [0.0, axi]
    if wit is not None:
        candidates.append(wit.raw)
    if axi_p is not None:
        candidates.append(axi_p)
    if wit_p is not None:
        candidates.append(scale * wit_p.raw)
    final = max(candidates)

    return BoundReport(
        d=d,
        fidelity=fid,
        fidelity_optimized=fid_opt,
        witness=wit,
        witness_pipeline=wit_p,
        axisym_bound=axi,
        axisym_pipeline=axi_p,
        nf_used=cfg.use_nf,
        nf_converged=None if nf is None else nf.converged,
        nf_iterations=None if nf is None else nf.iterations,
        trace_factor=None if nf is None else scale,
        vanished=False,
        exact=False,
        final_bound=final,
        distance_bounds=dist,
        seed=cfg.seed,
        timings=timings,
    )
