"""Randomized self-checks run by ``gconc verify``.

Each suite returns a :class:`SuiteResult` with one entry per checked case
that failed; an empty failure list means the suite passed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .axisym import distance_lower_bound
from .core import hs_distance, random_density, random_pure
from .oracles import constrained_cg_min, convex_roof_upper
from .pure_measures import cg_of_F
from .slopt import BoundConfig, best_bound

SUITES = ("sandwich", "curve", "appendixC")


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def sandwich(seed: int = 0, samples: int = 200, d: int = 3) -> SuiteResult:
    """Every lower bound stays below the oracle upper bound on random mixed states.

    Ranks are cycled from 1 to ``d**2`` so that low-rank (more entangled)
    states are covered. The oracle is refined only where the lower bound is
    positive; elsewhere any upper estimate passes trivially.
    """
    rng = np.random.default_rng(seed)
    res = SuiteResult("sandwich")
    cfg = BoundConfig(restarts=4, seed=seed)
    for i in range(samples):
        rank = 1 + i % (d * d)
        rho = random_density(d, rng, rank=rank)
        rep = best_bound(rho, cfg)
        steps = 700 if rep.final_bound > 0 else 0
        up = convex_roof_upper(rho, trials=4 if steps else 2, seed=seed + i, refine_steps=steps).value
        res.checked += 1
        if rep.final_bound > up + 1e-6:
            res.failures.append(f"state {i} (rank {rank}): lower {rep.final_bound:.6g} > upper {up:.6g}")
    return res


def curve(seed: int = 0, dims=(3, 4, 5), points: int = 50) -> SuiteResult:
    """Closed-form pure-state minimum against the constrained numerical minimizer."""
    res = SuiteResult("curve")
    for d in dims:
        for F in np.linspace((d - 1) / d, 1.0, points):
            closed = cg_of_F(d, float(F)).cg
            num = constrained_cg_min(d, float(F), seed=seed)
            res.checked += 1
            if abs(closed - num) > 1e-4:
                res.failures.append(f"d={d} F={F:.6f}: closed {closed:.8f} vs numeric {num:.8f}")
    return res


def _schmidt_k_state(d: int, k: int, rng: np.random.Generator, terms: int = 4) -> np.ndarray:
    w = rng.dirichlet(np.ones(terms))
    sigma = np.zeros((d * d, d * d), dtype=np.complex128)
    for p in w:
        v = random_pure(d, rng, rank=k).reshape(-1)
        sigma += p * np.outer(v, v.conj())
    return sigma


def _truncated_top(rho: np.ndarray, k: int) -> np.ndarray:
    """Dominant eigenvector of ``rho`` cut to its ``k`` largest Schmidt terms: a nearby Schmidt-rank-k state."""
    d = int(round(np.sqrt(rho.shape[0])))
    _, vecs = np.linalg.eigh(rho)
    u, s, vh = np.linalg.svd(vecs[:, -1].reshape(d, d))
    s[k:] = 0.0
    c = (u * s) @ vh
    v = (c / np.linalg.norm(c)).reshape(-1)
    return np.outer(v, v.conj())


def schmidt_distance(seed: int = 0, pairs: int = 100, dims=(3, 4)) -> SuiteResult:
    """The twirled distance bound never exceeds the distance to a Schmidt-number-k state."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("appendixC")
    for d in dims:
        for k in range(1, d):
            for i in range(pairs):
                # bias toward entangled rho so the bound is often nonzero
                if i % 2:
                    v = random_pure(d, rng).reshape(-1)
                    rho = 0.8 * np.outer(v, v.conj()) + 0.2 * random_density(d, rng)
                else:
                    psi = np.eye(d) / np.sqrt(d)
                    v = psi.reshape(-1)
                    p = rng.random()
                    rho = p * np.outer(v, v.conj()) + (1 - p) * random_density(d, rng)
                lb = distance_lower_bound(rho, k)
                for sigma in (_schmidt_k_state(d, k, rng), _truncated_top(rho, k)):
                    dist = hs_distance(rho, sigma)
                    res.checked += 1
                    if lb > dist + 1e-9:
                        res.failures.append(f"d={d} k={k} pair {i}: bound {lb:.6g} > distance {dist:.6g}")
    return res


def run_suite(name: str, seed: int = 0) -> SuiteResult:
    if name == "sandwich":
        return sandwich(seed)
    if name == "curve":
        return curve(seed)
    if name == "appendixC":
        return schmidt_distance(seed)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
