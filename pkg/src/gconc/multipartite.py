"""Linear cluster states and the white-noise fragility of full Schmidt rank.

Qubit 0 is the most significant bit of the computational-basis index. The
chain state is ``|+>^n`` followed by controlled-Z on ``(0,1), (1,2), ...``;
its amplitudes are ``2^(-n/2) (-1)^(sum_i x_i x_{i+1})``. The four-qubit form
``(|0000> + |0111> + |1011> + |1100>)/2`` is the same state after a
Hadamard on every odd qubit (B and D); :func:`cluster_state` applies that
gauge when ``gauge="hadamard_odd"``. Schmidt ranks, G-concurrences and noise
thresholds do not depend on the gauge.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import as_pure_state, dm_from_pure, parallel_map
from .pure_measures import cg_pure
from .slopt import maximize_fef, maximize_fef_pure

GME_REFERENCE_N4 = 8 / 13
NAMES_N4 = {(0, 1): "(AB)(CD)", (0, 2): "(AC)(BD)", (0, 3): "(AD)(BC)"}


def gme_reference(n: int) -> float:
    """Quoted GME white-noise tolerance of the linear cluster state (display only)."""
    if n == 4:
        return GME_REFERENCE_N4
    return 1.0 - (n / 3.0) * 2.0 ** (-n / 3.0)


@dataclass(frozen=True)
class Partition:
    n_qubits: int
    side_a: tuple[int, ...]

    def __post_init__(self):
        n = self.n_qubits
        if n % 2 or n < 2:
            raise ValueError(f"n_qubits must be even and >= 2, got {n}")
        s = tuple(sorted(self.side_a))
        if len(set(s)) != len(s) or len(s) != n // 2 or any(not 0 <= q < n for q in s):
            raise ValueError(f"side_a must hold n/2 distinct qubits in [0, {n}), got {self.side_a}")
        object.__setattr__(self, "side_a", s)

    @property
    def side_b(self) -> tuple[int, ...]:
        return tuple(q for q in range(self.n_qubits) if q not in self.side_a)

    @property
    def label(self) -> str:
        if self.n_qubits <= 26:
            letters = [chr(ord("A") + q) for q in range(self.n_qubits)]
            return "(" + "".join(letters[q] for q in self.side_a) + ")(" + "".join(letters[q] for q in self.side_b) + ")"
        return f"{self.side_a}|{self.side_b}"


_H = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


def _apply_1q(state: np.ndarray, gate: np.ndarray, q: int, n: int) -> np.ndarray:
    t = state.reshape((2,) * n)
    t = np.moveaxis(np.tensordot(gate, t, axes=([1], [q])), 0, q)
    return t.reshape(-1)


def cluster_state(n: int, gauge: str = "chain") -> np.ndarray:
    """Amplitudes (length ``2**n``) of the linear cluster state on ``n`` qubits.

    ``gauge="chain"`` gives the plain controlled-Z form; ``"hadamard_odd"``
    additionally applies a Hadamard to qubits 1, 3, 5, ...
    """
    if n % 2 or not 4 <= n <= 12:
        raise ValueError(f"n must be even with 4 <= n <= 12, got {n}")
    x = np.arange(2**n)
    bits = (x[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1
    parity = np.sum(bits[:, :-1] & bits[:, 1:], axis=1) & 1
    amp = np.where(parity == 1, -1.0, 1.0).astype(np.complex128) / 2 ** (n / 2)
    if gauge == "chain":
        return amp
    if gauge == "hadamard_odd":
        for q in range(1, n, 2):
            amp = _apply_1q(amp, _H, q, n)
        return amp
    raise ValueError(f"unknown gauge {gauge!r}")


def bipartition_reshape(state: np.ndarray, part: Partition) -> np.ndarray:
    """Amplitude matrix with rows indexed by ``side_a`` qubits (in order) and columns by the rest."""
    state = np.asarray(state, dtype=np.complex128).reshape(-1)
    n = part.n_qubits
    if state.size != 2**n:
        raise ValueError(f"state has {state.size} amplitudes, partition expects {2**n}")
    t = state.reshape((2,) * n).transpose(part.side_a + part.side_b)
    half = 2 ** (n // 2)
    return t.reshape(half, half)


def schmidt_rank(c: np.ndarray, tol: float = 1e-10) -> int:
    s = np.linalg.svd(c, compute_uv=False)
    return int(np.count_nonzero(s > tol * s[0]))


@dataclass(frozen=True)
class ThresholdResult:
    d: int
    f_opt: float
    w_star: float
    gme_reference: float | None = None

    @property
    def applicable(self) -> bool:
        return self.f_opt > (self.d - 1) / self.d


def white_noise_threshold(f_opt: float, d: int) -> float:
    """Largest ``w`` with ``(1-w) f_opt + w/d^2 >= (d-1)/d``; zero if ``f_opt`` is already below."""
    edge = (d - 1) / d
    if f_opt <= edge:
        return 0.0
    return (f_opt - edge) / (f_opt - 1.0 / d**2)


def noise_threshold(
    psi: np.ndarray,
    with_lu_opt: bool = True,
    restarts: int = 8,
    seed: int = 0,
    gme: float | None = None,
) -> ThresholdResult:
    """White-noise admixture up to which the twirl bound certifies full Schmidt rank.

    The bound ``1 - d (1 - F)`` is affine in ``F`` and ``F`` is affine in
    the noise weight, so the threshold is closed form. With ``with_lu_opt``
    the fidelity is first maximized over local unitaries (local unitaries
    leave white noise unchanged).
    """
    c = as_pure_state(psi, max_dim=1 << 12)
    d = c.shape[0]
    if with_lu_opt:
        if d <= 8:
            f = maximize_fef(dm_from_pure(c), restarts=restarts, seed=seed).f_max
        else:
            f = maximize_fef_pure(c).f_max
    else:
        f = float(abs(np.trace(c)) ** 2 / d)
    return ThresholdResult(d=d, f_opt=f, w_star=white_noise_threshold(f, d), gme_reference=gme)


def bipartitions(n: int) -> list[Partition]:
    """Equal bipartitions up to swapping the halves (qubit 0 always on side A), sorted."""
    return [Partition(n, (0,) + rest) for rest in itertools.combinations(range(1, n), n // 2 - 1)]


@dataclass(frozen=True)
class ClusterRow:
    partition: Partition
    label: str
    schmidt_rank: int
    cg_pure: float
    threshold: ThresholdResult

    @property
    def applicable(self) -> bool:
        return self.schmidt_rank == self.threshold.d and self.threshold.applicable

    def as_dict(self) -> dict:
        return {
            "partition": self.label,
            "side_a": list(self.partition.side_a),
            "d": self.threshold.d,
            "schmidt_rank": self.schmidt_rank,
            "cg_pure": self.cg_pure,
            "f_opt": self.threshold.f_opt,
            "w_star": self.threshold.w_star,
            "applicable": self.applicable,
            "gme_reference": self.threshold.gme_reference,
        }


def cluster_report(n: int, restarts: int = 8, seed: int = 0) -> list[ClusterRow]:
    """One row per equal bipartition of the ``n``-qubit linear cluster state."""
    state = cluster_state(n)
    gme = gme_reference(n)

    def row(part: Partition) -> ClusterRow:
        c = bipartition_reshape(state, part)
        res = noise_threshold(c, with_lu_opt=True, restarts=restarts, seed=seed, gme=gme)
        label = NAMES_N4.get(part.side_a, part.label) if n == 4 else part.label
        return ClusterRow(part, label, schmidt_rank(c), cg_pure(c), res)

    return parallel_map(row, bipartitions(n))
