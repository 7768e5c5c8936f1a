"""Axisymmetric states: twirl projection, exact G-concurrence and geometry.

An axisymmetric state on ``C^d x C^d`` is fixed by three numbers:

* ``a`` - every population ``<jj|rho|jj>``
* ``b`` - every coherence ``<jj|rho|kk>``, ``j != k`` (real)
* ``c`` - every population ``<jk|rho|jk>``, ``j != k``

with ``d a + d (d - 1) c = 1``. Its fidelity with ``Phi_d`` is
``F = a + (d - 1) b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import InvalidStateError, dim_of

TOL = 1e-10


@dataclass(frozen=True)
class AxisymState:
    d: int
    a: float
    b: float
    c: float

    def __post_init__(self):
        d = self.d
        if d < 2:
            raise InvalidStateError(f"d must be >= 2, got {d}")
        if abs(d * self.a + d * (d - 1) * self.c - 1.0) > 1e-9:
            raise InvalidStateError("axisymmetric parameters violate unit trace")
        if self.a - self.b < -TOL or self.a + (d - 1) * self.b < -TOL or self.c < -TOL:
            raise InvalidStateError(
                f"axisymmetric parameters not PSD: a={self.a:.6g}, b={self.b:.6g}, c={self.c:.6g}"
            )

    @property
    def fidelity(self) -> float:
        return self.a + (self.d - 1) * self.b

    @classmethod
    def from_ab(cls, d: int, a: float, b: float) -> "AxisymState":
        return cls(d, a, b, (1.0 - d * a) / (d * (d - 1)))


@dataclass(frozen=True)
class HsCoords:
    x: float
    y: float

    def distance(self, other: "HsCoords") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


def project_axisym(rho: np.ndarray) -> AxisymState:
    """Twirl ``rho`` onto the axisymmetric family (only ``O(d^2)`` entries are read)."""
    rho = np.asarray(rho)
    d = dim_of(rho)
    pops = np.real(np.diagonal(rho)).reshape(d, d)
    same = np.trace(pops)
    a = same / d
    c = (np.sum(pops) - same) / (d * (d - 1))
    idx = np.arange(d) * (d + 1)
    block = rho[np.ix_(idx, idx)]
    b = (np.sum(block).real - np.trace(block).real) / (d * (d - 1))
    return AxisymState(d, float(a), float(b), float(c))


def axisym_to_matrix(s: AxisymState) -> np.ndarray:
    d = s.d
    rho = np.zeros((d * d, d * d), dtype=np.complex128)
    pops = np.full((d, d), s.c)
    np.fill_diagonal(pops, s.a)
    rho[np.diag_indices(d * d)] = pops.reshape(-1)
    idx = np.arange(d) * (d + 1)
    block = np.full((d, d), s.b, dtype=np.complex128)
    np.fill_diagonal(block, s.a)
    rho[np.ix_(idx, idx)] = block
    return rho


def axisym_from_pq(d: int, p: float, q: float) -> AxisymState:
    """Mixture ``p Phi + (1-p) [q rho1 + (1-q) rho2]``.

    ``rho1`` is taken as ``(1 - Phi) / (d^2 - 1)``, the trace-one state
    orthogonal to ``Phi`` on the span of the identity and ``Phi``;
    ``rho2`` is the uniform mixture of ``|jk>``, ``j != k``.
    """
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise ValueError("p and q must lie in [0, 1]")
    n = d * d - 1
    # rho1 entries: populations (1 - 1/d)/n on jj and 1/n on jk; coherences -1/(d n)
    a1, b1, c1 = (1.0 - 1.0 / d) / n, -1.0 / (d * n), 1.0 / n
    a2, b2, c2 = 0.0, 0.0, 1.0 / (d * (d - 1))
    ap, bp, cp = 1.0 / d, 1.0 / d, 0.0
    w = (1.0 - p)
    a = p * ap + w * (q * a1 + (1 - q) * a2)
    b = p * bp + w * (q * b1 + (1 - q) * b2)
    c = p * cp + w * (q * c1 + (1 - q) * c2)
    return AxisymState(d, a, b, c)


def cg_axisym(F: float, d: int) -> float:
    """Exact G-concurrence of an axisymmetric state with fidelity ``F``."""
    return max(1.0 - d * (1.0 - F), 0.0)


def c2_axisym(F: float, d: int) -> float:
    """2-concurrence of an axisymmetric state, normalized as ``sqrt(2 (1 - Tr rho_A^2))``.

    Equals ``sqrt(2 (d - 1) / d)`` at ``Phi_d``; see :func:`c2_axisym_normalized`
    for the version that is 1 there.
    """
    return max(0.0, math.sqrt(2.0 * d / (d - 1)) * (F - 1.0 / d))


def c2_axisym_normalized(F: float, d: int) -> float:
    """2-concurrence rescaled to ``sqrt(d/(d-1) (1 - Tr rho_A^2))``, equal to 1 at ``Phi_d``."""
    return max(0.0, (d * F - 1.0) / (d - 1))


def coords_xy(s: AxisymState) -> HsCoords:
    """Orthonormal Hilbert-Schmidt coordinates of ``s - identity/d^2``.

    ``x`` multiplies ``sum_{j != k} |jj><kk| / sqrt(d(d-1))`` and ``y``
    multiplies ``(sum_j |jj><jj| - identity/d) / sqrt(d-1)``.
    """
    d = s.d
    return HsCoords(
        x=math.sqrt(d * (d - 1)) * s.b,
        y=(d * s.a - 1.0 / d) / math.sqrt(d - 1),
    )


def _ab_to_xy(d: int, a: float, b: float) -> np.ndarray:
    return np.array([math.sqrt(d * (d - 1)) * b, (d * a - 1.0 / d) / math.sqrt(d - 1)])


def triangle_vertices(d: int) -> np.ndarray:
    """``(a, b)`` at the corners: ``Phi_d``, the ``c = 0`` corner opposite it, and the ``|jk>`` mixture."""
    return np.array(
        [
            [1.0 / d, 1.0 / d],
            [1.0 / d, -1.0 / (d * (d - 1))],
            [0.0, 0.0],
        ]
    )


def _clip_halfplane(poly: np.ndarray, normal: np.ndarray, offset: float) -> np.ndarray:
    """Keep ``{z : normal . z <= offset}`` of a convex polygon (Sutherland-Hodgman)."""
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp, fq = normal @ p - offset, normal @ q - offset
        if fp <= 0:
            out.append(p)
        if fp * fq < 0:
            t = fp / (fp - fq)
            out.append(p + t * (q - p))
    return np.array(out)


def _point_segment(z: np.ndarray, p: np.ndarray, q: np.ndarray) -> float:
    e = q - p
    ee = e @ e
    t = 0.0 if ee == 0 else min(max((z - p) @ e / ee, 0.0), 1.0)
    return float(np.linalg.norm(z - (p + t * e)))


def schmidt_region(d: int, k: int) -> np.ndarray:
    """Polygon (in ``x, y``) of axisymmetric states with ``F <= k/d``."""
    tri = np.array([_ab_to_xy(d, a, b) for a, b in triangle_vertices(d)])
    # F = a + (d-1) b is affine in (x, y): a = (y sqrt(d-1) + 1/d)/d, b = x / sqrt(d(d-1))
    normal = np.array([(d - 1) / math.sqrt(d * (d - 1)), math.sqrt(d - 1) / d])
    offset = k / d - 1.0 / d**2
    return _clip_halfplane(tri, normal, offset)


def distance_to_polygon(z: np.ndarray, poly: np.ndarray) -> float:
    """Euclidean distance from ``z`` to a convex polygon; zero inside."""
    n = len(poly)
    edges = np.roll(poly, -1, axis=0) - poly
    rel = z - poly
    cross = edges[:, 0] * rel[:, 1] - edges[:, 1] * rel[:, 0]
    area = np.sum(poly[:, 0] * np.roll(poly[:, 1], -1) - np.roll(poly[:, 0], -1) * poly[:, 1])
    if np.all(np.sign(area) * cross >= -1e-15):
        return 0.0
    return min(_point_segment(z, poly[i], poly[(i + 1) % n]) for i in range(n))


def distance_lower_bound(rho: np.ndarray, k: int) -> float:
    """Lower bound on the HS distance from ``rho`` to any state of Schmidt number ``<= k``.

    Exact distance, in the twirled plane, from the projection of ``rho`` to
    the axisymmetric states with ``F <= k/d``.
    """
    d = dim_of(rho)
    if not 1 <= k <= d - 1:
        raise ValueError(f"k must lie in [1, {d - 1}], got {k}")
    s = project_axisym(rho)
    z = np.array([coords_xy(s).x, coords_xy(s).y])
    return distance_to_polygon(z, schmidt_region(d, k))
