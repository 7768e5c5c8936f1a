"""Certified lower bounds on the G-concurrence of bipartite mixed states."""

__version__ = "0.1.0"

from .axisym import (
    AxisymState,
    HsCoords,
    axisym_from_pq,
    axisym_to_matrix,
    c2_axisym,
    cg_axisym,
    coords_xy,
    distance_lower_bound,
    project_axisym,
)
from .core import (
    InvalidStateError,
    apply_local,
    dm_from_pure,
    fidelity_phi,
    hs_distance,
    isotropic,
    max_entangled,
    partial_trace,
    schmidt,
)
from .multipartite import bipartition_reshape, cluster_report, cluster_state, noise_threshold
from .oracles import constrained_cg_min, convex_roof_upper, threshold_bisect
from .pure_measures import c2_pure, cg_of_F, cg_pure, cg_pure_lower
from .slopt import BoundConfig, BoundReport, best_bound, maximize_fef, normal_form
from .witness import bg_witness, isotropic_threshold, phase_optimized_bg

__all__ = [
    "AxisymState",
    "BoundConfig",
    "BoundReport",
    "HsCoords",
    "InvalidStateError",
    "apply_local",
    "axisym_from_pq",
    "axisym_to_matrix",
    "best_bound",
    "bg_witness",
    "bipartition_reshape",
    "c2_axisym",
    "c2_pure",
    "cg_axisym",
    "cg_of_F",
    "cg_pure",
    "cg_pure_lower",
    "cluster_report",
    "cluster_state",
    "constrained_cg_min",
    "convex_roof_upper",
    "coords_xy",
    "distance_lower_bound",
    "dm_from_pure",
    "fidelity_phi",
    "hs_distance",
    "isotropic",
    "isotropic_threshold",
    "max_entangled",
    "maximize_fef",
    "noise_threshold",
    "normal_form",
    "partial_trace",
    "phase_optimized_bg",
    "project_axisym",
    "schmidt",
    "threshold_bisect",
]
