"""Fast persistence diagrams for sliding-window embeddings of quasiperiodic signals."""

from ._backend import BACKEND
from .circle_pd import circle_diagrams, dgm0_exact, dgm1_exact, higher_diagrams, lambda_death, point_set
from .diagrams import PersistenceDiagram
from .kunneth import GridSpec, grid_diagrams
from .metrics_bounds import bottleneck, error_rectangles, hausdorff_bound
from .numtheory import cfe, three_gap
from .rips_oracle import FiniteMetricSpace, metric_from_circle, metric_from_cloud, rips_persistence
from .sliding_window import ExponentialSum, SWParams, embed, sw_matrix, trajectory
from .spectrum import dft, estimate_frequencies, truncate_series

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ExponentialSum",
    "FiniteMetricSpace",
    "GridSpec",
    "PersistenceDiagram",
    "SWParams",
    "bottleneck",
    "cfe",
    "circle_diagrams",
    "dft",
    "dgm0_exact",
    "dgm1_exact",
    "embed",
    "error_rectangles",
    "estimate_frequencies",
    "grid_diagrams",
    "hausdorff_bound",
    "higher_diagrams",
    "lambda_death",
    "metric_from_circle",
    "metric_from_cloud",
    "point_set",
    "rips_persistence",
    "sw_matrix",
    "three_gap",
    "trajectory",
    "truncate_series",
]
