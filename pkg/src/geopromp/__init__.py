"""Probabilistic movement primitives on Riemannian manifolds.

Learn trajectory distributions on unit spheres and full-pose spaces
(R^3 x S^3), reproduce them, adapt them to via-points, blend skills, and
compare against Euclidean baselines.
"""

from .basis import BasisConfig, phase_from_times, phi, phi_grid, psi_matrix
from .errors import (
    ConvergenceError,
    GeoPrompError,
    InvalidArgumentError,
    SingularityError,
)
from .gaussians import (
    EuclideanGaussian,
    RiemannianGaussian,
    fit_gaussian_mle,
    gaussian_product_manifold,
    riemannian_density,
)
from .geodesic_fit import FitReport, GeodesicModel
from .manifolds import Euclidean, Manifold, Product, Sphere, manifold_from_tag, manifold_tag
from .promp import EuclideanPromp, ViaPoint, task_affine
from .riemannian_promp import (
    FullPosePromp,
    RiemannianPromp,
    fit_s3,
    fullpose_blend,
    fullpose_fit,
    preprocess_quaternions,
    resample_on_manifold,
    time_to_phase,
)

__version__ = "0.1.0"

__all__ = [
    "BasisConfig",
    "ConvergenceError",
    "Euclidean",
    "EuclideanGaussian",
    "EuclideanPromp",
    "FitReport",
    "FullPosePromp",
    "GeoPrompError",
    "GeodesicModel",
    "InvalidArgumentError",
    "Manifold",
    "Product",
    "RiemannianGaussian",
    "RiemannianPromp",
    "SingularityError",
    "Sphere",
    "ViaPoint",
    "fit_gaussian_mle",
    "fit_s3",
    "fullpose_blend",
    "fullpose_fit",
    "gaussian_product_manifold",
    "manifold_from_tag",
    "manifold_tag",
    "phase_from_times",
    "phi",
    "phi_grid",
    "preprocess_quaternions",
    "psi_matrix",
    "resample_on_manifold",
    "riemannian_density",
    "task_affine",
    "time_to_phase",
]
