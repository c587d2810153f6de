"""geolens: geodesic-ball overlap widths on model Riemannian manifolds.

The package computes, at desk scale, how the diameter of the intersection of
two closed geodesic balls behaves as their centers separate along a geodesic,
together with the supporting geometry: exponential/logarithm maps, geodesic
and Jacobi-field integration, convexity/injectivity/conjugate/focal radii,
and Hausdorff-distance machinery for finite samples of compact sets.
"""

from geolens._kernels import BACKEND as kernel_backend
from geolens.geodesics import (
    GeodesicLine,
    GeodesicSegment,
    JacobiSolution,
    SampledCurve,
    energy,
    first_variation_check,
    integrate_geodesic,
    integrate_jacobi,
    length,
)
from geolens.lens import (
    BallPair,
    LensDiameter,
    WProfile,
    estimate_full_width_end,
    estimate_nesting_onset,
    lens_diameter,
    membership,
    sample_intersection,
    w_profile,
)
from geolens.manifolds import (
    Euclidean,
    Hyperbolic,
    Manifold,
    ManifoldPoint,
    RevolutionProfile,
    Sphere,
    SurfaceOfRevolution,
    TangentVector,
)
from geolens.radii import (
    RadiiReport,
    RadiusValue,
    closed_form_radii,
    conjugate_radius,
    convexity_from,
    focal_radius,
    radii_report,
)
from geolens.sets import (
    PointCloud,
    diameter,
    diameter_lipschitz_check,
    hausdorff,
    monotone_limit_check,
)

__version__ = "0.1.0"

__all__ = [
    "kernel_backend",
    "Manifold",
    "ManifoldPoint",
    "TangentVector",
    "Euclidean",
    "Sphere",
    "Hyperbolic",
    "SurfaceOfRevolution",
    "RevolutionProfile",
    "GeodesicSegment",
    "GeodesicLine",
    "SampledCurve",
    "JacobiSolution",
    "integrate_geodesic",
    "integrate_jacobi",
    "energy",
    "length",
    "first_variation_check",
    "RadiusValue",
    "RadiiReport",
    "closed_form_radii",
    "conjugate_radius",
    "focal_radius",
    "convexity_from",
    "radii_report",
    "PointCloud",
    "hausdorff",
    "diameter",
    "diameter_lipschitz_check",
    "monotone_limit_check",
    "BallPair",
    "LensDiameter",
    "WProfile",
    "membership",
    "sample_intersection",
    "lens_diameter",
    "w_profile",
    "estimate_nesting_onset",
    "estimate_full_width_end",
]
