"""Hot distance-scan kernels with a compiled core and a NumPy fallback.

The compiled extension is selected at import time.  Set the environment
variable ``GEOLENS_PURE_PYTHON=1`` (before importing the package) to force
the NumPy implementation, e.g. for benchmarking or debugging.

Kernel geometry codes:
    0  Euclidean coordinates
    1  round sphere of radius ``scale`` (ambient coordinates)
    2  hyperboloid sheet of pseudo-radius ``scale`` (time component first)
"""

import os

from geolens._kernels import _fallback

if os.environ.get("GEOLENS_PURE_PYTHON"):
    _impl = _fallback
else:
    try:
        from geolens._kernels import _native as _impl
    except ImportError:  # extension not built; NumPy path is feature-complete
        _impl = _fallback

BACKEND = _impl.BACKEND

EUCLIDEAN = 0
SPHERE = 1
HYPERBOLOID = 2


def pairwise_max(points, kind, scale=1.0):
    """Largest pairwise distance in one cloud; returns (dist, i, j)."""
    return _impl.pairwise_max(points, kind, scale)


def min_dist_to(points, targets, kind, scale=1.0):
    """For each row of ``points``, the distance to its nearest row of ``targets``."""
    return _impl.min_dist_to(points, targets, kind, scale)


def directed_hausdorff(points, targets, kind, scale=1.0):
    """sup over ``points`` of the distance to ``targets`` (one-sided Hausdorff)."""
    return float(min_dist_to(points, targets, kind, scale).max())
