"""Backend selector for the raycast kernels.

Prefers the compiled Cython extension; falls back to the NumPy
implementation when the extension is absent or when the environment
variable TENDBOT_PURE_PYTHON is set to a non-empty value.
"""

from __future__ import annotations

import os

from . import _kernels_np

if os.environ.get("TENDBOT_PURE_PYTHON"):
    _impl = _kernels_np
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_np

BACKEND = _impl.BACKEND

rays_vs_triangles = _impl.rays_vs_triangles
rays_vs_spheres = _impl.rays_vs_spheres
rays_vs_cylinders = _impl.rays_vs_cylinders
min_dist_to_points = _impl.min_dist_to_points
