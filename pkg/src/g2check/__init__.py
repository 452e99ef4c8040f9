"""Exact and numerical checks of G2-structures on hypersurfaces of flat H^2.

The quickest entry points are :func:`g2check.holonomy.check_point` for a single
chart point and the ``g2check`` command for whole runs.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND  # noqa: E402
from .g2 import CrossProduct, check_cross_axioms, cross_from_form, form_from_cross, metric_from_form, omega0  # noqa: E402
from .holonomy import (  # noqa: E402
    check_point,
    final_residuals,
    gauss_consistency,
    induced_cross,
    nabla_p_closed,
    nabla_p_fd,
)
from .hyperkahler import standard_structures, validate_structure  # noqa: E402
from .hypersurface import CATALOG, make_immersion, point_frame, sample_points  # noqa: E402

__all__ = [
    "__version__",
    "BACKEND",
    "CATALOG",
    "CrossProduct",
    "check_cross_axioms",
    "check_point",
    "cross_from_form",
    "final_residuals",
    "form_from_cross",
    "gauss_consistency",
    "induced_cross",
    "make_immersion",
    "metric_from_form",
    "nabla_p_closed",
    "nabla_p_fd",
    "omega0",
    "point_frame",
    "sample_points",
    "standard_structures",
    "validate_structure",
]
