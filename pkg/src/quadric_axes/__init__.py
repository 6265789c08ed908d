"""Axes of an ellipsoid from a complete system of conjugate semi-diameters.

The geometric route follows the focal-conic construction (Rytz on a central
section, the dual focal conics at the end point of one semi-diameter, their
common cone edges through the centre and the diagonal triangle of those
edges); the eigen-decomposition of ``X X^T`` serves as the oracle. The
``exactalg`` subpackage decides whether the edge intersections are
ruler-and-compass constructible.
"""

from .chasles3d import (
    ChaslesFrame,
    ChaslesTrace,
    DualFocalConics,
    EdgeSet,
    QuarticInstance,
    axes_from_edges,
    axes_lengths,
    build_frame,
    chasles_axes,
    common_edges,
    dual_focal_conics,
    project_focal_ellipse,
    quartic_instance,
    special_case_x0,
    special_case_y0,
)
from .conjugate import (
    AxesResult,
    ConjugateSystem,
    Ellipsoid,
    axes_oracle,
    check_conjugacy,
    implied_quadric,
    random_system,
    sum_of_squares,
    volume,
)
from .errors import DegenerateError, InputError, QuadricAxesError
from .rytz2d import RytzTrace, rytz_axes

__version__ = "0.1.0"

__all__ = [
    "AxesResult", "ChaslesFrame", "ChaslesTrace", "ConjugateSystem", "DegenerateError",
    "DualFocalConics", "EdgeSet", "Ellipsoid", "InputError", "QuadricAxesError", "QuarticInstance",
    "RytzTrace", "axes_from_edges", "axes_lengths", "axes_oracle", "build_frame", "chasles_axes",
    "check_conjugacy", "common_edges", "dual_focal_conics", "implied_quadric", "project_focal_ellipse",
    "quartic_instance", "random_system", "rytz_axes", "special_case_x0", "special_case_y0",
    "sum_of_squares", "volume",
]
