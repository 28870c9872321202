"""Radial grids, the reduced kernel, forms, norms and transforms."""

from .forms import (
    BoundaryProximityError,
    ZeroDenominatorError,
    critical_norm,
    frac_lap_nodes,
    frac_lap_radial,
    hardy_term,
    quadratic_form,
    quotient_Q,
    seminorm_sq,
    weighted_seminorm_sq,
)
from .grid import (
    GridMismatchError,
    RadialFunction,
    RadialGrid,
    bubble,
    make_grid,
    profile,
    read_csv,
    volume_check,
    write_csv,
)
from .kernel import AngularKernel, angular_kernel, kappa
from .morrey import morrey_norm, morrey_samples
from .transforms import NegativeValueError, decreasing_rearrangement, kelvin_transform

__all__ = [
    "AngularKernel",
    "BoundaryProximityError",
    "GridMismatchError",
    "NegativeValueError",
    "RadialFunction",
    "RadialGrid",
    "ZeroDenominatorError",
    "angular_kernel",
    "bubble",
    "critical_norm",
    "decreasing_rearrangement",
    "frac_lap_nodes",
    "frac_lap_radial",
    "hardy_term",
    "kappa",
    "kelvin_transform",
    "make_grid",
    "morrey_norm",
    "morrey_samples",
    "profile",
    "quadratic_form",
    "quotient_Q",
    "read_csv",
    "seminorm_sq",
    "volume_check",
    "weighted_seminorm_sq",
    "write_csv",
]
