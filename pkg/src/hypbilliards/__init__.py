"""Closed billiard trajectories in ideal hyperbolic polygons and their average lengths."""

from .billiards import (
    BilliardSequence,
    CyclicFamily,
    InvalidSequenceError,
    Trajectory,
    TrajectoryError,
    average_length,
    cyclic_family,
    holonomy,
    length_variational,
    shift,
    trajectory,
    validate,
)
from .filling import FillingReport, connectivity, fills, non_adjacent_sides
from .hypgeo import DiskPoint, Geodesic, IdealPoint, Isometry
from .optimize import OptimizerConfig, minimize_average_length, verify_regular_minimum
from .polygon import BoundaryCoordinate, IdealPolygon, ModuliChart, from_chart, regular, to_chart

__version__ = "0.1.0"

__all__ = [
    "BilliardSequence",
    "BoundaryCoordinate",
    "CyclicFamily",
    "DiskPoint",
    "FillingReport",
    "Geodesic",
    "IdealPoint",
    "IdealPolygon",
    "InvalidSequenceError",
    "Isometry",
    "ModuliChart",
    "OptimizerConfig",
    "Trajectory",
    "TrajectoryError",
    "average_length",
    "connectivity",
    "cyclic_family",
    "fills",
    "from_chart",
    "holonomy",
    "length_variational",
    "minimize_average_length",
    "non_adjacent_sides",
    "regular",
    "shift",
    "to_chart",
    "trajectory",
    "validate",
    "verify_regular_minimum",
]
