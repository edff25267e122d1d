"""Exact rational geometry: normal forms, lattices, cones, volumes, occupancy."""

from .cones import Cone, cone_from_rational, dual_cone, extreme_rays
from .linalg import Lattice, hermite_normal_form, saturate, smith_normal_form
from .occupancy import OccupancyEstimate, occupancy
from .rational import format_rational, parse_rational, primitive
from .volume import polytope_volume, pyramid_volume

__all__ = [
    "Cone",
    "Lattice",
    "OccupancyEstimate",
    "cone_from_rational",
    "dual_cone",
    "extreme_rays",
    "format_rational",
    "hermite_normal_form",
    "occupancy",
    "parse_rational",
    "polytope_volume",
    "primitive",
    "pyramid_volume",
    "saturate",
    "smith_normal_form",
]
