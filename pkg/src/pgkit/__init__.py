"""Finite projective spaces PG(n,q): construction, axiom checks, spreads,
packings, collineation orbits and specification emission."""
from .geometry import (
    SAME_LINE,
    Geometry,
    GeometryError,
    IncidenceFormatError,
    build_pg,
    incid,
    intersect_in,
    line_through,
    load_incidence,
    load_incidence_file,
    load_pg32,
)
from .gf import FieldError, FieldSpec, field_make

__version__ = "0.1.0"

__all__ = [
    "SAME_LINE",
    "FieldError",
    "FieldSpec",
    "Geometry",
    "GeometryError",
    "IncidenceFormatError",
    "build_pg",
    "field_make",
    "incid",
    "intersect_in",
    "line_through",
    "load_incidence",
    "load_incidence_file",
    "load_pg32",
]
