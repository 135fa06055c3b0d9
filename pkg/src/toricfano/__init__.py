"""Exact tools for Gorenstein local toric Fano fans over the positive orthant."""

from .classify import (
    ClassLabel,
    canonical_form,
    classify,
    enumerate_iib,
    enumerate_polygons_iib,
    enumerate_region,
    iib_bound,
    polygon_from_fan,
)
from .constructions import (
    AdmissiblePolygon,
    check_sporadic_row,
    crepant_resolve_2d,
    family_i,
    fan_from_polygon,
    polygon_hyperplanes,
    random_polygon,
    sporadic,
    sporadic_table,
    surface_family,
    validate_polygon,
)
from .documents import emit_fan, export_gamma_off, parse_fan
from .fans import Cone, Fan, affine_fan, face_fan, fan_from_rays, gorenstein_form, make_cone, make_fan, validate_fan
from .lattice import DualForm, convex_hull, support_form
from .local_fano import FanoGrade, fano_grade, gamma_body, is_gorenstein_fan

__version__ = "0.1.0"

__all__ = [
    "AdmissiblePolygon",
    "ClassLabel",
    "Cone",
    "DualForm",
    "Fan",
    "FanoGrade",
    "affine_fan",
    "canonical_form",
    "check_sporadic_row",
    "classify",
    "convex_hull",
    "crepant_resolve_2d",
    "emit_fan",
    "enumerate_iib",
    "enumerate_polygons_iib",
    "enumerate_region",
    "export_gamma_off",
    "face_fan",
    "family_i",
    "fan_from_polygon",
    "fan_from_rays",
    "fano_grade",
    "gamma_body",
    "gorenstein_form",
    "iib_bound",
    "is_gorenstein_fan",
    "make_cone",
    "make_fan",
    "parse_fan",
    "polygon_from_fan",
    "polygon_hyperplanes",
    "random_polygon",
    "sporadic",
    "sporadic_table",
    "support_form",
    "surface_family",
    "validate_fan",
    "validate_polygon",
]

