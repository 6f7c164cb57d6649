from tsl.core.geometry.context import (
    Case,
    Chamber,
    ConeFacet,
    GeometryContext,
    build_geometry,
    compute_lsigma,
    cone_facets,
    enumerate_weight_le,
    in_extended_monoid,
    m_of,
    structure_constants,
    total_weight,
    visible_faces,
    weight,
)
from tsl.core.geometry.laurent import LaurentPolynomial, LowerOrderTerm, ToricFamily, make_family
from tsl.core.geometry.polytope import Polytope
from tsl.core.geometry.upsilon import (
    UpsilonPolytope,
    deformed_denominator,
    relative_polytope_upsilon,
    upsilon_from_weights,
)

__all__ = [
    "Case",
    "Chamber",
    "ConeFacet",
    "GeometryContext",
    "LaurentPolynomial",
    "LowerOrderTerm",
    "Polytope",
    "ToricFamily",
    "UpsilonPolytope",
    "build_geometry",
    "compute_lsigma",
    "cone_facets",
    "deformed_denominator",
    "enumerate_weight_le",
    "in_extended_monoid",
    "m_of",
    "make_family",
    "relative_polytope_upsilon",
    "structure_constants",
    "total_weight",
    "upsilon_from_weights",
    "visible_faces",
    "weight",
]
