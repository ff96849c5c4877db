"""Explicit upper bounds for Sobolev embedding and Sobolev-Poincare constants
on planar domains divided into convex polygons."""

from .special import INF, conjugate, gamma, hls_constant, hls_constant_tilde, young_factor
from .geometry import (
    ConvexPolygon,
    Decomposition,
    GeometryError,
    area,
    diameter,
    difference_body,
    subdivide_equilateral_triangle,
    subdivide_unit_square,
    validate_decomposition,
)
from .quadrature import QuadratureError, QuadratureSettings, kernel_norm, power_integral
from .embedding import (
    EmbeddingResult,
    ExponentPair,
    Method,
    NoApplicableMethod,
    PieceMetrics,
    applicable_methods,
    best_embedding,
    combine_cp,
    combine_cp_nested,
    dp_hls1,
    dp_hls2,
    dp_young,
    dp_young_inf,
)

__version__ = "0.1.0"
