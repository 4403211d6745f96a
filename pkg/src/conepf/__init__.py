"""Analysis of order-preserving 1-homogeneous maps on polyhedral cones."""

__version__ = "0.1.0"

from .cone import OrderRelation, PolyhedralCone, compare, contains, interior_contains
from .kernels import BACKEND
from .maps import (
    ComposedMap, ConicRegion, LinearMap, MaxLinearMap, MinLinearMap,
    PiecewiseLinearMap, ScaledMap, negate_conjugate,
)

__all__ = [
    "BACKEND", "ComposedMap", "ConicRegion", "LinearMap", "MaxLinearMap",
    "MinLinearMap", "OrderRelation", "PiecewiseLinearMap", "PolyhedralCone",
    "ScaledMap", "compare", "contains", "interior_contains", "negate_conjugate",
]
