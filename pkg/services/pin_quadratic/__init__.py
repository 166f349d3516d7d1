"""
Quadratic Function Service

Smith models, admissible quadratic functions and real line counts.
"""

from services.pin_quadratic.service import (
    PinQuadraticService,
    QuadraticFunction,
    SmithModel,
    line_counts,
    special_basis,
)

__all__ = [
    "PinQuadraticService",
    "QuadraticFunction",
    "SmithModel",
    "line_counts",
    "special_basis",
]
