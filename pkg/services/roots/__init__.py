"""
Root System Service

Roots, exceptional classes, simple systems and Dynkin types of the degree-1
del Pezzo lattice.
"""

from services.roots.service import (
    RootSystemService,
    SimpleSystem,
    dynkin_type,
    e8_basis,
    enumerate_exceptional,
    enumerate_roots,
    simple_system,
)

__all__ = [
    "RootSystemService",
    "SimpleSystem",
    "dynkin_type",
    "e8_basis",
    "enumerate_exceptional",
    "enumerate_roots",
    "simple_system",
]
