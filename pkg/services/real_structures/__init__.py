"""
Real Structure Service

Involutions of the del Pezzo lattice, Bertini duals and the catalog of the
eleven real deformation classes.
"""

from services.real_structures.service import (
    CatalogEntry,
    RealStructure,
    RealStructureService,
    bertini_dual,
    involution_from_subsystem,
)

__all__ = [
    "CatalogEntry",
    "RealStructure",
    "RealStructureService",
    "bertini_dual",
    "involution_from_subsystem",
]
