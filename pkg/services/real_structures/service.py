"""
Real structures on the del Pezzo lattice.

A real structure is modelled by its homology action: an involutive isometry
sigma of H with sigma(K) = -K. This module builds sigma from a root
subsystem, forms Bertini duals, filters real roots and real exceptional
classes, and assembles the validated catalog of deformation classes.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, replace
from functools import lru_cache

import structlog
from sympy import Matrix, eye

from services.real_structures.catalog import (
    CATALOG_VERSION,
    CLASS_RECORDS,
    DUAL_OF,
    WITNESSES,
    parse_topology,
    record_for,
)
from services.roots.service import (
    SimpleSystem,
    dynkin_type,
    e8_basis,
    enumerate_exceptional,
    enumerate_roots,
    simple_system,
)
from shared.config import Settings, get_settings
from shared.lattice import (
    CANONICAL,
    RANK,
    IntMatrix,
    LatticeError,
    LatticeVector,
    Sublattice,
    apply,
    form_matrix,
    from_sympy,
    identity_matrix,
    matmul,
    matrix_rank,
    neg,
    saturate,
)
from shared.models import DeformationClass

logger = structlog.get_logger(__name__)


class RealStructureError(ValueError):
    """Base exception for real structure construction."""


class InvalidRealStructureError(RealStructureError):
    """Matrix is not an involutive isometry reversing K."""


class NonIntegralError(RealStructureError):
    """The requested involution does not preserve the lattice."""


class SaturationMismatchError(RealStructureError):
    """Saturating the generator span changes its root system."""

    def __init__(self, message: str, requested: str, saturated: str):
        super().__init__(message)
        self.requested = requested
        self.saturated = saturated


class CatalogValidationError(RealStructureError):
    """A catalog entry failed validation."""

    def __init__(self, message: str, class_label: str):
        super().__init__(f"{class_label}: {message}")
        self.class_label = class_label


class UnknownClassError(RealStructureError):
    """No catalog entry with this label."""


# =============================================================================
# Real structures
# =============================================================================


@dataclass(frozen=True)
class RealStructure:
    """Involutive isometry sigma of H with sigma(K) = -K."""

    matrix: IntMatrix
    class_label: str | None = None
    generators: tuple[LatticeVector, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if len(self.matrix) != RANK or any(len(row) != RANK for row in self.matrix):
            raise InvalidRealStructureError("real structure must be a 9x9 matrix")
        if matmul(self.matrix, self.matrix) != identity_matrix():
            raise InvalidRealStructureError("matrix is not an involution")
        j = form_matrix()
        transpose = tuple(zip(*self.matrix, strict=True))
        if matmul(transpose, matmul(j, self.matrix)) != j:
            raise InvalidRealStructureError("matrix does not preserve the intersection form")
        if self(CANONICAL) != neg(CANONICAL):
            raise InvalidRealStructureError("matrix does not send K to -K")

    def __call__(self, v: Sequence[int]) -> LatticeVector:
        return apply(self.matrix, v)

    @property
    def trace(self) -> int:
        return sum(self.matrix[i][i] for i in range(RANK))

    @property
    def euler_characteristic(self) -> int:
        """Lefschetz number 2 + trace on H2 of the real locus."""
        return 2 + self.trace

    def labelled(self, label: str) -> "RealStructure":
        return replace(self, class_label=label)


def involution_from_subsystem(generators: Iterable[Sequence[int]]) -> RealStructure:
    """
    sigma = -1 on K and on the span of the generators, +1 on the rest.

    Raises:
        NonIntegralError: If sigma does not preserve the lattice.
        SaturationMismatchError: If the saturated span has more roots.
    """
    gens = tuple(tuple(g) for g in generators)
    span = Sublattice.span(gens)
    saturated = saturate(span)
    roots = enumerate_roots()
    requested = dynkin_type(simple_system([r for r in roots if span.contains(r)]))
    actual = dynkin_type(simple_system([r for r in roots if saturated.contains(r)]))
    if requested != actual:
        raise SaturationMismatchError(
            f"span has type {requested} but its saturation has type {actual}", requested, actual
        )

    columns = [CANONICAL, *span.basis]
    b = Matrix([list(c) for c in columns]).T
    j = Matrix(form_matrix())
    gram = b.T * j * b
    sigma = eye(RANK) - 2 * b * gram.inv() * b.T * j
    try:
        matrix = from_sympy(sigma)
    except LatticeError as e:
        raise NonIntegralError(f"involution is not integral: {e}")
    return RealStructure(matrix, generators=gens)


def bertini_matrix() -> IntMatrix:
    """tau(x) = -x + 2 (x.K) K: +1 on K, -1 on K-perp."""
    j = form_matrix()
    return tuple(
        tuple(
            (-1 if i == col else 0) + 2 * CANONICAL[i] * j[col][col] * CANONICAL[col]
            for col in range(RANK)
        )
        for i in range(RANK)
    )


def bertini_dual(sigma: RealStructure) -> RealStructure:
    """sigma composed with the Bertini involution."""
    return RealStructure(matmul(sigma.matrix, bertini_matrix()))


def real_roots(sigma: RealStructure) -> tuple[LatticeVector, ...]:
    """Roots e with sigma(e) = -e."""
    return tuple(e for e in enumerate_roots() if sigma(e) == neg(e))


def real_exceptional(sigma: RealStructure) -> tuple[LatticeVector, ...]:
    """Exceptional classes v with sigma(v) = -v."""
    return tuple(v for v in enumerate_exceptional() if sigma(v) == neg(v))


def real_simple_system(sigma: RealStructure, base: int = 100) -> SimpleSystem:
    return simple_system(real_roots(sigma), base)


def root_rank(roots: Sequence[LatticeVector]) -> int:
    return matrix_rank(roots)


# =============================================================================
# Catalog
# =============================================================================


@dataclass(frozen=True)
class CatalogEntry:
    """A deformation class record with its validated real structure."""

    record: DeformationClass
    structure: RealStructure

    @property
    def label(self) -> str:
        return self.record.label


def _validate_entry(entry: CatalogEntry, base: int) -> None:
    record, sigma = entry.record, entry.structure
    roots = real_roots(sigma)
    eigen_type = dynkin_type(simple_system(roots, base))
    if eigen_type != record.eigen_type:
        raise CatalogValidationError(
            f"eigen type {eigen_type} != expected {record.eigen_type}", record.label
        )
    if len(roots) != record.expected_lines:
        raise CatalogValidationError(
            f"{len(roots)} real roots != expected {record.expected_lines}", record.label
        )
    if len(real_exceptional(sigma)) != record.expected_lines:
        raise CatalogValidationError("real exceptional classes miss real roots", record.label)

    partner = record_for(record.bertini_partner)
    if partner is None:
        raise CatalogValidationError(f"partner {record.bertini_partner} missing", record.label)
    dual_roots = real_roots(bertini_dual(sigma))
    dual_type = dynkin_type(simple_system(dual_roots, base))
    if dual_type != partner.eigen_type:
        raise CatalogValidationError(
            f"dual has type {dual_type}, partner {partner.label} expects {partner.eigen_type}",
            record.label,
        )
    if root_rank(roots) + root_rank(dual_roots) != RANK - 1:
        raise CatalogValidationError("real root ranks of the Bertini pair do not sum to 8", record.label)


@lru_cache
def build_catalog(base: int = 100, validate: bool = True) -> tuple[CatalogEntry, ...]:
    """
    Realize all eleven classes and validate them.

    Raises:
        CatalogValidationError: On the first entry that fails.
    """
    basis = e8_basis(base)
    structures: dict[str, RealStructure] = {}
    for label, indices in WITNESSES.items():
        sigma = involution_from_subsystem(basis[i - 1] for i in indices)
        structures[label] = sigma.labelled(label)
    for label, partner in DUAL_OF.items():
        structures[label] = bertini_dual(structures[partner]).labelled(label)

    entries = tuple(CatalogEntry(r, structures[r.label]) for r in CLASS_RECORDS)
    if validate:
        for entry in entries:
            _validate_entry(entry, base)
    logger.info("catalog_built", classes=len(entries), version=CATALOG_VERSION, validated=validate)
    return entries


class RealStructureService:
    """
    Catalog access and real structure queries.
    """

    def __init__(self, settings: Settings | None = None):
        """
        Initialize real structure service.

        Args:
            settings: Settings instance. If None, loads from environment.
        """
        self.settings = settings or get_settings()

    @property
    def base(self) -> int:
        return self.settings.roots.positivity_base

    def catalog(self) -> tuple[CatalogEntry, ...]:
        return build_catalog(self.base, self.settings.catalog.validate_on_build)

    def entry(self, label: str) -> CatalogEntry:
        """
        Catalog entry by label.

        Raises:
            UnknownClassError: If the label is not in the catalog.
        """
        for entry in self.catalog():
            if entry.label == label:
                return entry
        known = ", ".join(e.label for e in self.catalog())
        raise UnknownClassError(f"unknown class {label!r}; expected one of {known}")

    def structure(self, label: str) -> RealStructure:
        return self.entry(label).structure

    def bertini_pairs(self) -> list[tuple[CatalogEntry, CatalogEntry]]:
        """Seven unordered pairs (X+, X-), self-paired classes included once."""
        pairs = []
        seen: set[str] = set()
        for entry in self.catalog():
            if entry.label in seen:
                continue
            partner = self.entry(entry.record.bertini_partner)
            seen.update({entry.label, partner.label})
            pairs.append((entry, partner))
        return pairs

    def real_simple_system(self, sigma: RealStructure) -> SimpleSystem:
        return real_simple_system(sigma, self.base)

    def describe(self, entry: CatalogEntry) -> dict[str, object]:
        """Catalog audit row: record fields plus what was computed from sigma."""
        record, sigma = entry.record, entry.structure
        topology = parse_topology(record.label)
        dual = bertini_dual(sigma)
        return {
            "class": record.label,
            "topology": record.topology,
            "smith_type": record.smith_type,
            "components": topology.components,
            "euler_characteristic": sigma.euler_characteristic,
            "eigen_type": dynkin_type(self.real_simple_system(sigma)),
            "dual_eigen_type": dynkin_type(self.real_simple_system(dual)),
            "bertini_partner": record.bertini_partner,
            "arrangement": record.arrangement,
            "expected_lines": record.expected_lines,
            "expected_hyperbolic": record.expected_h,
            "expected_elliptic": record.expected_e,
            "catalog_version": CATALOG_VERSION,
        }


def get_real_structure_service() -> RealStructureService:
    """Create and return a RealStructureService instance."""
    return RealStructureService()
