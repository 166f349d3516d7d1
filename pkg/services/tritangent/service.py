"""
Real tritangent sections of sextics on the quadric cone.

A tritangent section of w^2 = y^3 + p2 y^2 + p4 y + p6 over the cone exists
exactly when p6 or -p6 is the square of a cubic q3. It is hyperbolic when
p4 is positive at an odd number of real roots of q3, which is the same as
Res(p4, q3) > 0.
"""

import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import structlog
from sympy import Rational

from services.pin_quadratic.service import PinQuadraticService
from services.real_structures.catalog import (
    ARRANGEMENTS,
    EXPECTED_TRITANGENTS,
    normalize_arrangement,
)
from services.real_structures.service import RealStructureService, bertini_dual
from services.roots.service import e8_basis, is_root
from services.tritangent.forms import (
    BinaryForm,
    DegenerateCurveError,
    FormError,
    TritangentError,
    parse_rational,
    real_root_signs,
    resultant,
    sqrt_form,
)
from shared.config import Settings, get_settings
from shared.lattice import CANONICAL, RANK, LatticeVector, Sublattice, matrix_rank, orthogonal_complement
from shared.models import Side, Species, TritangentVerdict

logger = structlog.get_logger(__name__)

_SEXTIC_TERM = re.compile(r"^\s*(\d)(\d)(\d)\s*=\s*(.+)$")

Monomial = tuple[int, int, int]


class NotTritangentError(TritangentError):
    """Neither p6 nor -p6 is the square of a cubic form."""


class NotSymmetricError(TritangentError):
    """Sextic has a term of odd degree in x2."""


class ThroughCenterError(TritangentError):
    """Sextic passes through [0:0:1]."""


class DependentNodesError(TritangentError):
    """Node roots are not linearly independent together with K."""


class UnknownArrangementError(TritangentError):
    """Arrangement code is not one of the seven known ones."""


# =============================================================================
# Classification
# =============================================================================


def classify_tritangent(p2: BinaryForm, p4: BinaryForm, p6: BinaryForm) -> TritangentVerdict:
    """
    Side and species of the tritangent section cut by y = 0 in the chart.

    p2 is validated but otherwise unused; y -> -y fixes p4 and negates p6.

    Raises:
        FormError: If the degrees are not 2, 4 and 6.
        DegenerateCurveError: If p6 vanishes identically.
        NotTritangentError: If neither p6 nor -p6 is a square.
        SharedRootError: If p4 and q3 share a root.
    """
    for name, form, degree in (("p2", p2, 2), ("p4", p4, 4), ("p6", p6, 6)):
        if form.degree != degree:
            raise FormError(f"{name} must have degree {degree}, got {form.degree}")
    if p6.is_zero:
        raise DegenerateCurveError("p6 vanishes identically")

    side = Side.PLUS
    q3 = sqrt_form(p6)
    if q3 is None:
        side = Side.MINUS
        q3 = sqrt_form(-p6)
    if q3 is None:
        raise NotTritangentError("neither p6 nor -p6 is the square of a cubic form")

    real, positive = real_root_signs(p4, q3)
    verdict = TritangentVerdict(
        side=side,
        species=Species.HYPERBOLIC if positive % 2 else Species.ELLIPTIC,
        resultant=resultant(p4, q3),
        positive_real_tangencies=positive,
        real_tangencies=real,
    )
    logger.debug("tritangent_classified", side=side.value, species=verdict.species.value)
    return verdict


def species_by_resultant(p4: BinaryForm, q3: BinaryForm) -> Species:
    res = resultant(p4, q3)
    if res == 0:
        raise DegenerateCurveError("resultant vanishes")
    return Species.HYPERBOLIC if res > 0 else Species.ELLIPTIC


def species_by_parity(p4: BinaryForm, q3: BinaryForm) -> Species:
    _, positive = real_root_signs(p4, q3)
    return Species.HYPERBOLIC if positive % 2 else Species.ELLIPTIC


# =============================================================================
# Symmetric plane sextics
# =============================================================================


def parse_sextic(text: str) -> dict[Monomial, Rational]:
    """
    Terms "ijk=c" separated by commas, for c x0^i x1^j x2^k.

    Raises:
        FormError: On malformed terms or repeated monomials.
    """
    terms: dict[Monomial, Rational] = {}
    for chunk in text.split(","):
        if not chunk.strip():
            continue
        match = _SEXTIC_TERM.match(chunk)
        if match is None:
            raise FormError(f"malformed sextic term {chunk!r}; expected ijk=c")
        monomial = (int(match.group(1)), int(match.group(2)), int(match.group(3)))
        if monomial in terms:
            raise FormError(f"monomial {monomial} given twice")
        terms[monomial] = parse_rational(match.group(4))
    return terms


def symmetric_to_cone(
    terms: Mapping[Monomial, Rational],
) -> tuple[BinaryForm, BinaryForm, BinaryForm]:
    """
    (p2, p4, p6) = (s2, s1, s0) / s3 for S = s0 + s1 x2^2 + s2 x2^4 + s3 x2^6.

    Raises:
        FormError: If a term is not of degree 6.
        NotSymmetricError: If a term of odd degree in x2 is present.
        ThroughCenterError: If the x2^6 coefficient vanishes.
    """
    parts = {m: [Rational(0)] * (7 - 2 * m) for m in range(4)}
    for (i, j, k), c in terms.items():
        if i + j + k != 6:
            raise FormError(f"term x0^{i} x1^{j} x2^{k} is not of degree 6")
        if c == 0:
            continue
        if k % 2:
            raise NotSymmetricError(f"term x0^{i} x1^{j} x2^{k} is odd in x2")
        parts[k // 2][j] += Rational(c)

    s3 = parts[3][0]
    if s3 == 0:
        raise ThroughCenterError("sextic passes through [0:0:1]")
    p2, p4, p6 = (BinaryForm(tuple(c / s3 for c in parts[m])) for m in (2, 1, 0))
    return p2, p4, p6


# =============================================================================
# Nodal counts
# =============================================================================


def nodal_signed_count(nodes: Iterable[Sequence[int]]) -> int:
    """
    2 rank of the orthogonal complement of <K, nodes>, i.e. 16 - 2k.

    Raises:
        DependentNodesError: If a node is not a root or the nodes are dependent.
    """
    roots = [tuple(e) for e in nodes]
    for e in roots:
        if not is_root(e):
            raise DependentNodesError(f"{e} is not a root")
    generators = [CANONICAL, *roots]
    if matrix_rank(generators) != len(generators):
        raise DependentNodesError(f"{len(roots)} node roots are linearly dependent")
    complement = orthogonal_complement(Sublattice.span(generators))
    return 2 * complement.rank


def standard_nodes(k: int, base: int = 100) -> tuple[LatticeVector, ...]:
    """The first k simple roots of E8, as independent node classes."""
    if not 0 <= k <= RANK - 1:
        raise DependentNodesError(f"at most {RANK - 1} independent nodes, got {k}")
    return e8_basis(base)[:k]


def nodal_tritangent_count(k: int, base: int = 100) -> int:
    """Signed count of real tritangent sections of a k-nodal real sextic on the cone."""
    return nodal_signed_count(standard_nodes(k, base)) // 2


def cubic_conic_count(k: int, base: int = 100) -> int:
    """
    Signed count of origin-symmetric conics tritangent to a k-nodal affine cubic.

    Equal to half the signed tritangent count for 2k nodes.
    """
    if not 0 <= k <= 4:
        raise DependentNodesError(f"a cubic count needs 0 <= k <= 4, got {k}")
    return nodal_tritangent_count(2 * k, base) // 2


# =============================================================================
# Service
# =============================================================================


@dataclass(frozen=True)
class TritangentCount:
    """Real tritangent sections for one arrangement."""

    arrangement: str
    plus_class: str
    minus_class: str
    total: int
    hyperbolic: int
    elliptic: int

    def as_tuple(self) -> tuple[int, int, int]:
        return self.total, self.hyperbolic, self.elliptic


class TritangentService:
    """
    Tritangent classification and tables.
    """

    def __init__(
        self,
        settings: Settings | None = None,
        real_structures: RealStructureService | None = None,
        pin_quadratic: PinQuadraticService | None = None,
    ):
        """
        Initialize tritangent service.

        Args:
            settings: Settings instance. If None, loads from environment.
            real_structures: Catalog service, created from settings if None.
            pin_quadratic: Line count service, created from settings if None.
        """
        self.settings = settings or get_settings()
        self.real_structures = real_structures or RealStructureService(self.settings)
        self.pin_quadratic = pin_quadratic or PinQuadraticService(self.settings)

    def classify(self, p2: BinaryForm, p4: BinaryForm, p6: BinaryForm) -> TritangentVerdict:
        return classify_tritangent(p2, p4, p6)

    def table(self, code: str) -> TritangentCount:
        """
        (total, hyperbolic, elliptic) from the line counts of the Bertini pair.

        Each tritangent section lifts to two lines, one on each of X+ and X-.

        Raises:
            UnknownArrangementError: If the code is not one of the seven.
        """
        arrangement = normalize_arrangement(code)
        label = ARRANGEMENTS.get(arrangement)
        if label is None:
            known = ", ".join(ARRANGEMENTS)
            raise UnknownArrangementError(f"unknown arrangement {code!r}; expected one of {known}")
        entry = self.real_structures.entry(label)
        sigma = entry.structure
        plus = self.pin_quadratic.lines(sigma)
        minus_sigma = bertini_dual(sigma)
        minus = self.pin_quadratic.lines(minus_sigma)
        plus_count, minus_count = plus.count, minus.count
        hyperbolic, odd_h = divmod(plus_count.hyperbolic + minus_count.hyperbolic, 2)
        elliptic, odd_e = divmod(plus_count.elliptic + minus_count.elliptic, 2)
        if odd_h or odd_e:
            raise TritangentError(f"line counts of {arrangement} do not pair up into sections")

        result = TritangentCount(
            arrangement=arrangement,
            plus_class=label,
            minus_class=entry.record.bertini_partner,
            total=hyperbolic + elliptic,
            hyperbolic=hyperbolic,
            elliptic=elliptic,
        )
        logger.info("tritangent_table", arrangement=arrangement, counts=result.as_tuple())
        return result

    def expected(self, code: str) -> tuple[int, int, int]:
        arrangement = normalize_arrangement(code)
        if arrangement not in EXPECTED_TRITANGENTS:
            raise UnknownArrangementError(f"unknown arrangement {code!r}")
        return EXPECTED_TRITANGENTS[arrangement]

    def nodal(self, k: int) -> dict[str, int]:
        base = self.settings.roots.positivity_base
        payload = {
            "k": k,
            "signed_line_count": nodal_signed_count(standard_nodes(k, base)),
            "signed_tritangent_count": nodal_tritangent_count(k, base),
        }
        if k <= 4:
            payload["signed_cubic_conic_count"] = cubic_conic_count(k, base)
        return payload


def get_tritangent_service() -> TritangentService:
    """Create and return a TritangentService instance."""
    return TritangentService()
