"""
Quadratic functions on the Smith quotient.

The minus eigenlattice ker(1 + sigma) modulo the image (1 - sigma)H models
H1 of the real locus with Z/2 coefficients. A quadratic function is fixed by
a Z/2 functional chi on a Z-basis of the minus lattice:

    qhat(x) = x.x + 2 chi(x)  (mod 4)

Real roots with qhat = 0 give hyperbolic lines, those with qhat = 2 give
elliptic ones.
"""

from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import structlog
from sympy import Matrix

from services.real_structures.service import RealStructure, real_roots
from services.roots.service import SimpleSystem, phi_inverse, reflect, simple_system
from shared.config import Settings, get_settings
from shared.lattice import (
    CANONICAL,
    RANK,
    LatticeVector,
    NotContainedError,
    QuotientF2,
    Sublattice,
    identity_matrix,
    inner,
    integer_kernel,
    quotient_mod2,
    two_kernel,
)
from shared.models import LineCount

logger = structlog.get_logger(__name__)

# Brown invariant from the signs of (Re, Im) of the Gauss sum.
_BROWN_BY_SIGNS = {
    (1, 0): 0,
    (1, 1): 1,
    (0, 1): 2,
    (-1, 1): 3,
    (-1, 0): 4,
    (-1, -1): 5,
    (0, -1): 6,
    (1, -1): 7,
}

QState = tuple[int, ...]


class PinQuadraticError(ValueError):
    """Base exception for quadratic function computations."""


class OutsideMinusLatticeError(PinQuadraticError):
    """Vector is not in ker(1 + sigma)."""


class InadmissibleError(PinQuadraticError):
    """Quadratic function fails the admissibility conditions."""


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


# =============================================================================
# Smith model
# =============================================================================


@dataclass(frozen=True)
class SmithModel:
    """
    Minus lattice, its 2-kernel and the F2 quotient between them.

    `minus_lattice` has basis (K, b1, ..., br) with b the simple real roots,
    which is also the basis chi is stored on.
    """

    sigma: RealStructure
    simple: SimpleSystem
    real_roots: tuple[LatticeVector, ...]
    minus_lattice: Sublattice
    upsilon_kernel: Sublattice
    quotient: QuotientF2

    @property
    def dimension(self) -> int:
        return self.quotient.dimension

    @property
    def rank(self) -> int:
        return self.simple.rank

    @property
    def euler_characteristic(self) -> int:
        return self.sigma.euler_characteristic

    def mod2_betti(self, components: int) -> int:
        """b0 + b1 + b2 of the real locus with the given component count."""
        return 2 * components + self.dimension

    def pairing_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Mod-2 Gram matrix of the quotient basis."""
        lifts = self.quotient.lifts
        return tuple(tuple(inner(u, v) % 2 for v in lifts) for u in lifts)

    def pairing_is_nondegenerate(self) -> bool:
        if self.dimension == 0:
            return True
        return int(Matrix(self.pairing_matrix()).det()) % 2 == 1

    def canonical_is_characteristic(self) -> bool:
        """x.x = x.K mod 2 on the quotient basis, hence on all of V."""
        return all((inner(v, v) - inner(v, CANONICAL)) % 2 == 0 for v in self.quotient.lifts)

    @cached_property
    def _cartan_squares(self) -> tuple[tuple[int, ...], ...]:
        roots = self.simple.roots
        return tuple(tuple(inner(r, s) ** 2 for s in roots) for r in roots)

    def reflect_state(self, state: QState, j: int) -> QState:
        """qhat on s_j(B) from qhat on B."""
        shift = state[j] + 2
        return tuple((q + c[j] * shift) % 4 for q, c in zip(state, self._cartan_squares, strict=True))

    @cached_property
    def zero_orbit(self) -> dict[QState, tuple[QState, int] | None]:
        """Breadth-first tree of states reachable from the all-zero state."""
        start: QState = (0,) * self.rank
        parents: dict[QState, tuple[QState, int] | None] = {start: None}
        queue = deque([start])
        while queue:
            state = queue.popleft()
            for j in range(self.rank):
                nxt = self.reflect_state(state, j)
                if nxt not in parents:
                    parents[nxt] = (state, j)
                    queue.append(nxt)
        return parents

    def word_to_zero(self, state: QState) -> tuple[int, ...] | None:
        """Reflection indices taking `state` to the zero state, or None."""
        if state not in self.zero_orbit:
            return None
        word = []
        step = self.zero_orbit[state]
        while step is not None:
            prev, j = step
            word.append(j)
            step = self.zero_orbit[prev]
        return tuple(word)


def smith_model(sigma: RealStructure, base: int = 100) -> SmithModel:
    """
    Build the Smith model of a real structure.

    Raises:
        PinQuadraticError: If the minus lattice is not K plus the real root
            lattice, or the two descriptions of the kernel disagree.
        LatticeError: If the quotient is not an F2 space.
    """
    roots = real_roots(sigma)
    simple = simple_system(roots, base)
    minus = Sublattice((CANONICAL, *simple.roots))

    plus_one = tuple(
        tuple(identity_matrix()[i][j] + sigma.matrix[i][j] for j in range(RANK)) for i in range(RANK)
    )
    if not minus.same_lattice(Sublattice(integer_kernel(plus_one), check=False)):
        raise PinQuadraticError("ker(1 + sigma) is not spanned by K and the real roots")

    columns = [
        tuple(identity_matrix()[i][j] - sigma.matrix[i][j] for i in range(RANK)) for j in range(RANK)
    ]
    upsilon = Sublattice.span(columns)
    if not upsilon.same_lattice(two_kernel(minus)):
        raise PinQuadraticError("(1 - sigma)H differs from the 2-kernel of the minus lattice")

    quotient = quotient_mod2(minus, upsilon)
    logger.debug(
        "smith_model_built",
        class_label=sigma.class_label,
        rank=simple.rank,
        dimension=quotient.dimension,
    )
    return SmithModel(sigma, simple, roots, minus, upsilon, quotient)


# =============================================================================
# Quadratic functions
# =============================================================================


@dataclass(frozen=True)
class QuadraticFunction:
    """chi values on the basis (K, b1, ..., br) of the minus lattice."""

    model: SmithModel = field(compare=False, repr=False)
    chi: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.chi) != self.model.minus_lattice.rank:
            raise PinQuadraticError(
                f"chi has {len(self.chi)} values, minus lattice has rank {self.model.minus_lattice.rank}"
            )
        if any(c not in (0, 1) for c in self.chi):
            raise PinQuadraticError(f"chi values must be 0 or 1: {self.chi}")

    def __call__(self, x: Sequence[int]) -> int:
        return qhat(self, x)

    def state(self, basis: Sequence[LatticeVector] | None = None) -> QState:
        roots = self.model.simple.roots if basis is None else basis
        return tuple(qhat(self, r) for r in roots)


def qhat(f: QuadraticFunction, x: Sequence[int]) -> int:
    """
    (x.x + 2 chi(x)) mod 4.

    Raises:
        OutsideMinusLatticeError: If x is not in ker(1 + sigma).
    """
    try:
        coordinates = f.model.minus_lattice.coordinates(x)
    except NotContainedError as e:
        raise OutsideMinusLatticeError(f"{tuple(x)} is not in the minus lattice") from e
    chi = sum(c * v for c, v in zip(coordinates, f.chi, strict=True))
    return (inner(x, x) + 2 * chi) % 4


def vanishes_on_kernel(f: QuadraticFunction) -> bool:
    """qhat is additive on (1 - sigma)H, so generators suffice."""
    return all(qhat(f, g) == 0 for g in f.model.upsilon_kernel.basis)


@dataclass(frozen=True)
class SpecialBasis:
    """A simple system of the real roots on which qhat vanishes."""

    base: tuple[LatticeVector, ...]
    word: tuple[int, ...]
    roots: tuple[LatticeVector, ...]

    def transport(self, x: Sequence[int]) -> LatticeVector:
        """The Weyl element taking `base` onto `roots`, applied to x."""
        result = tuple(x)
        for j in reversed(self.word):
            result = reflect(result, self.base[j])
        return result

    @property
    def system(self) -> SimpleSystem:
        return SimpleSystem(self.roots)


def special_basis(f: QuadraticFunction) -> SpecialBasis | None:
    """
    Coxeter basis of the real roots inside {qhat = 0}, found by a
    deterministic breadth-first search over simple reflections.
    """
    model = f.model
    if qhat(f, CANONICAL) != 1 or not vanishes_on_kernel(f):
        return None
    word = model.word_to_zero(f.state())
    if word is None:
        return None

    current = list(model.simple.roots)
    for j in word:
        pivot = current[j]
        current = [reflect(r, pivot) for r in current]
    basis = SpecialBasis(model.simple.roots, word, tuple(current))
    if any(qhat(f, r) for r in basis.roots):
        raise PinQuadraticError("reflection search produced a basis with nonzero qhat")
    return basis


def is_admissible(f: QuadraticFunction) -> bool:
    return f.chi[0] == 0 and special_basis(f) is not None


def admissible_chis(model: SmithModel) -> tuple[QuadraticFunction, ...]:
    """Every chi with chi(K) = 0, vanishing on the kernel and with a special basis."""
    found = []
    for tail in product((0, 1), repeat=model.rank):
        f = QuadraticFunction(model, (0, *tail))
        if is_admissible(f):
            found.append(f)
    logger.debug("admissible_chis", class_label=model.sigma.class_label, count=len(found))
    return tuple(found)


def line_counts(f: QuadraticFunction) -> LineCount:
    """
    Hyperbolic and elliptic real lines for an admissible quadratic function.

    Raises:
        InadmissibleError: If f is not admissible.
    """
    if not is_admissible(f):
        raise InadmissibleError(f"chi {f.chi} is not admissible")
    hyperbolic = elliptic = 0
    for e in f.model.real_roots:
        value = qhat(f, e)
        if qhat(f, phi_inverse(e)) != (1 + value) % 4:
            raise PinQuadraticError(f"qhat disagrees between root {e} and its line")
        if value == 0:
            hyperbolic += 1
        else:
            elliptic += 1
    return LineCount(hyperbolic=hyperbolic, elliptic=elliptic, signed_sum=hyperbolic - elliptic)


def gauss_sum(f: QuadraticFunction) -> tuple[int, int]:
    """Sum of i^q over the quotient, as (real, imaginary)."""
    counts = [0, 0, 0, 0]
    quotient = f.model.quotient
    for bits in product((0, 1), repeat=quotient.dimension):
        counts[qhat(f, quotient.lift(bits))] += 1
    return counts[0] - counts[2], counts[1] - counts[3]


def brown_invariant(f: QuadraticFunction) -> int:
    """
    Brown invariant in Z/8 of the quadratic function on the quotient.

    Raises:
        PinQuadraticError: If |Gauss sum|^2 != 2^dim, i.e. q is degenerate.
    """
    real, imaginary = gauss_sum(f)
    if real * real + imaginary * imaginary != 2**f.model.dimension:
        raise PinQuadraticError(f"Gauss sum {real}+{imaginary}i has the wrong modulus")
    return _BROWN_BY_SIGNS[(_sign(real), _sign(imaginary))]


# =============================================================================
# Service
# =============================================================================


@dataclass(frozen=True)
class ClassLines:
    """Line counts of one real structure over its admissible quadratic functions."""

    model: SmithModel
    admissible: tuple[QuadraticFunction, ...]
    counts: tuple[LineCount, ...]
    brown_invariants: tuple[int, ...]

    @property
    def count(self) -> LineCount:
        return self.counts[0]

    @property
    def counts_agree(self) -> bool:
        return len(set(self.counts)) == 1

    @property
    def first(self) -> QuadraticFunction:
        return self.admissible[0]


class PinQuadraticService:
    """
    Smith models and line counts, cached per real structure.
    """

    def __init__(self, settings: Settings | None = None):
        """
        Initialize quadratic function service.

        Args:
            settings: Settings instance. If None, loads from environment.
        """
        self.settings = settings or get_settings()
        self._models: dict[tuple[tuple[int, ...], ...], SmithModel] = {}
        self._lines: dict[tuple[tuple[int, ...], ...], ClassLines] = {}

    def model(self, sigma: RealStructure) -> SmithModel:
        if sigma.matrix not in self._models:
            self._models[sigma.matrix] = smith_model(sigma, self.settings.roots.positivity_base)
        return self._models[sigma.matrix]

    def lines(self, sigma: RealStructure) -> ClassLines:
        """
        Counts for every admissible chi of sigma.

        Raises:
            InadmissibleError: If no quadratic function is admissible.
        """
        if sigma.matrix in self._lines:
            return self._lines[sigma.matrix]
        model = self.model(sigma)
        admissible = admissible_chis(model)
        if not admissible:
            raise InadmissibleError(f"no admissible quadratic function for {sigma.class_label}")
        counts = tuple(line_counts(f) for f in admissible)
        brown = tuple(sorted({brown_invariant(f) for f in admissible}))
        result = ClassLines(model, admissible, counts, brown)
        if not result.counts_agree:
            logger.warning("line_counts_depend_on_chi", class_label=sigma.class_label)
        logger.info(
            "line_counts",
            class_label=sigma.class_label,
            hyperbolic=result.count.hyperbolic,
            elliptic=result.count.elliptic,
            admissible=len(admissible),
        )
        self._lines[sigma.matrix] = result
        return result


def get_pin_quadratic_service() -> PinQuadraticService:
    """Create and return a PinQuadraticService instance."""
    return PinQuadraticService()
