"""
Roots and exceptional classes of the degree-1 del Pezzo lattice.

Enumerates the 240 roots of K-perp and the 240 exceptional classes, realizes
the bijection v -> -K - v between them, extracts simple systems from a fixed
positivity functional, and classifies simple systems into ADE types.
"""

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import groupby
from math import isqrt

import networkx as nx
import structlog
from sympy import Matrix

from shared.config import Settings, get_settings
from shared.lattice import (
    CANONICAL,
    RANK,
    IntMatrix,
    LatticeVector,
    add,
    combine,
    from_sympy,
    inner,
    matrix_rank,
    neg,
    scale,
    sub,
)

logger = structlog.get_logger(__name__)

ROOT_COUNT = 240


class RootSystemError(ValueError):
    """Base exception for root system computations."""


class NotARootError(RootSystemError):
    """Vector is not a norm -2 class orthogonal to K."""


class NotExceptionalError(RootSystemError):
    """Vector is not an exceptional class."""


class NotClosedUnderNegationError(RootSystemError):
    """Root set is not closed under negation."""


class NonADEError(RootSystemError):
    """Cartan matrix is not a disjoint union of ADE diagrams."""


# =============================================================================
# Enumeration
# =============================================================================


def is_root(v: Sequence[int]) -> bool:
    return inner(v, CANONICAL) == 0 and inner(v, v) == -2


def is_exceptional(v: Sequence[int]) -> bool:
    return inner(v, v) == -1 and inner(v, CANONICAL) == -1


def _tails(count: int, total: int, squares: int, bound: int) -> Iterator[tuple[int, ...]]:
    """Integer tuples of given length, sum and sum of squares, entries within bound."""
    if count == 0:
        if total == 0 and squares == 0:
            yield ()
        return
    if squares < 0 or total * total > count * squares or (total - squares) % 2:
        return
    limit = min(isqrt(squares), bound)
    for b in range(-limit, limit + 1):
        for tail in _tails(count - 1, total - b, squares - b * b, bound):
            yield (b, *tail)


def _search(degree: int, norm: int, bound: int) -> tuple[LatticeVector, ...]:
    """
    All v = (a; b) with v.K = degree and v.v = norm.

    v.K = -3a - sum(b) and v.v = a^2 - sum(b^2), so for each a the tail has
    sum -3a - degree and square sum a^2 - norm.
    """
    found = []
    for a in range(-bound, bound + 1):
        total = -3 * a - degree
        squares = a * a - norm
        for tail in _tails(RANK - 1, total, squares, bound):
            found.append((a, *tail))
    return tuple(sorted(found))


@lru_cache
def enumerate_roots(bound: int = 3) -> tuple[LatticeVector, ...]:
    """
    All roots e with e.K = 0 and e.e = -2, in lexicographic order.

    |a| <= 3 and |b_i| <= 3 already cover every root.
    """
    roots = _search(0, -2, bound)
    if len(roots) != ROOT_COUNT:
        raise RootSystemError(f"expected {ROOT_COUNT} roots, found {len(roots)}")
    logger.debug("roots_enumerated", count=len(roots))
    return roots


@lru_cache
def enumerate_exceptional() -> tuple[LatticeVector, ...]:
    """
    All exceptional classes v with v.v = v.K = -1, in lexicographic order.

    Cauchy-Schwarz on the tail forces -1 <= a <= 7 and |b_i| <= 7.
    """
    classes = _search(-1, -1, 7)
    if len(classes) != ROOT_COUNT:
        raise RootSystemError(f"expected {ROOT_COUNT} exceptional classes, found {len(classes)}")
    return classes


def phi(v: Sequence[int]) -> LatticeVector:
    """Root -K - v attached to the exceptional class v."""
    if not is_exceptional(v):
        raise NotExceptionalError(f"{tuple(v)} is not an exceptional class")
    return sub(neg(CANONICAL), v)


def phi_inverse(e: Sequence[int]) -> LatticeVector:
    """Exceptional class -K - e attached to the root e."""
    if not is_root(e):
        raise NotARootError(f"{tuple(e)} is not a root")
    return sub(neg(CANONICAL), e)


# =============================================================================
# Reflections and positivity
# =============================================================================


def reflect(x: Sequence[int], root: Sequence[int]) -> LatticeVector:
    """Reflection in a norm -2 root: x + (x.r) r."""
    return add(x, scale(inner(x, root), root))


def apply_word(word: Sequence[int], basis: Sequence[LatticeVector], x: Sequence[int]) -> LatticeVector:
    """Apply s_basis[word[0]] first, then s_basis[word[1]], and so on."""
    result = tuple(x)
    for j in word:
        result = reflect(result, basis[j])
    return result


def positivity_weight(v: Sequence[int], base: int = 100) -> int:
    """Pairing with (N^8, ..., N, 1); lexicographic on coordinates below N/2."""
    weight = 0
    for x in v:
        weight = weight * base + x
    return weight


# =============================================================================
# Simple systems
# =============================================================================


@dataclass(frozen=True)
class SimpleSystem:
    """A Coxeter basis of roots with its Cartan matrix."""

    roots: tuple[LatticeVector, ...]

    def __post_init__(self) -> None:
        for r in self.roots:
            if not is_root(r):
                raise NotARootError(f"{r} is not a root")
        for i, r in enumerate(self.roots):
            for s in self.roots[i + 1 :]:
                if inner(r, s) not in (0, 1):
                    raise RootSystemError(f"simple roots {r}, {s} pair to {inner(r, s)}")
        if matrix_rank(self.roots) != len(self.roots):
            raise RootSystemError("simple roots are linearly dependent")

    @property
    def rank(self) -> int:
        return len(self.roots)

    @cached_property
    def cartan(self) -> IntMatrix:
        return tuple(
            tuple(2 if i == j else -inner(r, s) for j, s in enumerate(self.roots))
            for i, r in enumerate(self.roots)
        )

    @cached_property
    def _adjugate(self) -> tuple[IntMatrix, int]:
        gram = Matrix([[inner(r, s) for s in self.roots] for r in self.roots])
        return from_sympy(gram.adjugate()), int(gram.det())

    def coefficients(self, x: Sequence[int]) -> tuple[int, ...]:
        """
        Coordinates of x in the simple roots.

        Raises:
            RootSystemError: If x is not an integral combination.
        """
        if self.rank == 0:
            if any(x):
                raise RootSystemError(f"{tuple(x)} is not in the root lattice")
            return ()
        adjugate, det = self._adjugate
        pairings = [inner(x, r) for r in self.roots]
        result = []
        for j in range(self.rank):
            numerator = sum(pairings[i] * adjugate[i][j] for i in range(self.rank))
            if numerator % det:
                raise RootSystemError(f"{tuple(x)} is not in the root lattice")
            result.append(numerator // det)
        if combine(result, self.roots) != tuple(x):
            raise RootSystemError(f"{tuple(x)} is not in the span of the simple roots")
        return tuple(result)

    @cached_property
    def graph(self) -> nx.Graph:
        """Dynkin diagram on simple root indices."""
        g = nx.Graph()
        g.add_nodes_from(range(self.rank))
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                if self.cartan[i][j] == -1:
                    g.add_edge(i, j)
        return g

    def components(self) -> list[tuple[int, ...]]:
        """Index sets of the connected Dynkin components, each sorted."""
        parts = [tuple(sorted(c)) for c in nx.connected_components(self.graph)]
        return sorted(parts)

    def restrict(self, indices: Iterable[int]) -> "SimpleSystem":
        return SimpleSystem(tuple(self.roots[i] for i in sorted(indices)))


def simple_system(roots: Iterable[Sequence[int]], base: int = 100) -> SimpleSystem:
    """
    Simple roots of a closed root subsystem for the positivity functional.

    Raises:
        NotARootError: If an input vector is not a root.
        NotClosedUnderNegationError: If some -e is missing.
        RootSystemError: If the input is not a closed subsystem.
    """
    pool = {tuple(r) for r in roots}
    for r in pool:
        if not is_root(r):
            raise NotARootError(f"{r} is not a root")
        if neg(r) not in pool:
            raise NotClosedUnderNegationError(f"{neg(r)} missing from the root set")

    positives = sorted(r for r in pool if positivity_weight(r, base) > 0)
    positive_set = set(positives)
    simple = tuple(
        r for r in positives if not any(sub(r, p) in positive_set for p in positives if p != r)
    )
    system = SimpleSystem(simple)

    generated = {root for root, _ in positive_roots(system)}
    if generated != positive_set:
        raise RootSystemError(
            f"input has {len(positive_set)} positive roots, its simple roots generate {len(generated)}"
        )
    return system


@lru_cache(maxsize=64)
def _positive_roots(simple: tuple[LatticeVector, ...]) -> tuple[tuple[LatticeVector, int], ...]:
    system = SimpleSystem(simple)
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for x in frontier:
            for r in simple:
                y = reflect(x, r)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt

    positives = []
    for root in seen:
        coefficients = system.coefficients(root)
        if all(c >= 0 for c in coefficients):
            positives.append((root, sum(coefficients)))
        elif not all(c <= 0 for c in coefficients):
            raise RootSystemError(f"root {root} has mixed-sign coefficients")
    return tuple(sorted(positives, key=lambda item: (item[1], item[0])))


def positive_roots(s: SimpleSystem) -> tuple[tuple[LatticeVector, int], ...]:
    """Positive roots of the generated subsystem with heights, sorted by height."""
    if s.rank == 0:
        return ()
    return _positive_roots(s.roots)


def all_roots(s: SimpleSystem) -> tuple[LatticeVector, ...]:
    positives = [root for root, _ in positive_roots(s)]
    return tuple(sorted(positives + [neg(r) for r in positives]))


# =============================================================================
# Dynkin types
# =============================================================================

_EXCEPTIONAL_LEGS = {(1, 2, 2): 6, (1, 2, 3): 7, (1, 2, 4): 8}
_FAMILY_ORDER = {"E": 0, "D": 1, "A": 2}


def _component_type(graph: nx.Graph) -> tuple[str, int]:
    n = graph.number_of_nodes()
    if graph.number_of_edges() != n - 1:
        raise NonADEError("Dynkin component contains a cycle")
    branches = [v for v, d in graph.degree() if d >= 3]
    if not branches:
        if any(d > 2 for _, d in graph.degree()):
            raise NonADEError("unexpected vertex degree")
        return "A", n
    if len(branches) > 1 or graph.degree(branches[0]) != 3:
        raise NonADEError("Dynkin component has more than one branch point")

    rest = graph.copy()
    rest.remove_node(branches[0])
    legs = tuple(sorted(len(c) for c in nx.connected_components(rest)))
    if legs[0] == 1 and legs[1] == 1:
        return "D", legs[2] + 3
    if legs in _EXCEPTIONAL_LEGS:
        return "E", _EXCEPTIONAL_LEGS[legs]
    raise NonADEError(f"branch legs {legs} are not of type D or E")


def dynkin_type(s: SimpleSystem) -> str:
    """
    ADE label such as "E8", "D4+A1" or "4A1"; "0" for the empty system.

    Raises:
        NonADEError: If some component is not simply laced ADE.
    """
    if s.rank == 0:
        return "0"
    parts = []
    for component in nx.connected_components(s.graph):
        parts.append(_component_type(s.graph.subgraph(component)))
    parts.sort(key=lambda p: (_FAMILY_ORDER[p[0]], -p[1]))

    terms = []
    for (family, rank), group in groupby(parts):
        count = len(list(group))
        terms.append(f"{count if count > 1 else ''}{family}{rank}")
    return "+".join(terms)


def bourbaki_order(s: SimpleSystem) -> tuple[LatticeVector, ...]:
    """
    Simple roots of an E8 system as (a1, ..., a8) in Bourbaki numbering.

    a4 is the branch node, a2 its short leg, a3-a1 the leg of length two and
    a5-a6-a7-a8 the long leg.
    """
    if dynkin_type(s) != "E8":
        raise RootSystemError(f"expected an E8 system, got {dynkin_type(s)}")
    graph = s.graph
    branch = next(v for v, d in graph.degree() if d == 3)
    rest = graph.copy()
    rest.remove_node(branch)
    legs = {}
    for component in nx.connected_components(rest):
        ordered = sorted(component, key=lambda v: nx.shortest_path_length(graph, branch, v))
        legs[len(ordered)] = ordered
    a3, a1 = legs[2]
    order = [a1, legs[1][0], a3, branch, *legs[4]]
    return tuple(s.roots[i] for i in order)


@lru_cache
def e8_basis(base: int = 100, bound: int = 3) -> tuple[LatticeVector, ...]:
    """Bourbaki-ordered simple roots of the full root system."""
    basis = bourbaki_order(simple_system(enumerate_roots(bound), base))
    logger.debug("e8_basis", basis=basis)
    return basis


# =============================================================================
# Service
# =============================================================================


class RootSystemService:
    """
    Root system queries bound to the configured positivity functional.
    """

    def __init__(self, settings: Settings | None = None):
        """
        Initialize root system service.

        Args:
            settings: Settings instance. If None, loads from environment.
        """
        self.settings = settings or get_settings()
        self.config = self.settings.roots

    @property
    def roots(self) -> tuple[LatticeVector, ...]:
        return enumerate_roots(self.config.coordinate_bound)

    @property
    def exceptional(self) -> tuple[LatticeVector, ...]:
        return enumerate_exceptional()

    def simple_system(self, roots: Iterable[Sequence[int]]) -> SimpleSystem:
        return simple_system(roots, self.config.positivity_base)

    def validate_positivity(self) -> None:
        """Ensure no root pairs to zero with the positivity functional."""
        zero = [r for r in self.roots if positivity_weight(r, self.config.positivity_base) == 0]
        if zero:
            raise RootSystemError(f"positivity functional vanishes on {len(zero)} roots")

    def e8_basis(self) -> tuple[LatticeVector, ...]:
        """Simple roots of the full E8 system in Bourbaki order."""
        self.validate_positivity()
        return e8_basis(self.config.positivity_base, self.config.coordinate_bound)

    def standard_system(self, label: str) -> SimpleSystem:
        """
        Parabolic simple system of type E8, E7, D6, D4 or A1 inside E8.

        Raises:
            RootSystemError: For other labels.
        """
        indices = STANDARD_SUBDIAGRAMS.get(label)
        if indices is None:
            raise RootSystemError(f"no standard subdiagram of type {label!r}")
        basis = self.e8_basis()
        return SimpleSystem(tuple(basis[i - 1] for i in indices))


# Bourbaki indices of parabolic subdiagrams of E8.
STANDARD_SUBDIAGRAMS: dict[str, tuple[int, ...]] = {
    "E8": (1, 2, 3, 4, 5, 6, 7, 8),
    "E7": (1, 2, 3, 4, 5, 6, 7),
    "D6": (2, 3, 4, 5, 6, 7),
    "D4+A1": (2, 3, 4, 5, 7),
    "4A1": (1, 4, 6, 8),
    "D4": (2, 3, 4, 5),
    "3A1": (1, 4, 6),
    "2A1": (1, 4),
    "A1": (1,),
    "0": (),
}


def get_root_system_service() -> RootSystemService:
    """Create and return a RootSystemService instance."""
    return RootSystemService()
