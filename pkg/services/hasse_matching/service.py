"""
Hasse poset of positive roots and its cover matchings.

Non-simple positive roots split into pairs (f, f + b) adjacent in the Hasse
diagram. Since qhat(f + b) = qhat(f) + qhat(b) + 2 f.b and f.b = 1, each
pair has distinct qhat once qhat vanishes on the simple roots, so the pairs
cancel in the signed count and only the basis survives.
"""

from collections.abc import Sequence
from dataclasses import dataclass

import networkx as nx
import structlog

from services.pin_quadratic.service import QuadraticFunction, SpecialBasis, qhat
from services.roots.service import SimpleSystem, positive_roots
from shared.config import Settings, get_settings
from shared.lattice import LatticeVector, add, inner

logger = structlog.get_logger(__name__)

RootPair = tuple[LatticeVector, LatticeVector]


class MatchingError(ValueError):
    """Base exception for Hasse poset computations."""


class MatchingNotFoundError(MatchingError):
    """No perfect cover matching of the non-simple positive roots."""

    def __init__(self, message: str, component: tuple[int, ...] = ()):
        super().__init__(message)
        self.component = component


class BasisMismatchError(MatchingError):
    """qhat does not vanish on the simple roots the pairing was built from."""


# =============================================================================
# Poset
# =============================================================================


@dataclass(frozen=True)
class HassePoset:
    """Positive roots with heights and the covers g = f + b, b simple."""

    simple: SimpleSystem
    nodes: tuple[tuple[LatticeVector, int], ...]
    covers: tuple[RootPair, ...]

    @property
    def heights(self) -> dict[LatticeVector, int]:
        return dict(self.nodes)

    def maximal(self) -> tuple[LatticeVector, ...]:
        lower = {f for f, _ in self.covers}
        return tuple(root for root, _ in self.nodes if root not in lower)

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(root for root, _ in self.nodes)
        g.add_edges_from(self.covers)
        return g


def hasse_covers(s: SimpleSystem) -> HassePoset:
    """
    Cover relation on the positive roots of a simple system.

    Raises:
        MatchingError: If a cover breaks f.b = 1 or the height step.
    """
    nodes = positive_roots(s)
    heights = dict(nodes)
    covers = []
    for f, height in nodes:
        for b in s.roots:
            g = add(f, b)
            if g not in heights:
                continue
            if inner(f, b) != 1 or heights[g] != height + 1:
                raise MatchingError(f"cover {f} < {g} breaks the root-string rule")
            covers.append((f, g))
    return HassePoset(s, nodes, tuple(covers))


# =============================================================================
# Matching
# =============================================================================


@dataclass(frozen=True)
class Pairing:
    """Disjoint cover pairs exhausting the non-simple positive roots."""

    simple: tuple[LatticeVector, ...]
    pairs: tuple[RootPair, ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def roots(self) -> set[LatticeVector]:
        return {r for pair in self.pairs for r in pair}


def _component_of(root_coefficients: Sequence[int], components: list[tuple[int, ...]]) -> int:
    support = {i for i, c in enumerate(root_coefficients) if c}
    for k, component in enumerate(components):
        if support <= set(component):
            return k
    raise MatchingError(f"root support {sorted(support)} spans several components")


def pair_matching(s: SimpleSystem) -> Pairing:
    """
    Perfect matching of non-simple positive roots by covers, per component.

    Nodes are inserted by (height, root) so the matching is reproducible.

    Raises:
        MatchingNotFoundError: If some component has no perfect matching.
    """
    poset = hasse_covers(s)
    simple = set(s.roots)
    components = s.components()
    graphs = [nx.Graph() for _ in components]
    owner: dict[LatticeVector, int] = {}
    for root, _ in poset.nodes:
        if root in simple:
            continue
        k = _component_of(s.coefficients(root), components)
        owner[root] = k
        graphs[k].add_node(root)
    for f, g in poset.covers:
        if f in owner and g in owner:
            graphs[owner[f]].add_edge(f, g)

    pairs: list[RootPair] = []
    for component, graph in zip(components, graphs, strict=True):
        if graph.number_of_nodes() == 0:
            continue
        matching = nx.max_weight_matching(graph, maxcardinality=True)
        if not nx.is_perfect_matching(graph, matching):
            raise MatchingNotFoundError(
                f"no perfect cover matching on component {component}", component
            )
        heights = poset.heights
        for u, v in matching:
            pairs.append((u, v) if heights[u] < heights[v] else (v, u))

    pairs.sort(key=lambda pair: (poset.heights[pair[0]], pair[0]))
    logger.debug("pair_matching", rank=s.rank, pairs=len(pairs))
    return Pairing(s.roots, tuple(pairs))


def transport_pairing(pairing: Pairing, basis: SpecialBasis) -> Pairing:
    """Carry a pairing built on `basis.base` over to `basis.roots`."""
    if tuple(pairing.simple) != tuple(basis.base):
        raise BasisMismatchError("pairing was not built on the base of this special basis")
    pairs = tuple((basis.transport(u), basis.transport(v)) for u, v in pairing.pairs)
    return Pairing(basis.roots, pairs)


def verify_cancelation(f: QuadraticFunction, pairing: Pairing) -> bool:
    """
    True iff every pair has distinct qhat values.

    Raises:
        BasisMismatchError: If qhat is nonzero on a simple root of the pairing.
    """
    for b in pairing.simple:
        if qhat(f, b) != 0:
            raise BasisMismatchError(f"qhat({b}) = {qhat(f, b)} on the pairing's basis")
    return all(qhat(f, u) != qhat(f, v) for u, v in pairing.pairs)


def signed_sum_from_pairing(f: QuadraticFunction, pairing: Pairing) -> int:
    """2 (sum of s over the basis and over both ends of every pair), s = +1 on qhat 0, -1 otherwise."""

    def s(x: LatticeVector) -> int:
        return 1 if qhat(f, x) == 0 else -1

    total = sum(s(b) for b in pairing.simple) + sum(s(u) + s(v) for u, v in pairing.pairs)
    return 2 * total


# =============================================================================
# Service
# =============================================================================


class HasseMatchingService:
    """
    Posets and matchings for simple systems, cached by their roots.
    """

    def __init__(self, settings: Settings | None = None):
        """
        Initialize Hasse matching service.

        Args:
            settings: Settings instance. If None, loads from environment.
        """
        self.settings = settings or get_settings()
        self._pairings: dict[tuple[LatticeVector, ...], Pairing] = {}

    def poset(self, s: SimpleSystem) -> HassePoset:
        return hasse_covers(s)

    def pairing(self, s: SimpleSystem) -> Pairing:
        if s.roots not in self._pairings:
            self._pairings[s.roots] = pair_matching(s)
        return self._pairings[s.roots]

    def pairing_for(self, basis: SpecialBasis) -> Pairing:
        """Matching on the special basis, transported from its base system."""
        return transport_pairing(self.pairing(SimpleSystem(basis.base)), basis)


def get_hasse_matching_service() -> HasseMatchingService:
    """Create and return a HasseMatchingService instance."""
    return HasseMatchingService()
