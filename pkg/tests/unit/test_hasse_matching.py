"""
Unit tests for Hasse posets and cover matchings.
"""

import pytest

from services.hasse_matching.service import (
    BasisMismatchError,
    Pairing,
    hasse_covers,
    pair_matching,
    signed_sum_from_pairing,
    transport_pairing,
    verify_cancelation,
)
from services.pin_quadratic.service import QuadraticFunction, line_counts, special_basis
from shared.lattice import inner, sub


@pytest.fixture(scope="module")
def klein_lines(real_structure_service, pin_quadratic_service):
    sigma = real_structure_service.structure("RP2+Klein")
    return pin_quadratic_service.lines(sigma)


class TestHassePoset:
    """Tests for the cover relation."""

    def test_e8_poset(self, root_service):
        poset = hasse_covers(root_service.standard_system("E8"))
        assert len(poset.nodes) == 120
        assert len(poset.maximal()) == 1
        heights = poset.heights
        assert max(heights.values()) == 29

    def test_covers_step_by_one(self, root_service):
        system = root_service.standard_system("D6")
        poset = hasse_covers(system)
        heights = poset.heights
        for f, g in poset.covers:
            assert heights[g] == heights[f] + 1
            assert sub(g, f) in system.roots
            assert inner(f, sub(g, f)) == 1

    def test_graph(self, root_service):
        poset = hasse_covers(root_service.standard_system("D4"))
        graph = poset.graph()
        assert graph.number_of_nodes() == 12
        assert graph.number_of_edges() == len(poset.covers)

    def test_a1_has_no_covers(self, root_service):
        poset = hasse_covers(root_service.standard_system("A1"))
        assert poset.covers == ()


class TestPairMatching:
    """Tests for perfect cover matchings."""

    @pytest.mark.parametrize("label,pairs", [("E8", 56), ("E7", 28), ("D6", 12), ("D4", 4), ("A1", 0)])
    def test_pair_counts(self, root_service, label, pairs):
        system = root_service.standard_system(label)
        pairing = pair_matching(system)
        assert len(pairing) == pairs

    def test_pairs_are_covers(self, root_service):
        system = root_service.standard_system("E7")
        poset = hasse_covers(system)
        pairing = pair_matching(system)
        covers = set(poset.covers)
        assert all(pair in covers for pair in pairing.pairs)

    def test_exhaustive_and_disjoint(self, root_service):
        system = root_service.standard_system("E8")
        poset = hasse_covers(system)
        pairing = pair_matching(system)
        non_simple = {root for root, _ in poset.nodes} - set(system.roots)
        flat = [r for pair in pairing.pairs for r in pair]
        assert len(flat) == len(set(flat))
        assert pairing.roots() == non_simple

    def test_deterministic(self, root_service):
        system = root_service.standard_system("D6")
        assert pair_matching(system) == pair_matching(system)

    def test_disconnected_system(self, root_service):
        """Test that D4+A1 pairs only inside D4."""
        pairing = pair_matching(root_service.standard_system("D4+A1"))
        assert len(pairing) == 4

    def test_service_caches(self, hasse_service, root_service):
        system = root_service.standard_system("E7")
        assert hasse_service.pairing(system) is hasse_service.pairing(system)


class TestCancelation:
    """Tests for transported pairings under admissible functions."""

    def test_every_admissible_chi_cancels(self, klein_lines, hasse_service):
        rank = klein_lines.model.rank
        for f in klein_lines.admissible:
            basis = special_basis(f)
            pairing = hasse_service.pairing_for(basis)
            assert verify_cancelation(f, pairing)
            assert signed_sum_from_pairing(f, pairing) == 2 * rank

    def test_transport_preserves_size(self, klein_lines, hasse_service):
        basis = special_basis(klein_lines.first)
        base_pairing = hasse_service.pairing(klein_lines.model.simple)
        moved = transport_pairing(base_pairing, basis)
        assert len(moved) == len(base_pairing)
        assert moved.simple == basis.roots

    def test_transport_requires_matching_base(self, klein_lines):
        basis = special_basis(klein_lines.first)
        stray = Pairing(basis.roots[:1], ())
        with pytest.raises(BasisMismatchError):
            transport_pairing(stray, basis)

    def test_nonvanishing_basis_rejected(self, klein_lines, hasse_service):
        """Test that chi = 0 (qhat = 2 on simple roots) is refused."""
        f = QuadraticFunction(klein_lines.model, (0,) * (klein_lines.model.rank + 1))
        pairing = hasse_service.pairing(klein_lines.model.simple)
        with pytest.raises(BasisMismatchError):
            verify_cancelation(f, pairing)

    def test_signed_sum_counts_basis_roots(self, klein_lines, hasse_service):
        """Test that basis roots enter the signed sum alongside paired ones."""
        f = QuadraticFunction(klein_lines.model, (0,) * (klein_lines.model.rank + 1))
        pairing = hasse_service.pairing(klein_lines.model.simple)
        # qhat = 2 on every D4 root, 12 positive roots
        assert signed_sum_from_pairing(f, pairing) == -24

    def test_signed_sum_independent_of_pairing(self, klein_lines, hasse_service):
        first, *rest = klein_lines.admissible
        pairing = hasse_service.pairing_for(special_basis(first))
        for f in rest:
            assert signed_sum_from_pairing(f, pairing) == line_counts(f).signed_sum
