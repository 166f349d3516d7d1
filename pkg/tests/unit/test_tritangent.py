"""
Unit tests for tritangent classification, sextic adapters and nodal counts.
"""

import pytest
from sympy import Rational

from services.tritangent.forms import BinaryForm, DegenerateCurveError, FormError, SharedRootError
from services.tritangent.service import (
    DependentNodesError,
    NotSymmetricError,
    NotTritangentError,
    ThroughCenterError,
    UnknownArrangementError,
    classify_tritangent,
    cubic_conic_count,
    nodal_signed_count,
    nodal_tritangent_count,
    parse_sextic,
    species_by_parity,
    species_by_resultant,
    standard_nodes,
    symmetric_to_cone,
)
from shared.models import Side, Species

P2 = BinaryForm.of([1, 0, 1])
P4_SQUARE = BinaryForm.of([1, 0, 2, 0, 1])
Q3 = BinaryForm.of([0, 1, -1, 0])


class TestClassify:
    """Tests for side and species of a tritangent section."""

    def test_worked_examples(self, golden_tritangents):
        for example in golden_tritangents["examples"]:
            verdict = classify_tritangent(
                BinaryForm.parse(example["p2"], 2),
                BinaryForm.parse(example["p4"], 4),
                BinaryForm.parse(example["p6"], 6),
            )
            assert verdict.side == Side(example["side"]), example["name"]
            assert verdict.species == Species(example["species"]), example["name"]
            assert verdict.real_tangencies == example["real"]
            assert verdict.positive_real_tangencies == example["positive"]

    def test_p2_is_ignored(self):
        a = classify_tritangent(P2, P4_SQUARE, Q3 * Q3)
        b = classify_tritangent(BinaryForm.of([-7, 3, 2]), P4_SQUARE, Q3 * Q3)
        assert a == b

    def test_substitution_invariance(self):
        p4 = BinaryForm.of([-1, 0, 3, 0, 4])
        p6 = Q3 * Q3
        before = classify_tritangent(P2, p4, p6)
        after = classify_tritangent(
            P2.substitute(2, 1, 1, 1), p4.substitute(2, 1, 1, 1), p6.substitute(2, 1, 1, 1)
        )
        assert (after.side, after.species) == (before.side, before.species)
        assert after.positive_real_tangencies == before.positive_real_tangencies

    def test_not_a_tritangent(self):
        with pytest.raises(NotTritangentError):
            classify_tritangent(P2, P4_SQUARE, BinaryForm.of([1, 0, 0, 0, 0, 0, 1]))

    def test_zero_p6(self):
        with pytest.raises(DegenerateCurveError):
            classify_tritangent(P2, P4_SQUARE, BinaryForm.of([0] * 7))

    def test_wrong_degree(self):
        with pytest.raises(FormError):
            classify_tritangent(P2, Q3, Q3 * Q3)

    def test_singular_curve(self):
        """Test that p4 vanishing at a tangency point is rejected."""
        with pytest.raises(SharedRootError):
            classify_tritangent(P2, BinaryForm.of([0, 0, 0, 0, 1]), Q3 * Q3)

    def test_species_helpers_agree(self):
        p4 = BinaryForm.of([-1, 0, 3, 0, 4])
        assert species_by_parity(p4, Q3) == species_by_resultant(p4, Q3) == Species.ELLIPTIC
        assert species_by_parity(P4_SQUARE, Q3) == Species.HYPERBOLIC

    def test_species_by_resultant_degenerate(self):
        with pytest.raises(DegenerateCurveError):
            species_by_resultant(BinaryForm.of([0, 0, 0, 0, 1]), Q3)


class TestSymmetricSextic:
    """Tests for the plane sextic adapter."""

    def test_parse(self):
        terms = parse_sextic("006=1, 204=-1/2")
        assert terms == {(0, 0, 6): 1, (2, 0, 4): Rational(-1, 2)}

    @pytest.mark.parametrize("text", ["ab=1", "006=x", "0061=1"])
    def test_parse_rejects(self, text):
        with pytest.raises(FormError):
            parse_sextic(text)

    def test_parse_repeated(self):
        with pytest.raises(FormError):
            parse_sextic("006=1,006=2")

    def test_to_cone(self):
        """Test division by the x2^6 coefficient."""
        p2, p4, p6 = symmetric_to_cone(parse_sextic("006=2,204=2,402=4,600=-2,060=6"))
        assert p2 == BinaryForm.of([1, 0, 0])
        assert p4 == BinaryForm.of([2, 0, 0, 0, 0])
        assert p6 == BinaryForm.of([-1, 0, 0, 0, 0, 0, 3])

    def test_odd_zero_terms_skipped(self):
        p2, _, _ = symmetric_to_cone(parse_sextic("006=1,105=0,024=1"))
        assert p2 == BinaryForm.of([0, 0, 1])

    def test_odd_term(self):
        with pytest.raises(NotSymmetricError):
            symmetric_to_cone(parse_sextic("006=1,105=1"))

    def test_wrong_degree(self):
        with pytest.raises(FormError):
            symmetric_to_cone(parse_sextic("006=1,004=1"))

    def test_through_center(self):
        with pytest.raises(ThroughCenterError):
            symmetric_to_cone(parse_sextic("600=1,204=1"))


class TestNodalCounts:
    """Tests for signed counts with real nodes."""

    @pytest.mark.parametrize("k", range(9))
    def test_standard_nodes(self, k):
        assert nodal_signed_count(standard_nodes(k)) == 16 - 2 * k
        assert nodal_tritangent_count(k) == 8 - k

    @pytest.mark.parametrize("k", range(5))
    def test_cubic_conics(self, k):
        assert cubic_conic_count(k) == 4 - k

    def test_orthogonal_nodes(self, e8):
        """Test four mutually orthogonal nodes."""
        nodes = [e8[0], e8[3], e8[5], e8[7]]
        assert nodal_signed_count(nodes) == 8

    def test_dependent_nodes(self, e8):
        with pytest.raises(DependentNodesError):
            nodal_signed_count([e8[0], e8[0]])

    def test_non_root_node(self):
        with pytest.raises(DependentNodesError):
            nodal_signed_count([(0, 1, 0, 0, 0, 0, 0, 0, 0)])

    def test_too_many_nodes(self):
        with pytest.raises(DependentNodesError):
            standard_nodes(9)
        with pytest.raises(DependentNodesError):
            cubic_conic_count(5)


class TestTritangentService:
    """Tests for tables built from line counts."""

    def test_tables_match_golden(self, tritangent_service, golden_tritangents):
        for row in golden_tritangents["tables"]:
            count = tritangent_service.table(row["arrangement"])
            assert count.as_tuple() == (row["total"], row["hyperbolic"], row["elliptic"])
            assert count.as_tuple() == tritangent_service.expected(row["arrangement"])

    def test_hyperbolic_excess_is_eight(self, tritangent_service):
        for code in ("<4|0>", "<1|1>", "<0|0>"):
            count = tritangent_service.table(code)
            assert count.hyperbolic - count.elliptic == 8

    def test_pair_labels(self, tritangent_service):
        count = tritangent_service.table("⟨3|0⟩")
        assert count.arrangement == "<3|0>"
        assert count.plus_class == "RP2+3T2"
        assert count.minus_class == "RP2+3S2"

    def test_unknown_arrangement(self, tritangent_service):
        with pytest.raises(UnknownArrangementError):
            tritangent_service.table("<5|0>")
        with pytest.raises(UnknownArrangementError):
            tritangent_service.expected("<5|0>")

    def test_nodal(self, tritangent_service):
        assert tritangent_service.nodal(2) == {
            "k": 2,
            "signed_line_count": 12,
            "signed_tritangent_count": 6,
            "signed_cubic_conic_count": 2,
        }
        assert "signed_cubic_conic_count" not in tritangent_service.nodal(6)

    def test_classify(self, tritangent_service):
        verdict = tritangent_service.classify(P2, P4_SQUARE, Q3 * Q3)
        assert verdict.species == Species.HYPERBOLIC
