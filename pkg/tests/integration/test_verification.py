"""
Integration tests for the acceptance suite.
"""

import pytest

from services.cli.verification import GROUPS, VerificationService
from shared.models import CheckResult

pytestmark = pytest.mark.integration


@pytest.fixture(scope="module")
def verification(
    settings, root_service, real_structure_service, pin_quadratic_service, hasse_service, tritangent_service
):
    return VerificationService(
        settings, root_service, real_structure_service, pin_quadratic_service, hasse_service, tritangent_service
    )


def failures(results: list[CheckResult]) -> list[tuple[str, dict]]:
    return [(r.name, r.detail) for r in results if not r.passed]


class TestGroups:
    """Each group passes against live computations."""

    def test_tables(self, verification):
        results = verification.run(["tables"])
        assert failures(results) == []
        names = {r.name for r in results}
        assert "enumeration" in names
        assert "RP2+4T2:line_counts" in names
        assert "RP2+4S2:qhat_vanishes" in names
        assert {r.group for r in results} == {"tables"}

    def test_matching(self, verification):
        results = verification.run(["matching"])
        assert failures(results) == []
        by_name = {r.name: r for r in results}
        assert by_name["E8"].detail["pairs"] == 56
        assert by_name["A1"].detail["pairs"] == 0

    @pytest.mark.slow
    def test_pairs(self, verification):
        results = verification.run(["pairs"])
        assert failures(results) == []
        assert len(results) == 11

    def test_tritangents(self, verification, settings):
        results = verification.run(["tritangents"])
        assert failures(results) == []
        by_name = {r.name: r for r in results}
        assert by_name["parity_equals_resultant_sign"].detail["agree"] == settings.tritangent.random_instances
        assert by_name["table:<4|0>"].detail["computed"] == [120, 64, 56]
        assert "nodal:k=8" in by_name


class TestRun:
    """Tests for group selection."""

    def test_canonical_order(self, verification):
        results = verification.run(["tritangents", "matching"])
        groups = [r.group for r in results]
        assert groups.index("tritangents") > max(i for i, g in enumerate(groups) if g == "matching")

    def test_unknown_group(self, verification):
        with pytest.raises(ValueError, match="unknown check groups"):
            verification.run(["tables", "speed"])

    def test_groups_constant(self):
        assert GROUPS == ("tables", "matching", "pairs", "tritangents")

    def test_failed_check_keeps_detail(self):
        result = VerificationService._check("tables", "demo", False, computed=3, expected=4)
        assert not result.passed
        assert result.detail == {"computed": 3, "expected": 4}

    def test_passed_check(self):
        result = VerificationService._check("tables", "demo", 1)
        assert result.passed is True
        assert result.detail == {}
