"""
End-to-end tests for the delpezzo-lines command line.
"""

import json

import pytest
import yaml

from services.cli.main import (
    EXIT_CHECK_FAILED,
    EXIT_OK,
    EXIT_USAGE,
    Commands,
    json_requested,
    main,
    render,
    run,
)
from services.cli.verification import VerificationService
from services.real_structures.catalog import CATALOG_VERSION
from shared.models import CheckResult, ReportStatus

pytestmark = pytest.mark.e2e


class TestCatalogAndLines:
    """Tests for the catalog and lines commands."""

    def test_catalog(self, settings):
        code, report = run(["catalog"], settings)
        assert code == EXIT_OK
        assert report.status == ReportStatus.PASS
        assert report.version == CATALOG_VERSION
        classes = report.payload["classes"]
        assert len(classes) == 11
        by_label = {c["class"]: c for c in classes}
        assert by_label["RP2+4T2"]["dual_eigen_type"] == "0"
        assert by_label["RP2+4S2"]["euler_characteristic"] == 9

    def test_lines(self, settings):
        code, report = run(["lines", "--class", "RP2+Klein"], settings)
        assert code == EXIT_OK
        payload = report.payload
        assert payload["class"] == "RP2+Klein"
        assert payload["eigen_type"] == "D4"
        assert (payload["real_lines"], payload["hyperbolic"], payload["elliptic"]) == (24, 16, 8)
        assert payload["signed_sum"] == 8
        assert payload["counts_agree"] is True
        assert len(payload["special_basis"]) == 4

    def test_json_after_subcommand(self, settings):
        code, report = run(["lines", "--class", "RP2", "--json"], settings)
        assert code == EXIT_OK
        assert report.payload["real_lines"] == 8

    def test_unknown_class(self, settings):
        code, report = run(["lines", "--class", "RP2+5T2"], settings)
        assert code == EXIT_USAGE
        assert report.status == ReportStatus.FAIL
        assert report.payload["error"]["type"] == "UnknownClassError"
        assert "RP2+5T2" in report.payload["error"]["message"]


class TestHasse:
    """Tests for the hasse command."""

    def test_e8(self, settings):
        code, report = run(["hasse", "--type", "E8"], settings)
        assert code == EXIT_OK
        assert report.payload["nodes"] == 120
        assert report.payload["pairs"] == 56
        assert "matching" not in report.payload

    def test_emit(self, settings):
        code, report = run(["hasse", "--type", "D4", "--emit-matching", "--emit-poset"], settings)
        assert code == EXIT_OK
        assert len(report.payload["matching"]) == 4
        assert len(report.payload["cover_edges"]) == report.payload["covers"]

    def test_unsupported_type(self, settings):
        code, report = run(["hasse", "--type", "A2"], settings)
        assert code == EXIT_USAGE
        assert report.command == "usage"


class TestTritangentCommands:
    """Tests for tritangent, sextic, nodal and table commands."""

    def test_classify(self, settings):
        code, report = run(
            ["tritangent", "classify", "--p2", "1,0,1", "--p4", "1,0,2,0,1", "--p6", "0,0,1,-2,1,0,0"],
            settings,
        )
        assert code == EXIT_OK
        assert report.command == "tritangent classify"
        assert report.payload["side"] == "plus"
        assert report.payload["species"] == "hyperbolic"

    def test_classify_negative_leading_coefficient(self, settings):
        code, report = run(
            ["tritangent", "classify", "--p2", "1,0,1", "--p4=-1,0,3,0,4", "--p6", "0,0,1,-2,1,0,0"],
            settings,
        )
        assert code == EXIT_OK
        assert report.payload["species"] == "elliptic"
        assert report.payload["positive_real_tangencies"] == 2

    def test_classify_not_tritangent(self, settings):
        code, report = run(
            ["tritangent", "classify", "--p2", "1,0,1", "--p4", "1,0,2,0,1", "--p6", "1,0,0,0,0,0,1"],
            settings,
        )
        assert code == EXIT_USAGE
        assert report.payload["error"]["type"] == "NotTritangentError"

    def test_gram(self, settings):
        code, report = run(["tritangent", "gram", "--p4", "1,0,2,0,1", "--q3", "0,-1,0,1"], settings)
        assert code == EXIT_OK
        assert report.payload["determinant"] == "64/1"
        assert report.payload["signs_agree"] is True

    def test_gram_shear(self, settings):
        code, report = run(["tritangent", "gram", "--p4", "1,0,2,0,1", "--q3", "1,0,-1,0"], settings)
        assert code == EXIT_USAGE
        assert report.payload["error"]["type"] == "InfiniteRootError"

        code, report = run(
            ["tritangent", "gram", "--p4", "1,0,2,0,1", "--q3", "1,0,-1,0", "--shear"], settings
        )
        assert code == EXIT_OK
        assert report.payload["shear"] == 2

    def test_sextic_symmetric(self, settings):
        code, report = run(
            ["sextic", "symmetric", "--coeffs", "006=2,204=2,402=4,600=-2,060=6"], settings
        )
        assert code == EXIT_OK
        assert report.payload["p2"] == ["1/1", "0/1", "0/1"]
        assert report.payload["p6"][0] == "-1/1"

    def test_nodal(self, settings):
        code, report = run(["nodal", "--k", "3"], settings)
        assert code == EXIT_OK
        assert report.payload == {
            "k": 3,
            "signed_line_count": 10,
            "signed_tritangent_count": 5,
            "signed_cubic_conic_count": 1,
        }

    def test_nodal_out_of_range(self, settings):
        code, report = run(["nodal", "--k", "9"], settings)
        assert code == EXIT_USAGE
        assert report.command == "usage"
        assert "--k" in report.payload["error"]["message"]

    @pytest.mark.parametrize(
        "arrangement,expected", [("<4|0>", (120, 64, 56)), ("<1|1>", (24, 16, 8)), ("<|||>", (24, 16, 8))]
    )
    def test_table(self, settings, arrangement, expected):
        code, report = run(["table", "--arrangement", arrangement], settings)
        assert code == EXIT_OK
        payload = report.payload
        assert (payload["total"], payload["hyperbolic"], payload["elliptic"]) == expected

    def test_unknown_arrangement(self, settings):
        code, report = run(["table", "--arrangement", "<5|0>"], settings)
        assert code == EXIT_USAGE
        assert report.payload["error"]["type"] == "UnknownArrangementError"


class TestVerify:
    """Tests for the verify command."""

    def test_matching_group(self, settings):
        code, report = run(["verify", "--matching"], settings)
        assert code == EXIT_OK
        assert report.payload["groups"] == ["matching"]
        assert report.payload["failed"] == []
        assert report.payload["passed"] == report.payload["total"]

    def test_failed_check_exit_code(self, settings, mocker):
        mocker.patch.object(
            VerificationService,
            "run",
            return_value=[
                CheckResult(group="tables", name="demo", passed=False, detail={"computed": 1}),
                CheckResult(group="tables", name="other", passed=True),
            ],
        )
        code, report = run(["verify", "--tables"], settings)
        assert code == EXIT_CHECK_FAILED
        assert report.status == ReportStatus.FAIL
        assert report.payload["failed"] == ["demo"]
        assert report.payload["passed"] == 1

    def test_all_is_default(self, settings, mocker):
        spy = mocker.patch.object(VerificationService, "run", return_value=[])
        run(["verify"], settings)
        spy.assert_called_once_with(["tables", "matching", "pairs", "tritangents"])


class TestRendering:
    """Tests for report rendering and the console entry point."""

    def test_yaml(self, settings):
        _, report = run(["nodal", "--k", "1"], settings)
        text = render(report, as_json=False)
        assert text.startswith("command: nodal")
        assert yaml.safe_load(text) == report.model_dump(mode="json")

    def test_json(self, settings):
        _, report = run(["nodal", "--k", "1"], settings)
        data = json.loads(render(report, as_json=True))
        assert data["status"] == "pass"
        assert data["payload"]["signed_line_count"] == 14

    def test_main_json(self, capsys):
        assert main(["--json", "table", "--arrangement", "<0|0>"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["command"] == "table"
        assert data["payload"]["hyperbolic"] == 8

    def test_main_usage_goes_to_stderr(self, capsys):
        assert main(["lines"]) == EXIT_USAGE
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "usage" in captured.err

    def test_main_help(self, capsys):
        assert main(["--help"]) == EXIT_OK
        assert "delpezzo-lines" in capsys.readouterr().out

    def test_main_json_after_subcommand(self, capsys):
        assert main(["lines", "--class", "RP2", "--json"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["command"] == "lines"
        assert data["payload"]["hyperbolic"] == 8

    @pytest.mark.parametrize(
        "argv,expected",
        [
            (["--json", "nodal", "--k", "1"], True),
            (["nodal", "--k", "1", "--json"], True),
            (["tritangent", "gram", "--p4", "1,0,2,0,1", "--q3", "0,-1,0,1", "--json"], True),
            (["nodal", "--k", "1"], False),
            (["lines", "--json"], True),
        ],
    )
    def test_json_requested(self, argv, expected):
        assert json_requested(argv) is expected


class TestCommands:
    """Tests for the command handler table."""

    @pytest.mark.parametrize(
        "name",
        [
            "catalog",
            "lines",
            "verify",
            "hasse",
            "tritangent_classify",
            "tritangent_gram",
            "sextic_symmetric",
            "nodal",
            "table",
        ],
    )
    def test_handlers_are_methods(self, settings, name):
        assert callable(getattr(Commands(settings), name))
