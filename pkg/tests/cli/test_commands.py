import json
from itertools import combinations
from pathlib import Path
from unittest.mock import patch

import pytest
from typer.testing import CliRunner

from arrfree.arrangement import Arrangement
from arrfree.cli.commands import cli
from arrfree.errors import InvariantViolation
from arrfree.families import generate_family
from arrfree.models import ArrangementFile
from arrfree.polyalg import RatMatrix, rank
from arrfree.verification import CheckResult

from ..mock_arrangements import (  # type: ignore # noqa: F401 # pylint: disable=unused-import
    boolean3_fixture,
    boolean4_fixture,
    braid3_fixture,
    generic34_fixture,
    parse_json_output,
    write_arrangement,
)

runner = CliRunner()


@pytest.fixture
def arrangement_file(write_arrangement):
    """Write an Arrangement to disk in the input file format."""

    def _write(arrangement: Arrangement, multiplicity=None) -> Path:
        document = ArrangementFile.from_arrangement(arrangement, multiplicity)
        return write_arrangement(json.loads(document.model_dump_json(exclude_none=True)))

    return _write


def test_lattice(arrangement_file, braid3: Arrangement):
    result = runner.invoke(cli, ["lattice", str(arrangement_file(braid3))])
    assert result.exit_code == 0
    assert "Intersection lattice" in result.output


def test_charpoly(arrangement_file, braid3: Arrangement):
    result = runner.invoke(cli, ["charpoly", str(arrangement_file(braid3))])
    assert result.exit_code == 0
    assert "chi(A, t) = t^3 - 3t^2 + 2t" in result.output
    assert "factorization: t(t-1)(t-2)" in result.output
    assert "integer roots: 0, 1, 2" in result.output
    assert "splits over Z>=0: yes" in result.output


def test_free_json(arrangement_file, braid3: Arrangement):
    result = runner.invoke(cli, ["free", str(arrangement_file(braid3)), "--json"])
    assert result.exit_code == 0
    record = parse_json_output(result.output)
    assert record["verdict"] == "FREE"
    assert record["exponents"] == [0, 1, 2]
    assert len(record["basis"]) == 3


def test_free_human_readable(arrangement_file, boolean3: Arrangement):
    result = runner.invoke(cli, ["free", str(arrangement_file(boolean3, (2, 1, 1)))])
    assert result.exit_code == 0
    assert "FREE with exponents (1, 1, 2)" in result.output
    assert "Minimal generators" in result.output


def test_non_free_verdict_exits_normally(arrangement_file, generic34: Arrangement):
    result = runner.invoke(cli, ["free", str(arrangement_file(generic34))])
    assert result.exit_code == 0
    assert "NONFREE (charpoly-nonsplit)" in result.output


def test_free_with_short_horizon(arrangement_file, boolean3: Arrangement):
    result = runner.invoke(
        cli, ["free", str(arrangement_file(boolean3, (2, 1, 1))), "--dmax", "0", "--json"]
    )
    assert result.exit_code == 0
    record = parse_json_output(result.output)
    assert record["reason"] == "generator-count"
    assert record["witness"]["horizon_complete"] is False


def test_missing_file(tmp_path: Path):
    result = runner.invoke(cli, ["free", str(tmp_path / "absent.json")])
    assert result.exit_code == 2
    assert "Error" in result.output


def test_malformed_json(write_arrangement):
    result = runner.invoke(cli, ["charpoly", str(write_arrangement("{not json"))])
    assert result.exit_code == 2
    assert "Invalid JSON format" in result.output


def test_schema_violation(write_arrangement):
    path = write_arrangement({"dim": 2, "hyperplanes": [[1, 0, 0]]})
    result = runner.invoke(cli, ["lattice", str(path)])
    assert result.exit_code == 2
    assert "Invalid arrangement file" in result.output


def test_proportional_hyperplanes(write_arrangement):
    path = write_arrangement({"dim": 2, "hyperplanes": [[1, 1], [2, 2]]})
    result = runner.invoke(cli, ["free", str(path)])
    assert result.exit_code == 2
    assert "proportional" in result.output


def test_invariant_violation_exit_code(arrangement_file, boolean3: Arrangement):
    with patch("arrfree.cli.commands.freeness", side_effect=InvariantViolation("broken rank")):
        result = runner.invoke(cli, ["free", str(arrangement_file(boolean3))])
    assert result.exit_code == 3
    assert "broken rank" in result.output


def test_ziegler_json(arrangement_file, braid3: Arrangement):
    result = runner.invoke(cli, ["ziegler", str(arrangement_file(braid3)), "--pivot", "0", "--json"])
    assert result.exit_code == 0
    record = parse_json_output(result.output)
    assert record["groups"] == [[1, 2]]
    assert record["restriction"]["multiplicity"] == [2]
    assert record["certificate"]["exponents"] == [0, 2]
    assert record["criterion"]["passed"] is True
    assert record["hypothesis"] is None


def test_ziegler_without_hypothesis(arrangement_file, generic34: Arrangement):
    result = runner.invoke(cli, ["ziegler", str(arrangement_file(generic34))])
    assert result.exit_code == 0
    assert "Exponent comparison skipped" in result.output


def test_ziegler_bad_pivot(arrangement_file, braid3: Arrangement):
    result = runner.invoke(cli, ["ziegler", str(arrangement_file(braid3)), "--pivot", "3"])
    assert result.exit_code == 2


def test_yoshinaga_dimension_gate(arrangement_file, boolean3: Arrangement):
    result = runner.invoke(cli, ["yoshinaga", str(arrangement_file(boolean3))])
    assert result.exit_code == 2
    assert "dimension >= 4" in result.output


def test_yoshinaga_exclusive_options(arrangement_file, boolean4: Arrangement):
    result = runner.invoke(
        cli, ["yoshinaga", str(arrangement_file(boolean4)), "--pivot", "0", "--any"]
    )
    assert result.exit_code == 2


def test_yoshinaga_single_pivot(arrangement_file, boolean4: Arrangement):
    result = runner.invoke(
        cli, ["yoshinaga", str(arrangement_file(boolean4)), "--pivot", "0", "--json"]
    )
    assert result.exit_code == 0
    record = parse_json_output(result.output)
    assert record["verdict"] == "FREE"
    assert record["criterion"] == "yoshinaga(pivot=0)"


def test_yoshinaga_any(arrangement_file, boolean4: Arrangement):
    result = runner.invoke(cli, ["yoshinaga", str(arrangement_file(boolean4)), "--json"])
    assert result.exit_code == 0
    record = parse_json_output(result.output)
    assert record["passed"] is True
    assert len(record["details"]) == 4


def test_gen_to_stdout():
    result = runner.invoke(cli, ["gen", "boolean", "3"])
    assert result.exit_code == 0
    document = parse_json_output(result.output)
    assert document["hyperplanes"] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert "multiplicity" not in document


def test_gen_to_file(tmp_path: Path):
    out = tmp_path / "generic.json"
    result = runner.invoke(cli, ["gen", "generic", "3", "4", "--seed", "0", "--out", str(out)])
    assert result.exit_code == 0
    document = ArrangementFile.model_validate_json(out.read_text())
    assert document.to_arrangement() == generate_family("generic", [3, 4], seed=0)


def test_gen_generic_is_in_general_position():
    result = runner.invoke(cli, ["gen", "generic", "4", "5", "--seed", "7"])
    assert result.exit_code == 0
    document = parse_json_output(result.output)
    assert len(document["hyperplanes"]) == 5
    for rows in combinations(document["hyperplanes"], 4):
        assert rank(RatMatrix.from_rows(rows)) == 4


def test_gen_unknown_family():
    result = runner.invoke(cli, ["gen", "simplicial", "3"])
    assert result.exit_code == 2
    assert "Unknown family" in result.output


def test_verify_suite():
    result = runner.invoke(cli, ["verify", "--suite", "charpoly"])
    assert result.exit_code == 0
    assert "All 16 checks passed." in result.output


def test_verify_unknown_suite():
    result = runner.invoke(cli, ["verify", "--suite", "nope"])
    assert result.exit_code == 2


def test_verify_failure_exit_code():
    failing = [CheckResult("charpoly", "braid3", False, "mismatch")]
    with patch("arrfree.cli.commands.run_suites", return_value=failing):
        result = runner.invoke(cli, ["verify"])
    assert result.exit_code == 3
    assert "1 check(s) failed." in result.output
