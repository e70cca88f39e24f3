from pathlib import Path

import pytest
import typer

from arrfree.cli.utils import (
    INPUT_ERROR,
    INVARIANT_ERROR,
    check_and_read_json_file,
    exit_on_error,
    format_indices,
    read_arrangement_file,
)
from arrfree.errors import ArrangementError, HypothesisError, InvariantViolation

from ..mock_arrangements import write_arrangement  # type: ignore # noqa: F401 # pylint: disable=unused-import


def test_check_and_read_json_file(write_arrangement):
    path = write_arrangement({"dim": 1, "hyperplanes": [[1]]})
    assert check_and_read_json_file(path) == {"dim": 1, "hyperplanes": [[1]]}


def test_check_and_read_missing_json_file(tmp_path: Path):
    with pytest.raises(typer.Exit) as exit_info:
        check_and_read_json_file(tmp_path / "missing.json")
    assert exit_info.value.exit_code == INPUT_ERROR


def test_check_and_read_invalid_json_file(write_arrangement):
    with pytest.raises(typer.Exit) as exit_info:
        check_and_read_json_file(write_arrangement("[1, 2"))
    assert exit_info.value.exit_code == INPUT_ERROR


def test_read_arrangement_file(write_arrangement):
    path = write_arrangement({"dim": 2, "hyperplanes": [[1, 0], [1, 1]], "labels": ["a", "b"]})
    document = read_arrangement_file(path)
    assert document.labels == ["a", "b"]
    assert len(document.to_arrangement()) == 2


def test_read_arrangement_file_reports_every_error(write_arrangement, capsys: pytest.CaptureFixture):
    path = write_arrangement({"dim": "two", "hyperplanes": [[1, 0]], "colour": "red"})
    with pytest.raises(typer.Exit) as exit_info:
        read_arrangement_file(path)
    assert exit_info.value.exit_code == INPUT_ERROR
    captured = capsys.readouterr()
    assert "- dim:" in captured.err
    assert "- colour:" in captured.err


@pytest.mark.parametrize(
    "error, code",
    [
        (ArrangementError("bad input"), INPUT_ERROR),
        (HypothesisError("not free"), INPUT_ERROR),
        (InvariantViolation("rank mismatch"), INVARIANT_ERROR),
    ],
)
def test_exit_on_error(error: Exception, code: int):
    with pytest.raises(typer.Exit) as exit_info:
        with exit_on_error():
            raise error
    assert exit_info.value.exit_code == code


def test_exit_on_error_lets_other_errors_through():
    with pytest.raises(KeyError):
        with exit_on_error():
            raise KeyError("unexpected")


def test_format_indices():
    assert format_indices((0, 2, 5)) == "{0, 2, 5}"
    assert format_indices(()) == "{}"
