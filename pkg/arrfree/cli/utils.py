import json
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.table import Table

from arrfree.config import get_settings
from arrfree.criteria import CriterionReport
from arrfree.errors import ArrangementError, InvariantViolation
from arrfree.freeness import FreenessCertificate, GeneratorTable
from arrfree.lattice import IntersectionLattice
from arrfree.models import ArrangementFile
from arrfree.verification import CheckResult

INPUT_ERROR = 2
INVARIANT_ERROR = 3


def error_console() -> Console:
    return Console(stderr=True)


def check_and_read_json_file(input_json_file: Path):
    if not input_json_file.exists():
        error_console().print(
            f"[bold red]Error:[/bold red] JSON file '{input_json_file}' does not exist."
        )
        raise typer.Exit(INPUT_ERROR)

    try:
        with open(input_json_file, encoding="utf-8") as fl:
            json_content = json.load(fl)

    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        error_console().print(f"[bold red]Error:[/bold red] Invalid JSON format: {escape(str(e))}")
        raise typer.Exit(INPUT_ERROR)

    return json_content


def read_arrangement_file(arrangement_json: Path) -> ArrangementFile:
    json_content = check_and_read_json_file(arrangement_json)
    try:
        return ArrangementFile.model_validate(json_content)
    except ValidationError as e:
        error_console().print(
            f"[bold red]Error:[/bold red] Invalid arrangement file '{arrangement_json}':"
        )
        for error in e.errors():
            location = ".".join(str(part) for part in error["loc"]) or "document"
            error_console().print(f"  - {location}: {error['msg']}", markup=False)
        raise typer.Exit(INPUT_ERROR)


def set_up_logging_config():
    logging.basicConfig(
        level=get_settings().arrfree_log_level,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True))],
        force=True,
    )


@contextmanager
def exit_on_error() -> Iterator[None]:
    """Map input errors to exit code 2 and internal invariant failures to exit code 3."""
    try:
        yield
    except ArrangementError as e:
        error_console().print(f"[bold red]Error:[/bold red] {escape(str(e))}", highlight=False)
        raise typer.Exit(INPUT_ERROR)
    except InvariantViolation as e:
        error_console().print(
            f"[bold red]Internal invariant violated:[/bold red] {escape(str(e))}", highlight=False
        )
        raise typer.Exit(INVARIANT_ERROR)


def format_indices(indices) -> str:
    return "{" + ", ".join(str(index) for index in indices) + "}"


def print_lattice(lattice: IntersectionLattice):
    table = Table(title="Intersection lattice", header_style="bold magenta")
    table.add_column("flat", justify="right")
    table.add_column("dim", justify="right")
    table.add_column("hyperplanes")
    table.add_column("mu", justify="right")
    for position, (flat, value) in enumerate(zip(lattice.flats, lattice.mobius)):
        table.add_row(str(position), str(flat.dim), format_indices(flat.indices), str(value))
    Console().print(table)


def print_generator_table(table: GeneratorTable):
    rich_table = Table(title="Minimal generators", header_style="bold magenta")
    for column in ("degree", "dim D_d", "dim S_1 D_(d-1)", "new generators"):
        rich_table.add_column(column, justify="right")
    for row in table.rows:
        rich_table.add_row(
            str(row.degree), str(row.dimension), str(row.image_dimension), str(row.new_generators)
        )
    Console().print(rich_table)


def print_certificate(certificate: FreenessCertificate):
    multiarrangement = certificate.multiarrangement
    typer.echo(
        f"D(A, m) with l = {multiarrangement.dim}, n = {len(multiarrangement.arrangement)}, "
        f"|m| = {multiarrangement.total}"
    )
    if certificate.table is not None:
        print_generator_table(certificate.table)

    if certificate.is_free:
        typer.echo(f"FREE with exponents {certificate.exponents}")
        typer.echo(f"Saito constant: {certificate.saito_constant}")
        typer.echo(f"Saito determinant: {certificate.determinant}")
        typer.echo("Basis:")
        for derivation in certificate.basis:
            typer.echo(f"  [{derivation.degree}] {derivation}")
    else:
        typer.echo(f"NONFREE ({certificate.reason.value})")
        for key, value in certificate.witness.items():
            typer.echo(f"  {key}: {value}")
    typer.echo(f"seed: {certificate.seed}")


def print_criterion(report: CriterionReport):
    table = Table(title=f"Criterion {report.criterion}", header_style="bold magenta")
    table.add_column("condition")
    table.add_column("required")
    table.add_column("passed")
    table.add_column("detail")
    for condition in report.conditions:
        table.add_row(
            condition.name,
            "yes" if condition.required else "no",
            "[green]yes[/green]" if condition.passed else "[red]no[/red]",
            escape(condition.detail),
        )
    Console().print(table)
    typer.echo(f"Verdict: {report.verdict}")
    if report.direct_verdict is not None:
        typer.echo(f"Direct freeness verdict: {report.direct_verdict.value}")


def print_check_results(results: list[CheckResult]):
    table = Table(title="Verification", header_style="bold magenta")
    table.add_column("suite")
    table.add_column("check")
    table.add_column("status")
    table.add_column("detail")
    for result in results:
        table.add_row(
            result.suite,
            result.check,
            "[green]pass[/green]" if result.passed else "[bold red]FAIL[/bold red]",
            escape(result.detail),
        )
    Console().print(table)
