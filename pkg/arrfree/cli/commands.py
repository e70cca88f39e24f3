import logging
from pathlib import Path
from typing import Optional

import typer
from typing_extensions import Annotated

from arrfree.arrangement import ziegler_restriction
from arrfree.cli.utils import (
    INPUT_ERROR,
    INVARIANT_ERROR,
    error_console,
    exit_on_error,
    format_indices,
    print_certificate,
    print_check_results,
    print_criterion,
    print_lattice,
    read_arrangement_file,
    set_up_logging_config,
)
from arrfree.config import get_settings
from arrfree.criteria import yoshinaga_any, yoshinaga_check, ziegler_check
from arrfree.errors import HypothesisError
from arrfree.families import FAMILIES, generate_family
from arrfree.freeness import freeness
from arrfree.lattice import char_poly, intersection_lattice
from arrfree.models import (
    ArrangementFile,
    CertificateRecord,
    CriterionRecord,
    ZieglerRecord,
)
from arrfree.verification import SUITE_NAMES, run_suites

logger = logging.getLogger(__name__)

cli = typer.Typer(
    no_args_is_help=True,
    add_completion=False,
    short_help="Invariants and freeness certificates of central hyperplane arrangements.",
    context_settings={"help_option_names": ["-h", "--help"]},
)

ArrangementArgument = Annotated[
    Path,
    typer.Argument(help="Path to the arrangement JSON file.", dir_okay=False),
]
JsonOption = Annotated[
    bool, typer.Option("--json", help="Emit the machine-readable record on stdout.")
]
JobsOption = Annotated[
    Optional[int],
    typer.Option(envvar="ARRFREE_JOBS", min=1, help="Worker processes for independent checks."),
]


@cli.command(no_args_is_help=True)
def lattice(arrangement_json: ArrangementArgument):
    """Print the flats of the intersection lattice with their Moebius values."""
    set_up_logging_config()
    arrangement_file = read_arrangement_file(arrangement_json)
    with exit_on_error():
        arrangement = arrangement_file.to_arrangement()
        print_lattice(intersection_lattice(arrangement))


@cli.command(no_args_is_help=True)
def charpoly(arrangement_json: ArrangementArgument):
    """Print the characteristic polynomial and its factorization over Z."""
    set_up_logging_config()
    arrangement_file = read_arrangement_file(arrangement_json)
    with exit_on_error():
        chi = char_poly(arrangement_file.to_arrangement())
        typer.echo(f"chi(A, t) = {chi}")
        typer.echo(f"factorization: {chi.factorization_str()}")
        roots = chi.integer_roots()
        typer.echo(f"integer roots: {', '.join(str(root) for root in roots) or 'none'}")
        typer.echo(f"splits over Z>=0: {'yes' if chi.splits() else 'no (non-split)'}")


@cli.command(no_args_is_help=True)
def free(
    arrangement_json: ArrangementArgument,
    dmax: Annotated[
        Optional[int],
        typer.Option(min=0, help="Degree horizon of the generator table (default |m|)."),
    ] = None,
    seed: Annotated[
        Optional[int], typer.Option(help="Seed of the Saito recombination stream.")
    ] = None,
    json_output: JsonOption = False,
):
    """Decide freeness of D(A, m) and print the certificate."""
    set_up_logging_config()
    arrangement_file = read_arrangement_file(arrangement_json)
    with exit_on_error():
        certificate = freeness(arrangement_file.to_multiarrangement(), dmax, seed=seed)
        if json_output:
            typer.echo(CertificateRecord.from_certificate(certificate).model_dump_json(indent=2))
        else:
            print_certificate(certificate)


@cli.command(no_args_is_help=True)
def ziegler(
    arrangement_json: ArrangementArgument,
    pivot: Annotated[int, typer.Option(help="Index of the restriction hyperplane.")] = 0,
    json_output: JsonOption = False,
):
    """Restrict to a hyperplane with the natural multiplicity and compare exponents."""
    set_up_logging_config()
    arrangement_file = read_arrangement_file(arrangement_json)
    with exit_on_error():
        arrangement = arrangement_file.to_arrangement()
        restriction = ziegler_restriction(arrangement, pivot)
        certificate = freeness(restriction.multiarrangement)

        report = None
        hypothesis = None
        try:
            report = ziegler_check(arrangement, pivot)
        except HypothesisError as e:
            hypothesis = str(e)
            logger.warning(f"Restriction theorem does not apply: {hypothesis}")

        if json_output:
            record = ZieglerRecord(
                pivot=pivot,
                restriction=ArrangementFile.from_multiarrangement(restriction.multiarrangement),
                groups=[list(group) for group in restriction.groups],
                certificate=CertificateRecord.from_certificate(certificate),
                criterion=CriterionRecord.from_report(report) if report else None,
                hypothesis=hypothesis,
            )
            typer.echo(record.model_dump_json(indent=2))
            return

        restricted = restriction.multiarrangement
        typer.echo(
            f"Restriction to H{pivot}: {len(restricted.arrangement)} hyperplane(s) "
            f"in dimension {restricted.dim}"
        )
        for form, multiplicity, group in zip(
            restricted.arrangement.forms, restricted.multiplicity, restriction.groups
        ):
            typer.echo(f"  {form}  multiplicity {multiplicity}  from {format_indices(group)}")
        print_certificate(certificate)
        if report is not None:
            print_criterion(report)
        else:
            typer.echo(f"Exponent comparison skipped: {hypothesis}")


@cli.command(no_args_is_help=True)
def yoshinaga(
    arrangement_json: ArrangementArgument,
    pivot: Annotated[
        Optional[int], typer.Option(help="Check a single restriction hyperplane.")
    ] = None,
    any_pivot: Annotated[
        bool, typer.Option("--any", help="Check every pivot, FREE if one passes.")
    ] = False,
    jobs: JobsOption = None,
    json_output: JsonOption = False,
):
    """Decide freeness through the hyperplane-section criterion (dimension >= 4)."""
    set_up_logging_config()
    if pivot is not None and any_pivot:
        error_console().print("[bold red]Error:[/bold red] --pivot and --any are exclusive.")
        raise typer.Exit(INPUT_ERROR)

    arrangement_file = read_arrangement_file(arrangement_json)
    with exit_on_error():
        arrangement = arrangement_file.to_arrangement()
        if pivot is None:
            report = yoshinaga_any(arrangement, jobs=jobs)
        else:
            report = yoshinaga_check(arrangement, pivot)

        if json_output:
            typer.echo(CriterionRecord.from_report(report).model_dump_json(indent=2))
            return
        for detail in report.details:
            print_criterion(detail)
        print_criterion(report)


@cli.command(no_args_is_help=True)
def gen(
    family: Annotated[str, typer.Argument(help=f"Family name: {', '.join(FAMILIES)}.")],
    params: Annotated[
        list[int], typer.Argument(help="Family parameters: l for boolean/braid, l n otherwise.")
    ],
    seed: Annotated[
        Optional[int], typer.Option(help="Seed of the coefficient stream (generic, random).")
    ] = None,
    out: Annotated[
        Optional[Path], typer.Option(help="Write the arrangement file here instead of stdout.")
    ] = None,
):
    """Generate an arrangement file of a named family."""
    set_up_logging_config()
    with exit_on_error():
        arrangement = generate_family(family, params, seed)
    document = ArrangementFile.from_arrangement(arrangement).model_dump_json(
        indent=2, exclude_none=True
    )
    if out is None:
        typer.echo(document)
    else:
        out.write_text(document + "\n", encoding="utf-8")
        logger.info(f"Arrangement written to {out}")


@cli.command()
def verify(
    suite: Annotated[
        list[str],
        typer.Option(
            "--suite",
            "-s",
            help=f"Suite to run, repeatable: {', '.join(SUITE_NAMES)} or all.",
        ),
    ] = ["all"],
    jobs: JobsOption = None,
):
    """Run the built-in verification suites; exit 3 on any failure."""
    set_up_logging_config()
    jobs = get_settings().arrfree_jobs if jobs is None else jobs
    with exit_on_error():
        results = run_suites(suite, jobs=jobs)
    print_check_results(results)
    failed = [result for result in results if not result.passed]
    if failed:
        error_console().print(f"[bold red]{len(failed)} check(s) failed.[/bold red]")
        raise typer.Exit(INVARIANT_ERROR)
    typer.echo(f"All {len(results)} checks passed.")


if __name__ == "__main__":
    cli()
