from fractions import Fraction
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, StrictInt, model_validator

from arrfree.arrangement import Arrangement, MultiArrangement, build_arrangement
from arrfree.criteria import ConditionReport, CriterionReport
from arrfree.freeness import FreenessCertificate, GeneratorTable, NonFreeReason, saito_matrix
from arrfree.lattice import char_poly
from arrfree.logder import Derivation, graded_piece, is_logarithmic
from arrfree.polyalg import HomogPoly, poly_det


class ArrangementFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: StrictInt = Field(ge=1)
    hyperplanes: list[list[StrictInt]]
    multiplicity: list[StrictInt] | None = None
    labels: list[str] | None = None

    @model_validator(mode="after")
    def check_lengths(self) -> "ArrangementFile":
        for index, vector in enumerate(self.hyperplanes):
            if len(vector) != self.dim:
                raise ValueError(
                    f"hyperplane {index} has {len(vector)} coefficients, expected {self.dim}"
                )
        if self.multiplicity is not None:
            if len(self.multiplicity) != len(self.hyperplanes):
                raise ValueError(
                    f"{len(self.multiplicity)} multiplicities for {len(self.hyperplanes)} hyperplanes"
                )
            if any(value < 0 for value in self.multiplicity):
                raise ValueError("multiplicities must be nonnegative")
        if self.labels is not None and len(self.labels) != len(self.hyperplanes):
            raise ValueError(f"{len(self.labels)} labels for {len(self.hyperplanes)} hyperplanes")
        return self

    def to_arrangement(self) -> Arrangement:
        return build_arrangement(self.dim, self.hyperplanes, self.labels)

    def to_multiarrangement(self) -> MultiArrangement:
        arrangement = self.to_arrangement()
        if self.multiplicity is None:
            return MultiArrangement.simple(arrangement)
        return MultiArrangement(arrangement, tuple(self.multiplicity))

    @classmethod
    def from_arrangement(
        cls, arrangement: Arrangement, multiplicity: tuple[int, ...] | None = None
    ) -> "ArrangementFile":
        return cls(
            dim=arrangement.dim,
            hyperplanes=[list(form.coefficients) for form in arrangement.forms],
            multiplicity=list(multiplicity) if multiplicity is not None else None,
            labels=list(arrangement.labels) if arrangement.labels is not None else None,
        )

    @classmethod
    def from_multiarrangement(cls, multiarrangement: MultiArrangement) -> "ArrangementFile":
        multiplicity = None if multiarrangement.is_simple else multiarrangement.multiplicity
        return cls.from_arrangement(multiarrangement.arrangement, multiplicity)


class TermRecord(BaseModel):
    exponent: list[int]
    coefficient: str  # "p/q"


def poly_to_terms(poly: HomogPoly) -> list[TermRecord]:
    return [
        TermRecord(exponent=list(mono), coefficient=str(poly.terms[mono]))
        for mono in sorted(poly.terms, reverse=True)
    ]


def terms_to_poly(nvars: int, degree: int, terms: list[TermRecord]) -> HomogPoly:
    return HomogPoly(
        nvars, degree, {tuple(term.exponent): Fraction(term.coefficient) for term in terms}
    )


class DerivationRecord(BaseModel):
    degree: int
    coefficients: list[list[TermRecord]]

    @classmethod
    def from_derivation(cls, derivation: Derivation) -> "DerivationRecord":
        return cls(
            degree=derivation.degree,
            coefficients=[poly_to_terms(c) for c in derivation.coefficients],
        )

    def to_derivation(self, nvars: int) -> Derivation:
        return Derivation(
            nvars,
            self.degree,
            tuple(terms_to_poly(nvars, self.degree, terms) for terms in self.coefficients),
        )


class GeneratorRowRecord(BaseModel):
    degree: int
    dimension: int
    image_dimension: int
    new_generators: int


def table_to_records(table: GeneratorTable | None) -> list[GeneratorRowRecord]:
    if table is None:
        return []
    return [
        GeneratorRowRecord(
            degree=row.degree,
            dimension=row.dimension,
            image_dimension=row.image_dimension,
            new_generators=row.new_generators,
        )
        for row in table.rows
    ]


class CertificateRecord(BaseModel):
    arrangement: ArrangementFile
    verdict: Literal["FREE", "NONFREE"]
    reason: Literal["charpoly-nonsplit", "generator-count", "saito-degenerate"] | None = None
    exponents: list[int] = Field(default_factory=list)
    saito_constant: str | None = None
    basis: list[DerivationRecord] = Field(default_factory=list)
    determinant: list[TermRecord] | None = None
    determinant_degree: int | None = None
    charpoly: list[int] | None = None  # ascending coefficients, simple arrangements only
    generator_table: list[GeneratorRowRecord] = Field(default_factory=list)
    witness: dict[str, Any] = Field(default_factory=dict)
    seed: int | None = None

    @classmethod
    def from_certificate(cls, certificate: FreenessCertificate) -> "CertificateRecord":
        multiarrangement = certificate.multiarrangement
        chi = None
        if multiarrangement.is_simple:
            chi = list(char_poly(multiarrangement.arrangement).coefficients)
        determinant = certificate.determinant
        return cls(
            arrangement=ArrangementFile.from_multiarrangement(multiarrangement),
            verdict=certificate.verdict.value,
            reason=certificate.reason.value if certificate.reason else None,
            exponents=list(certificate.exponents),
            saito_constant=(
                str(certificate.saito_constant)
                if certificate.saito_constant is not None
                else None
            ),
            basis=[DerivationRecord.from_derivation(d) for d in certificate.basis],
            determinant=poly_to_terms(determinant) if determinant is not None else None,
            determinant_degree=determinant.degree if determinant is not None else None,
            charpoly=chi,
            generator_table=table_to_records(certificate.table),
            witness=certificate.witness,
            seed=certificate.seed,
        )


def _recheck_free(record: CertificateRecord, multiarrangement: MultiArrangement) -> list[str]:
    nvars = multiarrangement.dim
    failures = []
    basis = [item.to_derivation(nvars) for item in record.basis]
    if len(basis) != nvars:
        return [f"basis has {len(basis)} derivations, expected {nvars}"]
    for index, derivation in enumerate(basis):
        if not is_logarithmic(derivation, multiarrangement):
            failures.append(f"basis element {index} is not in D(A, m)")
    if sorted(d.degree for d in basis) != sorted(record.exponents):
        failures.append("exponents do not match the basis degrees")
    if sum(record.exponents) != multiarrangement.total:
        failures.append(f"exponents sum to {sum(record.exponents)}, expected |m| = {multiarrangement.total}")

    determinant = poly_det(saito_matrix(basis))
    if record.determinant is not None:
        recorded = terms_to_poly(nvars, record.determinant_degree or 0, record.determinant)
        if recorded != determinant:
            failures.append("recorded Saito determinant differs from its re-expansion")
    if record.saito_constant is None:
        failures.append("FREE certificate without a Saito constant")
    else:
        constant = Fraction(record.saito_constant)
        if not constant or determinant != multiarrangement.defining_polynomial().scale(constant):
            failures.append(f"Saito determinant is not {constant} * prod alpha_H^m(H)")
    return failures


def recheck_certificate(record: CertificateRecord) -> list[str]:
    """Re-verify a parsed certificate; an empty list means every check passed."""
    multiarrangement = record.arrangement.to_multiarrangement()
    failures: list[str] = []

    if record.charpoly is not None:
        if not multiarrangement.is_simple:
            failures.append("characteristic polynomial recorded for a multiarrangement")
        elif list(char_poly(multiarrangement.arrangement).coefficients) != record.charpoly:
            failures.append("recorded characteristic polynomial differs from the recomputed one")

    if record.verdict == "FREE":
        return failures + _recheck_free(record, multiarrangement)

    if record.reason == NonFreeReason.CHARPOLY_NONSPLIT.value:
        if char_poly(multiarrangement.arrangement).splits():
            failures.append("characteristic polynomial splits, non-split witness is wrong")
    elif record.reason == NonFreeReason.GENERATOR_COUNT.value:
        count = sum(row.new_generators for row in record.generator_table)
        degree_sum = sum(row.degree * row.new_generators for row in record.generator_table)
        if count == multiarrangement.dim and degree_sum == multiarrangement.total:
            failures.append("generator table matches a free module, count witness is wrong")
        for row in record.generator_table:
            dimension = graded_piece(multiarrangement, row.degree).dimension
            if dimension != row.dimension:
                failures.append(f"dim D_{row.degree} is {dimension}, recorded {row.dimension}")
    elif record.reason == NonFreeReason.SAITO_DEGENERATE.value:
        if "grid" not in record.witness:
            failures.append("degenerate Saito witness without an evaluation grid")
    else:
        failures.append("NONFREE certificate without a reason")
    return failures


class ConditionRecord(BaseModel):
    name: str
    passed: bool
    required: bool
    detail: str
    witness: dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_condition(cls, condition: ConditionReport) -> "ConditionRecord":
        return cls(
            name=condition.name,
            passed=condition.passed,
            required=condition.required,
            detail=condition.detail,
            witness=condition.witness,
        )


class CriterionRecord(BaseModel):
    criterion: str
    verdict: str
    passed: bool
    direct_verdict: str | None = None
    conditions: list[ConditionRecord]
    details: list["CriterionRecord"] = Field(default_factory=list)

    @classmethod
    def from_report(cls, report: CriterionReport) -> "CriterionRecord":
        return cls(
            criterion=report.criterion,
            verdict=report.verdict,
            passed=report.passed,
            direct_verdict=report.direct_verdict.value if report.direct_verdict else None,
            conditions=[ConditionRecord.from_condition(c) for c in report.conditions],
            details=[cls.from_report(detail) for detail in report.details],
        )


CriterionRecord.model_rebuild()


class ZieglerRecord(BaseModel):
    pivot: int
    restriction: ArrangementFile
    groups: list[list[int]]
    certificate: CertificateRecord
    criterion: CriterionRecord | None = None
    hypothesis: str | None = None  # why the restriction theorem does not apply
