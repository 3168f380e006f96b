"""JSON documents and CSV grids exchanged by the CLI and the web surface.

Complex numbers are always written as {"re": ..., "im": ...} pairs.
"""

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator

from app.data.models import (
    C12Sample,
    InverseResult,
    MediumProfile,
    Potential,
    SpectralData,
    SpectrumReport,
    VTable,
)
from app.errors import DocumentError

logger = logging.getLogger(__name__)

GRID_HEADER = "re_lambda,im_lambda,re_c12,im_c12"


class ComplexValue(BaseModel):
    re: float
    im: float = 0.0

    @classmethod
    def of(cls, z: complex) -> "ComplexValue":
        z = complex(z)
        return cls(re=z.real, im=z.imag)

    def value(self) -> complex:
        return complex(self.re, self.im)


class HarmonicEntry(BaseModel):
    n: int = Field(..., ge=1)
    re: float
    im: float = 0.0


def _dense(entries: list[HarmonicEntry], what: str) -> tuple[complex, ...]:
    """Sparse {n, re, im} entries to a dense tuple indexed from n = 1."""
    seen = [e.n for e in entries]
    if len(seen) != len(set(seen)):
        raise ValueError(f"duplicate n in {what}")
    size = max(seen, default=0)
    dense = [0j] * size
    for e in entries:
        dense[e.n - 1] = complex(e.re, e.im)
    return tuple(dense)


def _sparse(values: Any) -> list[HarmonicEntry]:
    return [
        HarmonicEntry(n=k + 1, re=complex(v).real, im=complex(v).imag) for k, v in enumerate(values)
    ]


class PotentialDocument(BaseModel):
    """{"beta": β, "harmonics": [{"n", "re", "im"}, ...]}"""

    beta: float
    harmonics: list[HarmonicEntry] = Field(default_factory=list)

    @field_validator("harmonics")
    @classmethod
    def _unique(cls, value: list[HarmonicEntry]) -> list[HarmonicEntry]:
        _dense(value, "harmonics")
        return value

    def to_domain(self) -> tuple[Potential, MediumProfile]:
        return Potential(harmonics=_dense(self.harmonics, "harmonics")), MediumProfile(
            beta=self.beta
        )


class SampleEntry(BaseModel):
    im_lambda: float
    re: float
    im: float = 0.0


class C12Block(BaseModel):
    asymptote: ComplexValue | None = None
    samples: list[SampleEntry] | None = None


class SpectralDataDocument(BaseModel):
    """{"normalizing_numbers": [{n, re, im}], "c12": {"asymptote": ...} | {"samples": ...}}"""

    normalizing_numbers: list[HarmonicEntry]
    c12: C12Block

    def to_domain(self) -> SpectralData:
        samples = None
        if self.c12.samples is not None:
            samples = [
                C12Sample(im_lambda=s.im_lambda, value=complex(s.re, s.im))
                for s in self.c12.samples
            ]
        return SpectralData(
            normalizing_numbers=_dense(self.normalizing_numbers, "normalizing_numbers"),
            c12_samples=samples,
            c12_asymptote=self.c12.asymptote.value() if self.c12.asymptote else None,
        )


class InverseResultDocument(PotentialDocument):
    diagnostics: dict[str, float] = Field(default_factory=dict)

    @classmethod
    def from_result(cls, result: InverseResult) -> "InverseResultDocument":
        return cls(
            beta=result.beta,
            harmonics=_sparse(result.potential.harmonics),
            diagnostics=dict(sorted(result.diagnostics.items())),
        )


class EigenvalueEntry(BaseModel):
    re: float
    im: float
    energy: ComplexValue = Field(..., description="Operator eigenvalue λ²")
    c12_abs: float
    sector: str
    multiplicity: int
    simple: bool


class SingularityEntry(BaseModel):
    value: float
    family: str
    n: int


class RegionEntry(BaseModel):
    re_min: float
    re_max: float
    im_min: float
    im_max: float


class SpectrumReportDocument(BaseModel):
    eigenvalues: list[EigenvalueEntry]
    singularities: list[SingularityEntry]
    region: RegionEntry
    A: int
    tail_norm: float
    tail_ratio: float
    winding: int
    cells: int

    @classmethod
    def from_report(cls, report: SpectrumReport) -> "SpectrumReportDocument":
        return cls(
            eigenvalues=[
                EigenvalueEntry(
                    re=e.value.real,
                    im=e.value.imag,
                    energy=ComplexValue.of(e.energy),
                    c12_abs=e.c12_abs,
                    sector=e.sector,
                    multiplicity=e.multiplicity,
                    simple=e.simple,
                )
                for e in report.eigenvalues
            ],
            singularities=[SingularityEntry(**s.model_dump()) for s in report.singularities],
            region=RegionEntry(**report.search_region.model_dump()),
            A=report.truncation,
            tail_norm=report.tail_norm,
            tail_ratio=report.tail_ratio,
            winding=report.total_winding,
            cells=len(report.counts),
        )


class VTableEntry(BaseModel):
    n: int
    alpha: int
    re: float
    im: float


class VTableDocument(BaseModel):
    A: int
    entries: list[VTableEntry]

    @classmethod
    def from_table(cls, table: VTable) -> "VTableDocument":
        rows, cols = np.triu_indices(table.A)
        return cls(
            A=table.A,
            entries=[
                VTableEntry(
                    n=int(r) + 1,
                    alpha=int(c) + 1,
                    re=float(table.entries[r, c].real),
                    im=float(table.entries[r, c].imag),
                )
                for r, c in zip(rows, cols)
            ],
        )


def load_document(path: str | Path, model: type[BaseModel]) -> BaseModel:
    """
    Reads and validates a JSON document.

    Args:
        path: File to read
        model: Document model to validate against

    Returns:
        The validated document

    Raises:
        DocumentError: If the file is unreadable, not JSON, or fails validation
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        logger.error("Cannot read %s: %s", path, e)
        raise DocumentError(f"cannot read {path}: {e}") from e
    try:
        return model.model_validate(json.loads(text))
    except json.JSONDecodeError as e:
        logger.error("Failed to parse JSON in %s: %s", path, e)
        raise DocumentError(f"malformed JSON in {path}: {e}") from e
    except ValidationError as e:
        logger.error("Invalid %s in %s: %s", model.__name__, path, e)
        raise DocumentError(f"invalid {model.__name__} in {path}: {e}") from e


def dump_document(document: BaseModel) -> str:
    """Deterministic JSON text of a document."""
    return json.dumps(document.model_dump(mode="json"), indent=2) + "\n"


def write_document(path: str | Path, document: BaseModel) -> None:
    Path(path).write_text(dump_document(document), encoding="utf-8")


def write_grid(path: str | Path, rows: np.ndarray) -> None:
    """Writes a C₁₂ grid as CSV with the re_lambda, im_lambda, re_c12, im_c12 columns."""
    np.savetxt(path, rows, delimiter=",", header=GRID_HEADER, comments="", fmt="%.17g")


class ResolventDocument(BaseModel):
    x: float
    t: float
    lam: ComplexValue
    sector: str
    value: ComplexValue
