"""Minimal HTTP surface for forward and inverse runs."""

import asyncio

from fastapi import FastAPI, HTTPException

from app.data.documents import (
    InverseResultDocument,
    PotentialDocument,
    SpectralDataDocument,
    SpectrumReportDocument,
)
from app.data.models import Rectangle, SolutionContext
from app.engine.inverse import solve_inverse
from app.engine.series import build_vtable
from app.engine.spectral import find_eigenvalues
from app.errors import SpectralError

app = FastAPI(title="wavespec")


def _forward(
    document: PotentialDocument, truncation: int | None, region: str | None, cutoff: int | None
) -> SpectrumReportDocument:
    potential, medium = document.to_domain()
    ctx = SolutionContext(vtable=build_vtable(potential, truncation), medium=medium)
    rect = Rectangle.parse(region) if region else None
    return SpectrumReportDocument.from_report(find_eigenvalues(ctx, rect, cutoff=cutoff))


@app.post("/api/forward")
async def forward(
    document: PotentialDocument,
    truncation: int | None = None,
    region: str | None = None,
    cutoff: int | None = None,
) -> SpectrumReportDocument:
    """
    Spectrum report for a potential/medium document.

    Args:
        document: Potential/medium document
        truncation: Truncation order A
        region: Search rectangle "re0,re1,im0,im1"
        cutoff: Singularities listed per family

    Returns:
        The spectrum report document
    """
    try:
        return await asyncio.to_thread(_forward, document, truncation, region, cutoff)
    except SpectralError as e:
        raise HTTPException(status_code=422, detail=f"{type(e).__name__}: {e}") from e
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e)) from e


def _inverse(document: SpectralDataDocument) -> InverseResultDocument:
    return InverseResultDocument.from_result(solve_inverse(document.to_domain()))


@app.post("/api/inverse")
async def inverse(document: SpectralDataDocument) -> InverseResultDocument:
    """Recovers β and the harmonics from a spectral data document."""
    try:
        return await asyncio.to_thread(_inverse, document)
    except SpectralError as e:
        raise HTTPException(status_code=422, detail=f"{type(e).__name__}: {e}") from e
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e)) from e


@app.get("/health")
async def health():
    """Health check endpoint."""
    return {"status": "healthy"}


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="0.0.0.0", port=8000)
