"""Command-line front end: forward, inverse, roundtrip, resolvent and validate."""

import argparse
import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, Field, model_validator

from app.checks.base_check import ProblemInstance
from app.config import settings
from app.data.documents import (
    ComplexValue,
    InverseResultDocument,
    PotentialDocument,
    ResolventDocument,
    SpectralDataDocument,
    SpectrumReportDocument,
    VTableDocument,
    dump_document,
    load_document,
    write_document,
    write_grid,
)
from app.data.models import Rectangle, ResolventQuery, SolutionContext
from app.engine.inverse import solve_inverse
from app.engine.series import build_vtable
from app.engine.spectral import c12_grid, find_eigenvalues, resolvent_kernel
from app.errors import SpectralError
from app.validation_runner import ValidationRunner

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_SUITE_FAILED = 1
EXIT_PARSE = 2
EXIT_NUMERICAL = 3

Command = Literal["forward", "inverse", "roundtrip", "resolvent", "validate"]
COMMAND_NAMES = ("forward", "inverse", "roundtrip", "resolvent", "validate")


class CommandFailure(Exception):
    def __init__(self, status: int, message: str):
        self.status = status
        super().__init__(message)


class GridSpec(BaseModel):
    region: Rectangle
    nx: int = Field(..., ge=2)
    ny: int = Field(..., ge=2)

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parses 're0,re1,im0,im1,nx,ny'."""
        parts = text.split(",")
        if len(parts) != 6:
            raise ValueError(f"expected re0,re1,im0,im1,nx,ny, got {text!r}")
        return cls(
            region=Rectangle.parse(",".join(parts[:4])), nx=int(parts[4]), ny=int(parts[5])
        )


class RunConfig(BaseModel):
    command: Command
    input_path: Path | None = None
    output_path: Path | None = None
    truncation: int | None = Field(default=None, ge=1)
    cutoff: int | None = Field(default=None, ge=1)
    region: Rectangle | None = None
    grid: GridSpec | None = None
    grid_output: Path | None = None
    dump_vtable: Path | None = None
    seed: int = 0
    x: float | None = None
    t: float | None = None
    lam: complex | None = None

    @model_validator(mode="after")
    def _check_inputs(self) -> "RunConfig":
        if self.command != "validate" and self.input_path is None:
            raise ValueError(f"{self.command} requires --input")
        if self.command == "resolvent" and None in (self.x, self.t, self.lam):
            raise ValueError("resolvent requires --x, --t and --lambda")
        return self


def parse_complex(text: str) -> complex:
    """Parses 're,im'."""
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"expected re,im, got {text!r}")
    return complex(parts[0], parts[1])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavespec", description="Forward and inverse spectral engine"
    )
    parser.add_argument("command", choices=COMMAND_NAMES)
    parser.add_argument("--input", dest="input_path")
    parser.add_argument("--output", dest="output_path")
    parser.add_argument("--truncation", type=int, help="Truncation order A")
    parser.add_argument("--cutoff", type=int, help="Singularities listed per family")
    parser.add_argument("--region", help="Search rectangle re0,re1,im0,im1")
    parser.add_argument("--grid", help="C12 grid re0,re1,im0,im1,nx,ny")
    parser.add_argument("--grid-output", help="CSV path for --grid")
    parser.add_argument("--dump-vtable", help="Side file for the V-table")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--x", type=float)
    parser.add_argument("--t", type=float)
    parser.add_argument("--lambda", dest="lam", help="Spectral parameter re,im")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log progress at INFO level")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        input_path=args.input_path,
        output_path=args.output_path,
        truncation=args.truncation,
        cutoff=args.cutoff,
        region=Rectangle.parse(args.region) if args.region else None,
        grid=GridSpec.parse(args.grid) if args.grid else None,
        grid_output=args.grid_output,
        dump_vtable=args.dump_vtable,
        seed=args.seed,
        x=args.x,
        t=args.t,
        lam=parse_complex(args.lam) if args.lam else None,
    )


def _load(path: Path, model: type[BaseModel]) -> Any:
    try:
        return load_document(path, model)
    except ValueError as e:
        raise CommandFailure(EXIT_PARSE, str(e)) from e


def _to_domain(document: Any) -> Any:
    try:
        return document.to_domain()
    except ValueError as e:
        raise CommandFailure(EXIT_PARSE, f"invalid input: {e}") from e


def _numerical(operation: str, func: Callable[..., Any], *args: Any, **kwargs: Any) -> Any:
    try:
        return func(*args, **kwargs)
    except SpectralError as e:
        raise CommandFailure(EXIT_NUMERICAL, f"{operation} failed: {type(e).__name__}: {e}") from e
    except ValueError as e:
        raise CommandFailure(EXIT_PARSE, f"{operation} rejected its input: {e}") from e


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output_path is None:
        sys.stdout.write(text)
    else:
        cfg.output_path.write_text(text, encoding="utf-8")


def cmd_forward(cfg: RunConfig) -> int:
    potential, medium = _to_domain(_load(cfg.input_path, PotentialDocument))
    vtable = build_vtable(potential, cfg.truncation)
    ctx = SolutionContext(vtable=vtable, medium=medium)
    report = _numerical("find_eigenvalues", find_eigenvalues, ctx, cfg.region, cutoff=cfg.cutoff)

    _emit(cfg, dump_document(SpectrumReportDocument.from_report(report)))
    if cfg.dump_vtable is not None:
        write_document(cfg.dump_vtable, VTableDocument.from_table(vtable))
    if cfg.grid is not None:
        rows = _numerical("c12_grid", c12_grid, ctx, cfg.grid.region, cfg.grid.nx, cfg.grid.ny)
        target = cfg.grid_output or (
            cfg.output_path.with_suffix(".csv") if cfg.output_path else Path("c12_grid.csv")
        )
        write_grid(target, rows)
    return EXIT_OK


def cmd_inverse(cfg: RunConfig) -> int:
    data = _to_domain(_load(cfg.input_path, SpectralDataDocument))
    result = _numerical("solve_inverse", solve_inverse, data)
    _emit(cfg, dump_document(InverseResultDocument.from_result(result)))
    return EXIT_OK


def cmd_resolvent(cfg: RunConfig) -> int:
    potential, medium = _to_domain(_load(cfg.input_path, PotentialDocument))
    try:
        query = ResolventQuery.at(cfg.x, cfg.t, cfg.lam)
    except ValueError as e:
        raise CommandFailure(EXIT_PARSE, f"invalid query: {e}") from e
    ctx = SolutionContext(vtable=build_vtable(potential, cfg.truncation), medium=medium)
    value = _numerical("resolvent_kernel", resolvent_kernel, ctx, query)
    document = ResolventDocument(
        x=query.x,
        t=query.t,
        lam=ComplexValue.of(query.lam),
        sector=query.sector,
        value=ComplexValue.of(value),
    )
    _emit(cfg, dump_document(document))
    return EXIT_OK


def cmd_roundtrip(cfg: RunConfig) -> int:
    potential, medium = _to_domain(_load(cfg.input_path, PotentialDocument))
    instance = ProblemInstance(potential=potential, medium=medium, order=cfg.truncation)
    runner = ValidationRunner(cfg.seed, cfg.truncation, instances=[instance])
    report = runner.run()
    _emit(cfg, report.render())
    return EXIT_OK if report.all_passed else EXIT_SUITE_FAILED


def cmd_validate(cfg: RunConfig) -> int:
    report = ValidationRunner(cfg.seed, cfg.truncation).run()
    _emit(cfg, report.render())
    return EXIT_OK if report.all_passed else EXIT_SUITE_FAILED


COMMANDS: dict[str, Callable[[RunConfig], int]] = {
    "forward": cmd_forward,
    "inverse": cmd_inverse,
    "roundtrip": cmd_roundtrip,
    "resolvent": cmd_resolvent,
    "validate": cmd_validate,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else settings.log_level,
        format="%(asctime)s - %(levelname)s - %(message)s",
    )
    try:
        cfg = config_from_args(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE

    try:
        return COMMANDS[cfg.command](cfg)
    except CommandFailure as e:
        print(f"error: {e}", file=sys.stderr)
        return e.status


if __name__ == "__main__":
    sys.exit(main())
