"""Runs the validation suites over seeded problem instances and renders the pass/fail table."""

import logging
from collections.abc import Callable
from typing import Any

import numpy as np
from pydantic import BaseModel

from app.checks.base_check import BaseCheck, ProblemInstance
from app.checks.registry import default_checks, register_checks
from app.config import settings
from app.data.models import MediumProfile, Potential

logger = logging.getLogger(__name__)

BETA_CHOICES = (0.5, 2.0, 3.0)
MAX_HARMONICS = 4


class ProgressUpdate(BaseModel):
    """Progress note emitted after each suite."""

    phase: str  # "sampling", "checking", "complete"
    message: str
    details: dict[str, Any] | None = None
    complete: bool = False


class SuiteRow(BaseModel):
    name: str
    passed: bool
    detail: str


class ValidationReport(BaseModel):
    seed: int
    truncation: int | None
    instances: int
    rows: list[SuiteRow]

    @property
    def all_passed(self) -> bool:
        return all(row.passed for row in self.rows)

    def render(self) -> str:
        """Fixed-format table; identical inputs give identical text."""
        order = "default" if self.truncation is None else str(self.truncation)
        width = max((len(r.name) for r in self.rows), default=5)
        lines = [
            f"seed={self.seed} truncation={order} instances={self.instances}",
            f"{'suite':<{width}}  status  detail",
            f"{'-' * width}  ------  ------",
        ]
        for row in self.rows:
            status = "PASS" if row.passed else "FAIL"
            lines.append(f"{row.name:<{width}}  {status:<6}  {row.detail}")
        lines.append(f"overall: {'PASS' if self.all_passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _format(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.3e}"
    if isinstance(value, list):
        return "[" + ",".join(_format(v) for v in value) + "]"
    return str(value)


def sample_instances(
    rng: np.random.Generator, count: int, order: int | None = None
) -> list[ProblemInstance]:
    """Random potentials with 1..4 harmonics of modulus ≤ 1 and β from {0.5, 2, 3}."""
    instances = []
    for _ in range(count):
        size = int(rng.integers(1, MAX_HARMONICS + 1))
        radius = rng.uniform(0.0, 1.0, size)
        angle = rng.uniform(0.0, 2 * np.pi, size)
        harmonics = tuple(complex(c) for c in radius * np.exp(1j * angle))
        beta = float(rng.choice(BETA_CHOICES))
        instances.append(
            ProblemInstance(
                potential=Potential(harmonics=harmonics),
                medium=MediumProfile(beta=beta),
                order=order,
            )
        )
    return instances


class ValidationRunner:
    """
    Runs every registered check against a shared instance set.

    Each check draws from its own generator seeded with (seed, position),
    so adding or reordering suites never changes another suite's samples.
    """

    def __init__(
        self,
        seed: int,
        order: int | None = None,
        instances: list[ProblemInstance] | None = None,
        checks: list[BaseCheck] | None = None,
        on_progress: Callable[[ProgressUpdate], None] | None = None,
    ):
        """
        Initialize the validation runner.

        Args:
            seed: Seed for the instance sampler and the per-check generators
            order: Truncation order applied to sampled instances
            instances: Fixed instances to use instead of sampling
            checks: Checks to run, defaults to every registered suite
            on_progress: Optional callback receiving progress updates
        """
        self.seed = seed
        self.order = order
        self.check_map = register_checks(checks or default_checks())
        self.on_progress = on_progress
        if instances is None:
            rng = np.random.default_rng(seed)
            instances = sample_instances(rng, settings.validate_instances, order)
        self.instances = instances

    def emit_progress(self, update: ProgressUpdate) -> None:
        logger.info("[%s] %s", update.phase, update.message)
        if self.on_progress is not None:
            self.on_progress(update)

    def run(self) -> ValidationReport:
        """
        Runs all suites.

        Returns:
            The report with one row per suite
        """
        self.emit_progress(
            ProgressUpdate(
                phase="sampling",
                message=f"Prepared {len(self.instances)} instances",
                details={"seed": self.seed},
            )
        )
        rows = []
        for position, (name, check) in enumerate(self.check_map.items()):
            rng = np.random.default_rng([self.seed, position])
            result = check.run(self.instances, rng)
            detail = ", ".join(f"{k}={_format(v)}" for k, v in (result.data or {}).items())
            if result.metadata:
                extra = ", ".join(f"{k}={_format(v)}" for k, v in result.metadata.items())
                detail = f"{detail}, {extra}" if detail else extra
            if result.error:
                detail = f"{detail}; {result.error}" if detail else result.error
            rows.append(SuiteRow(name=name, passed=result.success, detail=detail))
            self.emit_progress(
                ProgressUpdate(
                    phase="checking",
                    message=f"{name}: {'PASS' if result.success else 'FAIL'}",
                    details={"asserts": check.get_description()},
                )
            )

        report = ValidationReport(
            seed=self.seed, truncation=self.order, instances=len(self.instances), rows=rows
        )
        self.emit_progress(
            ProgressUpdate(phase="complete", message="Validation finished", complete=True)
        )
        return report
