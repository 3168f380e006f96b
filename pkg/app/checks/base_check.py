import logging
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.data.models import MediumProfile, Potential, SolutionContext
from app.engine.series import build_vtable

logger = logging.getLogger(__name__)


class CheckResult(BaseModel):
    """Result from a validation check."""

    success: bool = Field(..., description="Whether every assertion of the check held")
    data: Any = Field(None, description="Measured quantities")
    error: str | None = Field(None, description="Error message if the check failed or crashed")
    metadata: dict[str, Any] = Field(
        default_factory=dict, description="Additional metadata about the run"
    )


class ProblemInstance(BaseModel):
    """One (q, β, A) triple a check runs against."""

    model_config = ConfigDict(frozen=True)

    potential: Potential
    medium: MediumProfile
    order: int | None = None

    def context(self) -> SolutionContext:
        return SolutionContext(vtable=build_vtable(self.potential, self.order), medium=self.medium)


class BaseCheck:
    """Base class for all validation checks"""

    def get_name(self) -> str:
        """Returns the suite name shown in the report"""
        raise NotImplementedError

    def get_description(self) -> str:
        """Returns what the check asserts"""
        raise NotImplementedError

    def execute(self, instances: list[ProblemInstance], rng: np.random.Generator) -> CheckResult:
        """Runs the check over the instances"""
        raise NotImplementedError

    def run(self, instances: list[ProblemInstance], rng: np.random.Generator) -> CheckResult:
        """Runs execute, folding any exception into a failed result"""
        try:
            return self.execute(instances, rng)
        except Exception as e:
            logger.error("Check %s crashed: %s", self.get_name(), e)
            return CheckResult(
                success=False,
                error=f"{type(e).__name__}: {e}",
                metadata={"exception_type": type(e).__name__},
            )


def reference_instance() -> ProblemInstance:
    """q = e^{ix}, β = 2."""
    return ProblemInstance(potential=Potential(harmonics=(1,)), medium=MediumProfile(beta=2))
