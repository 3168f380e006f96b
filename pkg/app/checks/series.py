"""Checks on the coefficient table itself."""

import numpy as np

from app.checks.base_check import BaseCheck, CheckResult, ProblemInstance
from app.config import settings
from app.data.models import Potential
from app.engine.inverse import relative_table_error
from app.engine.series import build_vtable, reconstruct_vtable, tail_norm

# V_{nα} for q₁ = 1, A = 3, keyed by (n, α)
HAND_TABLE = {
    (1, 1): -1.0,
    (1, 2): 0.5,
    (2, 2): -0.5,
    (1, 3): -1 / 12,
    (2, 3): 1 / 6,
    (3, 3): -1 / 12,
}


class TruncationCheck(BaseCheck):
    def get_name(self) -> str:
        return "truncation"

    def get_description(self) -> str:
        return "Last-column share of the tail norm stays below the warning ratio"

    def execute(self, instances: list[ProblemInstance], rng: np.random.Generator) -> CheckResult:
        ratios = [tail_norm(build_vtable(i.potential, i.order)).ratio for i in instances]
        worst = max(ratios, default=0.0)
        limit = settings.tail_warning_ratio
        ok = worst <= limit
        return CheckResult(
            success=ok,
            data={"worst_ratio": worst},
            error=None if ok else f"tail ratio {worst:.3e} exceeds {limit:.0e}",
        )


class HandTableCheck(BaseCheck):
    def get_name(self) -> str:
        return "hand_table"

    def get_description(self) -> str:
        return "Table for q1 = 1, A = 3 matches the hand-evaluated entries"

    def execute(self, instances: list[ProblemInstance], rng: np.random.Generator) -> CheckResult:
        table = build_vtable(Potential(harmonics=(1,)), 3)
        worst = max(abs(table.get(n, a) - v) for (n, a), v in HAND_TABLE.items())
        ok = worst <= 1e-14
        return CheckResult(
            success=ok, data={"max_error": worst}, error=None if ok else "hand table mismatch"
        )


class TableEquivalenceCheck(BaseCheck):
    def get_name(self) -> str:
        return "table_equivalence"

    def get_description(self) -> str:
        return "Diagonal-only reconstruction reproduces the forward table"

    def execute(self, instances: list[ProblemInstance], rng: np.random.Generator) -> CheckResult:
        worst = 0.0
        for instance in instances:
            forward = build_vtable(instance.potential, instance.order)
            rebuilt = reconstruct_vtable(forward.diagonal())
            worst = max(worst, relative_table_error(rebuilt, forward))
        ok = worst <= 1e-10
        return CheckResult(
            success=ok,
            data={"max_error": worst},
            error=None if ok else f"reconstruction error {worst:.3e}",
        )
