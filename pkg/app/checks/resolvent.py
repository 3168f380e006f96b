"""Checks on the resolvent kernel and its behaviour at n/2."""

import numpy as np

from app.checks.base_check import BaseCheck, CheckResult, ProblemInstance, reference_instance
from app.engine.spectral import apply_resolvent, residue_at_singularity
from app.utils.numerics import second_derivative

TEST_LAMBDA = 0.7 + 0.6j
CHECK_POINTS = np.array([-0.6, -0.25, 0.3, 0.65])
FD_STEP = 1e-3


def bump(t: float) -> float:
    """Smooth source supported on [-1, 1]."""
    return float(np.exp(-1.0 / (1.0 - t * t))) if abs(t) < 1 else 0.0


def resolvent_residual(instance: ProblemInstance, lam: complex = TEST_LAMBDA) -> float:
    """Max |-y″ + q y - λ²ρ y - ρ f| at the check points for y = ∫Rρf."""
    ctx = instance.context()

    def solution(x: np.ndarray) -> np.ndarray:
        return apply_resolvent(ctx, lam, bump, (-1.0, 1.0), x)

    y = solution(CHECK_POINTS)
    d2 = second_derivative(solution, CHECK_POINTS, FD_STEP)
    rho = ctx.medium.rho(CHECK_POINTS)
    source = np.array([bump(x) for x in CHECK_POINTS])
    residual = -d2 + instance.potential.evaluate(CHECK_POINTS) * y - lam**2 * rho * y - rho * source
    return float(np.max(np.abs(residual)))


class ResolventIdentityCheck(BaseCheck):
    def get_name(self) -> str:
        return "resolvent_identity"

    def get_description(self) -> str:
        return "y = ∫Rρf solves -y″ + qy - λ²ρy = ρf at interior points"

    def execute(self, instances: list[ProblemInstance], rng: np.random.Generator) -> CheckResult:
        cases = [reference_instance()] + instances[:1]
        worst = max(resolvent_residual(case) for case in cases)
        ok = worst <= 1e-4
        return CheckResult(
            success=ok,
            data={"max_residual": worst},
            error=None if ok else f"resolvent residual {worst:.3e}",
        )


class ResidueCheck(BaseCheck):
    def get_name(self) -> str:
        return "residue"

    def get_description(self) -> str:
        return "(n - 2λ)R11 vanishes at λ = n/2; the product formula is reported alongside"

    def execute(self, instances: list[ProblemInstance], rng: np.random.Generator) -> CheckResult:
        ctx = reference_instance().context()
        estimate = residue_at_singularity(ctx, 1, 0.0, 0.0)
        limit, formula = abs(estimate.limit_est), abs(estimate.formula)
        ok = limit <= 1e-3 * max(1.0, formula)
        return CheckResult(
            success=ok,
            data={
                "limit_abs": limit,
                "formula_abs": formula,
                "relative_gap": abs(estimate.limit_est - estimate.formula) / formula,
            },
            error=None if ok else f"(n - 2λ)R11 tends to {limit:.3e}, not 0",
        )
