"""Checks on the fundamental solutions."""

import numpy as np

from app.checks.base_check import BaseCheck, CheckResult, ProblemInstance
from app.data.models import Potential, SolutionContext
from app.engine.solutions import eval_f1, eval_f2, eval_fn, wronskian
from app.utils.numerics import second_derivative

FD_STEP = 1e-3
POINTS_PER_INSTANCE = 20


def sample_lambdas(rng: np.random.Generator, count: int) -> np.ndarray:
    """Spectral parameters in the upper half plane, clear of the real-axis poles."""
    return rng.uniform(-1.5, 1.5, count) + 1j * rng.uniform(0.3, 1.5, count)


def ode_residuals(
    ctx: SolutionContext, potential: Potential, family: str, x: np.ndarray, lam: complex
) -> tuple[np.ndarray, np.ndarray, float]:
    """
    Central-difference residual of -f″ + q f - λ²ρ f on the solution's own half-line.

    Returns:
        (|residual|, |f|, local ρ)
    """
    if family == "f1":
        evaluate, rho = eval_f1, 1.0
    else:
        evaluate, rho = eval_f2, ctx.medium.beta**2
    value = evaluate(ctx, x, lam)
    d2 = second_derivative(lambda s: evaluate(ctx, s, lam), x, FD_STEP)
    residual = -d2 + potential.evaluate(x) * value - lam**2 * rho * value
    return np.abs(residual), np.abs(value), rho


class OdeResidualCheck(BaseCheck):
    def get_name(self) -> str:
        return "ode_residual"

    def get_description(self) -> str:
        return "f1+ on x >= 0 and f2+ on x < 0 solve the equation to finite-difference accuracy"

    def execute(self, instances: list[ProblemInstance], rng: np.random.Generator) -> CheckResult:
        worst = 0.0
        for instance in instances:
            ctx = instance.context()
            lams = sample_lambdas(rng, POINTS_PER_INSTANCE)
            xs = rng.uniform(FD_STEP, 3.0, POINTS_PER_INSTANCE)
            for family, sign in (("f1", 1.0), ("f2", -1.0)):
                for lam, x in zip(lams, xs):
                    residual, size, rho = ode_residuals(
                        ctx, instance.potential, family, np.array([sign * x]), lam
                    )
                    bound = 1e-5 * (1 + abs(lam) ** 2 * rho) * max(float(size[0]), 1e-300)
                    worst = max(worst, float(residual[0]) / bound)
        ok = worst <= 1.0
        return CheckResult(
            success=ok,
            data={"worst_ratio_to_bound": worst},
            error=None if ok else f"ODE residual {worst:.2f}x over the bound",
        )


class WronskianCheck(BaseCheck):
    def get_name(self) -> str:
        return "wronskian_constancy"

    def get_description(self) -> str:
        return "W[f1+, f1-] and W[f2+, f2-] are x-independent with magnitudes |2λ| and |2λβ|"

    def execute(self, instances: list[ProblemInstance], rng: np.random.Generator) -> CheckResult:
        drift = 0.0
        magnitude_gap = 0.0
        xs = np.linspace(0.0, 3.0, 13)
        for instance in instances:
            ctx = instance.context()
            beta = ctx.medium.beta
            lam = complex(sample_lambdas(rng, 1)[0])
            for family, evaluate, points in (("f1", eval_f1, xs), ("f2", eval_f2, -xs)):
                w = wronskian(
                    evaluate(ctx, points, lam, "+"),
                    evaluate(ctx, points, lam, "+", 1),
                    evaluate(ctx, points, lam, "-"),
                    evaluate(ctx, points, lam, "-", 1),
                )
                drift = max(drift, float(np.max(np.abs(w - w[0])) / abs(w[0])))

                big = 50j
                w_big = wronskian(
                    evaluate(ctx, 0.0, big, "+"),
                    evaluate(ctx, 0.0, big, "+", 1),
                    evaluate(ctx, 0.0, big, "-"),
                    evaluate(ctx, 0.0, big, "-", 1),
                )
                scale = 2 * abs(big) * (1.0 if family == "f1" else beta)
                magnitude_gap = max(magnitude_gap, abs(abs(w_big) / scale - 1))
        ok = drift <= 1e-10 and magnitude_gap <= 0.05
        return CheckResult(
            success=ok,
            data={"max_drift": drift, "magnitude_gap": magnitude_gap},
            error=None if ok else "Wronskian drifts along x or has the wrong magnitude",
        )


class ProportionalityCheck(BaseCheck):
    def get_name(self) -> str:
        return "proportionality"

    def get_description(self) -> str:
        return "Renormalized f_n equals V_nn f1+(x, n/2) on [0, 3]"

    def execute(self, instances: list[ProblemInstance], rng: np.random.Generator) -> CheckResult:
        worst = 0.0
        xs = np.linspace(0.0, 3.0, 7)
        for instance in instances:
            ctx = instance.context()
            for n in range(1, min(ctx.vtable.A // 2, 10) + 1):
                lhs = eval_fn(ctx, n, xs, "+")
                rhs = ctx.vtable.get(n, n) * eval_f1(ctx, xs, n / 2, "+")
                scale = max(float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))))
                if scale > 0:
                    worst = max(worst, float(np.max(np.abs(lhs - rhs))) / scale)
        ok = worst <= 1e-9
        return CheckResult(
            success=ok,
            data={"max_relative_gap": worst},
            error=None if ok else f"proportionality gap {worst:.3e}",
        )
