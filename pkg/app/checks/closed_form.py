"""Series values against the ₀F₁ closed form for a single harmonic."""

import mpmath
import numpy as np

from app.checks.base_check import BaseCheck, CheckResult, ProblemInstance
from app.data.models import MediumProfile, Potential, SolutionContext
from app.engine.series import build_vtable
from app.engine.solutions import eval_f1
from app.engine.spectral import c12

CASES = (
    (0.8 + 0.3j, 0.4 + 0.7j, 2.0),
    (1.5j, -0.9 + 0.4j, 0.5),
    (2.0, 1.3 + 0.2j, 3.0),
)
ORDER = 40


def closed_form_f1(strength: complex, lam: complex, x: float = 0.0) -> tuple[complex, complex]:
    """
    f₁⁺(x, λ) = e^{iλx}·₀F₁(; 1+2λ; -c e^{ix}) and its x-derivative for q = c·e^{ix}.
    """
    b = 1 + 2 * lam
    z = -strength * np.exp(1j * x)
    phase = np.exp(1j * lam * x)
    value = complex(mpmath.hyp0f1(b, z))
    shifted = complex(mpmath.hyp0f1(b + 1, z))
    return phase * value, phase * (1j * lam * value + 1j * z * shifted / b)


def closed_form_c12(strength: complex, lam: complex, beta: float) -> complex:
    u, up = closed_form_f1(strength, lam)
    v, vp = closed_form_f1(strength, -beta * lam)
    return (u * vp - up * v) / (2j * lam)


class ClosedFormCheck(BaseCheck):
    def get_name(self) -> str:
        return "closed_form"

    def get_description(self) -> str:
        return "Single-harmonic series values match the 0F1 closed form"

    def execute(self, instances: list[ProblemInstance], rng: np.random.Generator) -> CheckResult:
        worst = 0.0
        for strength, lam, beta in CASES:
            ctx = SolutionContext(
                vtable=build_vtable(Potential(harmonics=(strength,)), ORDER),
                medium=MediumProfile(beta=beta),
            )
            for x in (0.0, 1.3):
                exact, exact_d = closed_form_f1(strength, lam, x)
                series, series_d = eval_f1(ctx, x, lam), eval_f1(ctx, x, lam, "+", 1)
                worst = max(
                    worst,
                    abs(series - exact) / abs(exact),
                    abs(series_d - exact_d) / abs(exact_d),
                )
            exact_c12 = closed_form_c12(strength, lam, beta)
            worst = max(worst, abs(c12(ctx, lam) - exact_c12) / abs(exact_c12))
        ok = worst <= 1e-10
        return CheckResult(
            success=ok,
            data={"max_relative_error": worst},
            error=None if ok else f"closed-form mismatch {worst:.3e}",
        )
