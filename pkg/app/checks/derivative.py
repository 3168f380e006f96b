import logging

import numpy as np

from app.checks.base_check import BaseCheck, CheckResult, ProblemInstance, reference_instance
from app.config import settings
from app.data.models import MediumProfile, Potential, Rectangle, SolutionContext
from app.engine.series import build_vtable
from app.engine.spectral import c12_derivative_check, c12_derivative_identity, find_eigenvalues

logger = logging.getLogger(__name__)

# single-harmonic strengths tried in order until C12 has a zero in the box
HARMONIC_SWEEP = (2j, 4j, 4 * np.exp(0.25j * np.pi), 9 * np.exp(0.5j), 16j)
SWEEP_BETA = 2.0
SWEEP_ORDER = 32
SEARCH_BOX = Rectangle(re_min=-4, re_max=4, im_min=settings.root_strip, im_max=4)
IDENTITY_POINTS = (0.7 + 0.9j, -1.2 + 0.5j, 2.1 + 1.3j)
TOLERANCE = 1e-4


def sweep_for_eigenvalue() -> tuple[SolutionContext, complex, complex] | None:
    """
    First (context, zero, strength) along the harmonic sweep, or None.

    The zero returned is the one with the largest imaginary part.

    None means C₁₂ winds zero times around the box for every strength. A
    search that fails on a box with zeros in it raises.
    """
    medium = MediumProfile(beta=SWEEP_BETA)
    for strength in HARMONIC_SWEEP:
        strength = complex(strength)
        ctx = SolutionContext(
            vtable=build_vtable(Potential(harmonics=(strength,)), SWEEP_ORDER), medium=medium
        )
        report = find_eigenvalues(ctx, SEARCH_BOX)
        zeros = [e.value for e in report.eigenvalues if e.sector == "S0" and e.simple]
        if zeros:
            return ctx, max(zeros, key=lambda z: z.imag), strength
        if report.total_winding:
            logger.warning(
                "q1=%s winds %d times without a simple zero", strength, report.total_winding
            )
    return None


class DerivativeIdentityCheck(BaseCheck):
    def get_name(self) -> str:
        return "derivative_identity"

    def get_description(self) -> str:
        return "dC12/dλ at an eigenvalue equals i∫ρ f1+ f2+ dx"

    def execute(self, instances: list[ProblemInstance], rng: np.random.Generator) -> CheckResult:
        found = sweep_for_eigenvalue()
        if found is not None:
            ctx, zero, strength = found
            check = c12_derivative_check(ctx, zero)
            ok = (
                check.relative_error <= TOLERANCE
                and abs(check.rhs) > 1e-8
                and check.quadrature_error <= TOLERANCE * abs(check.rhs)
            )
            return CheckResult(
                success=ok,
                data={
                    "relative_error": check.relative_error,
                    "endpoint_decay": check.endpoint_decay,
                    "quadrature_error": check.quadrature_error,
                },
                error=None if ok else f"identity gap {check.relative_error:.3e}",
                metadata={
                    "mode": "eigenvalue",
                    "zero": f"{zero.real:.10f}{zero.imag:+.10f}j",
                    "strength": f"{strength.real:.6f}{strength.imag:+.6f}j",
                },
            )

        # C12 has no zero in the box for any strength: finite-interval identity instead
        ctx = reference_instance().context()
        errors = [c12_derivative_identity(ctx, lam).relative_error for lam in IDENTITY_POINTS]
        worst = max(errors)
        ok = worst <= TOLERANCE
        return CheckResult(
            success=ok,
            data={"relative_error": worst},
            error=None if ok else f"identity gap {worst:.3e}",
            metadata={"mode": "identity", "points": len(IDENTITY_POINTS)},
        )
