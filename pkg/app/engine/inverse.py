"""Recovery of β and the potential from spectral data, and the round-trip harness."""

import logging

import numpy as np
from scipy.optimize import least_squares

from app.config import settings
from app.data.models import (
    C12Sample,
    InverseResult,
    MediumProfile,
    Potential,
    RoundTripReport,
    SolutionContext,
    SpectralData,
    VTable,
)
from app.engine.series import build_vtable, q_from_vtable, reconstruct_vtable, tail_norm
from app.engine.spectral import c12_from_table, c12_values
from app.errors import NonPositiveBeta, NonRealAsymptote, SpectralError
from app.utils.numerics import linear_fit, polynomial_limit

logger = logging.getLogger(__name__)

Q_TOLERANCE = 1e-8
BETA_TOLERANCE = 1e-6
VTABLE_TOLERANCE = 1e-10


def extrapolate_c12(samples: list[C12Sample]) -> tuple[complex, dict[str, float]]:
    """
    Limit of C₁₂(it) as t → ∞ from the last three samples.

    The limit is the constant of the quadratic in 1/t through the three
    points. The residual of the plain c∞ + c₁/t fit is kept as a diagnostic.
    """
    tail = samples[-3:]
    steps = [1.0 / s.im_lambda for s in tail]
    values = [s.value for s in tail]
    limit = polynomial_limit(steps, values)
    linear_limit, _, residual = linear_fit(steps, values)
    return limit, {
        "extrapolation_residual": residual,
        "extrapolation_spread": abs(limit - linear_limit),
    }


def estimate_asymptote(data: SpectralData) -> tuple[complex, dict[str, float]]:
    """C₁₂ limit along the imaginary axis plus the tolerance its imaginary part is held to."""
    if data.c12_asymptote is not None:
        return complex(data.c12_asymptote), {"imag_tolerance": 1e-8}
    limit, diagnostics = extrapolate_c12(data.c12_samples)
    diagnostics["imag_tolerance"] = max(1e-6, 10.0 * diagnostics["extrapolation_spread"])
    return limit, diagnostics


def recover_beta(data: SpectralData) -> float:
    """
    β = -2·Re(lim C₁₂) - 1.

    Raises:
        NonRealAsymptote: If the limit has a non-negligible imaginary part
        NonPositiveBeta: If the result is not positive
    """
    beta, _ = _recover_beta(data)
    return beta


def _recover_beta(data: SpectralData) -> tuple[float, dict[str, float]]:
    limit, diagnostics = estimate_asymptote(data)
    if abs(limit.imag) >= diagnostics["imag_tolerance"]:
        raise NonRealAsymptote(
            f"C12 limit {limit} has imaginary part {limit.imag:.3e} "
            f"(tolerance {diagnostics['imag_tolerance']:.1e})"
        )
    beta = -2.0 * limit.real - 1.0
    if beta <= 0:
        raise NonPositiveBeta(f"recovered beta = {beta:.6g} from C12 limit {limit.real:.6g}")
    diagnostics["c12_limit_re"] = limit.real
    diagnostics["c12_limit_im"] = limit.imag
    return beta, diagnostics


def refine_beta(table: VTable, samples: list[C12Sample], beta0: float) -> float:
    """
    Least-squares β matching the model C₁₂(β; it) of the given table to the samples.

    Args:
        table: Table reconstructed from the normalizing numbers
        samples: C₁₂ samples on the imaginary axis
        beta0: Starting value, usually the extrapolated β

    Returns:
        The refined β
    """
    lams = 1j * np.array([s.im_lambda for s in samples])
    target = np.array([s.value for s in samples], dtype=complex)

    def residuals(params: np.ndarray) -> np.ndarray:
        model, _ = c12_from_table(table, float(params[0]), lams)
        diff = model - target
        return np.concatenate([diff.real, diff.imag])

    fit = least_squares(
        residuals, x0=[beta0], bounds=([1e-12], [np.inf]), xtol=1e-14, ftol=1e-14, gtol=1e-14
    )
    if not fit.success:
        logger.warning("Beta refinement stopped early: %s", fit.message)
    return float(fit.x[0])


def solve_inverse(data: SpectralData) -> InverseResult:
    """
    Reconstructs (β, q) from spectral data.

    Rebuilds the V-table from the normalizing numbers, reads the harmonics
    off its column sums and takes β from the C₁₂ limit.
    """
    vtable = reconstruct_vtable(data.normalizing_numbers)
    potential = q_from_vtable(vtable)
    beta, diagnostics = _recover_beta(data)

    if data.c12_samples is not None and settings.refine_beta:
        refined = refine_beta(vtable, data.c12_samples, beta)
        diagnostics["beta_extrapolated"] = beta
        diagnostics["beta_refinement_shift"] = abs(refined - beta)
        beta = refined

    if abs(beta - 1) < settings.beta_near_one:
        logger.warning("Recovered beta = %.9f is indistinguishable from 1", beta)

    diagnostics["tail_norm"] = tail_norm(vtable).total
    diagnostics.pop("imag_tolerance", None)
    logger.info("Recovered beta %.9f and %d harmonics", beta, potential.N)
    return InverseResult(beta=beta, potential=potential, vtable=vtable, diagnostics=diagnostics)


def forward_spectral_data(
    potential: Potential,
    medium: MediumProfile,
    order: int | None = None,
    heights: list[float] | None = None,
) -> SpectralData:
    """Spectral data of (q, β): the V-table diagonal plus C₁₂ on the imaginary axis."""
    vtable = build_vtable(potential, order)
    ctx = SolutionContext(vtable=vtable, medium=medium)
    heights = heights or settings.asymptote_heights
    values, _ = c12_values(ctx, 1j * np.asarray(heights, dtype=float))
    return SpectralData(
        normalizing_numbers=tuple(complex(v) for v in vtable.diagonal()),
        c12_samples=[C12Sample(im_lambda=t, value=complex(v)) for t, v in zip(heights, values)],
    )


def relative_table_error(candidate: VTable, reference: VTable) -> float:
    """Max entrywise difference relative to the largest reference entry."""
    scale = float(np.max(np.abs(reference.entries)))
    diff = float(np.max(np.abs(candidate.entries - reference.entries)))
    return diff / scale if scale > 0 else diff


def round_trip(
    potential: Potential, medium: MediumProfile, order: int | None = None
) -> RoundTripReport:
    """
    Runs the forward map and the inverse procedure and compares the results.

    Failures are folded into the report instead of raised.
    """
    try:
        vtable = build_vtable(potential, order)
        data = forward_spectral_data(potential, medium, vtable.A)
        result = solve_inverse(data)
    except (SpectralError, ValueError) as e:
        logger.error("Round trip failed: %s", e)
        return RoundTripReport(error=f"{type(e).__name__}: {e}")

    reference = potential.padded(vtable.A)
    recovered = result.potential.padded(vtable.A)
    q_scale = max(1.0, float(np.max(np.abs(reference))))
    q_error = float(np.max(np.abs(recovered - reference))) / q_scale
    beta_error = abs(result.beta - medium.beta)
    vtable_error = relative_table_error(result.vtable, vtable)
    return RoundTripReport(
        q_error=q_error,
        beta_error=beta_error,
        vtable_error=vtable_error,
        recovered_beta=result.beta,
        passed=(
            q_error <= Q_TOLERANCE
            and beta_error <= BETA_TOLERANCE
            and vtable_error <= VTABLE_TOLERANCE
        ),
    )
