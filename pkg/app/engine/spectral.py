"""Scattering coefficients, eigenvalues, singularities and resolvent kernels.

C₁₂(λ) = W[f₁⁺, f₂⁺](0)/(2iλ) with W[f, g] = f·g′ - f′·g. Its zeros in the
upper half plane are the eigenvalues of the sector S₀; the zeros in S₁ are
their negatives.
"""

import logging
from collections.abc import Callable
from typing import Any

import numpy as np
from scipy import integrate

from app.config import settings
from app.data.models import (
    CellCount,
    DerivativeCheck,
    Eigenvalue,
    MediumProfile,
    Rectangle,
    ResidueEstimate,
    ResolventQuery,
    ScatteringCoeffs,
    Singularity,
    SolutionContext,
    SpectrumReport,
    VTable,
)
from app.engine.series import q_from_vtable, tail_norm
from app.engine.solutions import (
    boundary_values,
    eval_f1,
    extend_solution,
    lambda_derivative,
    wronskian,
)
from app.errors import ContourThroughZero, DegenerateBasis, NearPole, NonConvergence, PoleAtLambda
from app.utils.contour import winding_number
from app.utils.numerics import central_derivative, richardson_extrapolate

logger = logging.getLogger(__name__)

SPLIT_FRACTIONS = (0.5, 0.5137, 0.4789)


# ========== Scattering coefficients ==========


def _interface_values(ctx: SolutionContext, lam: complex) -> dict[str, complex]:
    """Values and x-derivatives of f₁^±, f₂^± at x = 0."""
    beta = ctx.medium.beta
    out = {}
    for name, mu in (("u", lam), ("um", -lam), ("v", -beta * lam), ("vm", beta * lam)):
        bv = boundary_values(ctx.vtable, mu)
        out[name] = complex(bv["value"])
        out[name + "p"] = complex(bv["derivative"])
    return out


def scattering_coeffs(ctx: SolutionContext, lam: complex) -> ScatteringCoeffs:
    """
    Interface coefficients at λ.

    Raises:
        DegenerateBasis: When |λ| is below the configured floor
        PoleAtLambda: When λ hits a series pole
    """
    lam = complex(lam)
    if abs(lam) < settings.lambda_floor:
        raise DegenerateBasis(f"|lambda| = {abs(lam):.3e} is too small")
    beta = ctx.medium.beta
    s = _interface_values(ctx, lam)
    u, up, um, ump = s["u"], s["up"], s["um"], s["ump"]
    v, vp, vm, vmp = s["v"], s["vp"], s["vm"], s["vmp"]

    w_right = wronskian(u, up, um, ump)
    w_left = wronskian(v, vp, vm, vmp)
    if w_right == 0 or w_left == 0:
        raise DegenerateBasis(f"basis solutions are dependent at lambda={lam}")

    c12 = wronskian(u, up, v, vp) / (2j * lam)
    c11 = wronskian(v, vp, um, ump) / (2j * lam)
    return ScatteringCoeffs(
        lam=lam,
        c11=c11,
        c12=c12,
        c21=-c12 / beta,
        c22=wronskian(vm, vmp, u, up) / (-2j * lam * beta),
        combo_a=wronskian(v, vp, um, ump) / w_right,
        combo_b=wronskian(u, up, v, vp) / w_right,
        left_a=wronskian(u, up, vm, vmp) / w_left,
        left_b=wronskian(v, vp, u, up) / w_left,
        right_wronskian=w_right,
        left_wronskian=w_left,
    )


def c12_values(ctx: SolutionContext, lams: Any) -> tuple[np.ndarray, np.ndarray]:
    """
    C₁₂ and its exact λ-derivative on an array of λ.

    Returns:
        (C₁₂(λ), dC₁₂/dλ) with the shape of lams
    """
    return c12_from_table(ctx.vtable, ctx.medium.beta, lams)


def c12_from_table(table: VTable, beta: float, lams: Any) -> tuple[np.ndarray, np.ndarray]:
    """c12_values for a bare table and jump parameter, with no medium validation."""
    lams = np.asarray(lams, dtype=complex)
    u = boundary_values(table, lams)
    v = boundary_values(table, -beta * lams)
    w = u["value"] * v["derivative"] - u["derivative"] * v["value"]
    dw = (
        u["d_value"] * v["derivative"]
        - beta * u["value"] * v["d_derivative"]
        - u["d_derivative"] * v["value"]
        + beta * u["derivative"] * v["d_value"]
    )
    return w / (2j * lams), dw / (2j * lams) - w / (2j * lams**2)


def c12(ctx: SolutionContext, lam: complex) -> complex:
    return complex(c12_values(ctx, np.asarray(lam))[0])


def c12_grid(ctx: SolutionContext, rect: Rectangle, nx: int, ny: int) -> np.ndarray:
    """C₁₂ on an nx × ny grid; rows are (re_lambda, im_lambda, re_c12, im_c12)."""
    if nx < 2 or ny < 2:
        raise ValueError("grid steps must be at least 2")
    re, im = np.meshgrid(
        np.linspace(rect.re_min, rect.re_max, nx),
        np.linspace(rect.im_min, rect.im_max, ny),
        indexing="xy",
    )
    lams = (re + 1j * im).ravel()
    values, _ = c12_values(ctx, lams)
    return np.column_stack([lams.real, lams.imag, values.real, values.imag])


# ========== Eigenvalue search ==========


def default_region(ctx: SolutionContext) -> Rectangle:
    """|Re λ| ≤ (A + 2)/2 and ε₀ ≤ Im λ ≤ 10(1 + max|qₙ|)."""
    half = (ctx.vtable.A + 2) / 2
    qmax = q_from_vtable(ctx.vtable).max_abs()
    return Rectangle(
        re_min=-half, re_max=half, im_min=settings.root_strip, im_max=10 * (1 + qmax)
    )


def refine_zero(
    ctx: SolutionContext,
    start: complex,
    tol_root: float,
    max_iterations: int | None = None,
    bounds: Rectangle | None = None,
) -> tuple[complex, complex]:
    """
    Newton iteration on C₁₂ from start.

    With bounds given, the iteration is abandoned once it leaves bounds
    grown by their own size.

    Returns:
        (zero, C₁₂′ at the zero)

    Raises:
        NonConvergence: If |C₁₂| does not drop below tol_root in time or the
            iterate diverges
    """
    max_iterations = max_iterations or settings.newton_max_iterations
    fence = bounds.grown(max(bounds.width, bounds.height)) if bounds is not None else None
    z = complex(start)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for _ in range(max_iterations):
            value, slope = c12_values(ctx, np.asarray(z))
            value, slope = complex(value), complex(slope)
            if abs(value) < tol_root:
                return z, slope
            if slope == 0 or not np.isfinite(value / slope):
                break
            z -= value / slope
            if fence is not None and not fence.contains(z):
                logger.debug("Newton from %s left %s", start, fence)
                break
    raise NonConvergence(f"Newton did not converge from {start} in {max_iterations} steps")


def _winding(ctx: SolutionContext, rect: Rectangle) -> int:
    return winding_number(
        lambda z: c12_values(ctx, z)[0], rect, settings.contour_zero_guard
    )


def _split_counted(ctx: SolutionContext, cell: Rectangle) -> list[tuple[Rectangle, int]]:
    """Splits a cell and counts both halves, moving the cut if it meets a zero."""
    for fraction in SPLIT_FRACTIONS:
        try:
            return [(child, _winding(ctx, child)) for child in cell.split(fraction)]
        except ContourThroughZero:
            logger.info("Cut at %.4f of %s meets a zero, retrying", fraction, cell)
    raise ContourThroughZero(f"every cut of {cell} meets a zero of C12")


def _newton_starts(ctx: SolutionContext, cell: Rectangle, points: int = 9) -> list[complex]:
    """The cell centre, then the sample of smallest |C₁₂| on a points × points grid."""
    re, im = np.meshgrid(
        np.linspace(cell.re_min, cell.re_max, points),
        np.linspace(cell.im_min, cell.im_max, points),
    )
    lams = (re + 1j * im).ravel()
    with np.errstate(over="ignore", invalid="ignore"):
        values, _ = c12_values(ctx, lams)
    best = complex(lams[np.nanargmin(np.abs(values))])
    return [cell.center] if best == cell.center else [cell.center, best]


def _try_refine(ctx: SolutionContext, cell: Rectangle, tol_root: float):
    margin = 1e-9 * (1 + max(cell.width, cell.height))
    for start in _newton_starts(ctx, cell):
        try:
            zero, slope = refine_zero(ctx, start, tol_root, bounds=cell)
        except (NonConvergence, PoleAtLambda):
            continue
        if cell.contains(zero, margin):
            return zero, slope
    return None


def find_eigenvalues(
    ctx: SolutionContext,
    region: Rectangle | None = None,
    tol_root: float | None = None,
    cutoff: int | None = None,
) -> SpectrumReport:
    """
    Locates the zeros of C₁₂ in a rectangle of the upper half plane.

    The region is bisected along its longest side while winding numbers
    are non-zero; cells holding exactly one zero are finished by Newton,
    started from the centre and then from the grid sample of smallest |C₁₂|.
    A cell that resists refinement is split again until it is smaller than
    settings.min_cell_size.
    Every S₀ zero ζ is reported together with its S₁ partner -ζ.

    Args:
        ctx: Problem instance
        region: Search rectangle, defaults to default_region(ctx)
        tol_root: Target |C₁₂| at the zeros
        cutoff: Number of singularities per family in the report, defaults to A

    Returns:
        SpectrumReport with eigenvalues, singularities and per-cell counts
    """
    region = region or default_region(ctx)
    tol_root = tol_root or settings.root_tolerance
    if region.im_min < settings.root_strip:
        raise ValueError(
            f"search region must satisfy Im lambda >= {settings.root_strip}, got {region.im_min}"
        )

    try:
        top = _winding(ctx, region)
    except ContourThroughZero:
        region = region.grown(1e-7 * (1 + max(region.width, region.height)))
        logger.info("Region boundary meets a zero, retrying on %s", region)
        top = _winding(ctx, region)

    counts = [CellCount(rectangle=region, winding=top, depth=0)]
    found: list[tuple[complex, complex, int]] = []
    stack = [(region, top, 0, 0)]
    while stack:
        cell, winding, depth, index = stack.pop()
        if winding == 0:
            continue
        small = max(cell.width, cell.height) < settings.min_cell_size
        if winding == 1 or small:
            refined = _try_refine(ctx, cell, tol_root)
            if refined is not None:
                found.append((refined[0], refined[1], winding))
                continue
            if small:
                raise NonConvergence(f"no zero refined inside {cell} at depth {depth}")

        children = _split_counted(ctx, cell)
        total = sum(w for _, w in children)
        counts[index] = counts[index].model_copy(update={"children_total": total})
        if total != winding:
            logger.warning("Children of %s wind %d times, parent %d", cell, total, winding)
        for child, child_winding in children:
            counts.append(CellCount(rectangle=child, winding=child_winding, depth=depth + 1))
            stack.append((child, child_winding, depth + 1, len(counts) - 1))

    eigenvalues = _collect(ctx, found)
    table = tail_norm(ctx.vtable)
    return SpectrumReport(
        eigenvalues=eigenvalues,
        singularities=spectral_singularities(ctx.medium, cutoff or ctx.vtable.A),
        search_region=region,
        counts=counts,
        truncation=ctx.vtable.A,
        tail_norm=table.total,
        tail_ratio=table.ratio,
    )


def _collect(ctx: SolutionContext, found: list[tuple[complex, complex, int]]) -> list[Eigenvalue]:
    unique: list[tuple[complex, complex, int]] = []
    for zero, slope, multiplicity in sorted(found, key=lambda item: (item[0].real, item[0].imag)):
        if unique and abs(unique[-1][0] - zero) < 1e-8 * (1 + abs(zero)):
            continue
        unique.append((zero, slope, multiplicity))

    eigenvalues = []
    for zero, slope, multiplicity in unique:
        simple = multiplicity == 1 and abs(slope) > settings.simple_zero_floor
        if not simple:
            logger.warning("Zero %s of C12 is not simple (|C12'| = %.3e)", zero, abs(slope))
        residual = abs(c12(ctx, zero))
        for value, sector in ((zero, "S0"), (-zero, "S1")):
            eigenvalues.append(
                Eigenvalue(
                    value=value,
                    c12_abs=residual,
                    derivative_abs=abs(slope),
                    multiplicity=multiplicity,
                    sector=sector,
                    simple=simple,
                )
            )
    return eigenvalues


def spectral_singularities(medium: MediumProfile, cutoff: int) -> list[Singularity]:
    """Merged list {n/2} ∪ {n/(2β)}, n ≤ cutoff; ties list the n/(2β) entry first."""
    if cutoff < 1:
        raise ValueError(f"cutoff must be at least 1, got {cutoff}")
    entries = [Singularity(value=n / 2, family="n/2", n=n) for n in range(1, cutoff + 1)]
    entries += [
        Singularity(value=n / (2 * medium.beta), family="n/(2beta)", n=n)
        for n in range(1, cutoff + 1)
    ]
    return sorted(entries, key=lambda s: (s.value, s.family != "n/(2beta)", s.n))


# ========== Derivative identities ==========


def _full_line_pair(ctx: SolutionContext, coeffs: ScatteringCoeffs, lam: complex):
    def product(x: Any) -> Any:
        u = extend_solution(ctx, coeffs, "f1+", x, lam)
        v = extend_solution(ctx, coeffs, "f2+", x, lam)
        return ctx.medium.rho(x) * u * v

    return product


def _folded_integral(
    func: Callable[[np.ndarray], np.ndarray], a: float, b: float, panel: float
) -> tuple[complex, float]:
    """
    ∫_a^b func by adaptive quadrature over one panel of the folded integrand.

    [a, b] is cut into equal panels no longer than panel and the integrand is
    summed across them, so every quadrature node evaluates func on a whole
    array of shifted points.
    """
    count = max(1, int(np.ceil((b - a) / panel)))
    width = (b - a) / count
    offsets = a + width * np.arange(count)

    def folded(s: float) -> complex:
        return complex(np.sum(func(offsets + s)))

    value, error = integrate.quad_vec(
        folded,
        0.0,
        width,
        epsabs=settings.quadrature_epsabs,
        epsrel=1e-10,
        limit=settings.quadrature_limit,
    )
    return complex(value), float(error)


def _weighted_integral(
    func: Callable[[np.ndarray], np.ndarray], half_width: float, frequency: float = 1.0
) -> tuple[complex, float]:
    """
    ∫_{-X}^{X} func split at the interface x = 0.

    frequency bounds the angular frequency of the integrand's slowest
    decaying oscillation; each panel spans a few of its periods.

    Returns:
        (integral, quadrature error estimate)
    """
    panel = 8 * np.pi / max(frequency, 1.0)
    total, error = 0j, 0.0
    for a, b in ((-half_width, 0.0), (0.0, half_width)):
        value, err = _folded_integral(func, a, b, panel)
        total += value
        error += err
    tolerance = max(settings.quadrature_epsabs, 1e-8 * abs(total))
    if error > tolerance:
        logger.warning(
            "Quadrature over [-%.3g, %.3g] has error estimate %.3e above %.3e",
            half_width,
            half_width,
            error,
            tolerance,
        )
    return total, error


def c12_derivative_check(ctx: SolutionContext, zeta: complex) -> DerivativeCheck:
    """
    Compares dC₁₂/dλ at a zero ζ with i∫ρ f₁⁺ f₂⁺ dx.

    Under W[f, g] = f·g′ - f′·g the identity at a zero reads
    dC₁₂/dλ = +i∫ρ f₁⁺ f₂⁺ dx. The left side is a fourth-order stencil, the
    right side adaptive quadrature over [-X, X] with e^{-Im ζ·X·min(1, β)}
    below the decay threshold. Near-real zeros push X into the thousands,
    so the quadrature runs on panels a few oscillation periods long.

    Raises:
        ValueError: If ζ is not in the upper half plane or C₁₂(ζ) is not small
    """
    zeta = complex(zeta)
    if zeta.imag <= 0:
        raise ValueError(f"zeta must lie in the upper half plane, got {zeta}")
    residual = abs(c12(ctx, zeta))
    if residual >= 1e-8:
        raise ValueError(f"|C12({zeta})| = {residual:.3e} is not a zero")

    step = 1e-5 * (1 + abs(zeta))
    lhs = central_derivative(lambda z: c12(ctx, z), zeta, step)

    beta = ctx.medium.beta
    half_width = float(np.log(1 / settings.decay_threshold) / (zeta.imag * min(1.0, beta)))
    coeffs = scattering_coeffs(ctx, zeta)
    product = _full_line_pair(ctx, coeffs, zeta)
    frequency = 2 * abs(zeta) * max(1.0, beta)
    integral, error = _weighted_integral(product, half_width, frequency)
    rhs = 1j * integral

    samples = np.abs(product(np.linspace(-half_width, half_width, 401)))
    peak = float(samples.max())
    edge = float(max(samples[0], samples[-1]))
    return DerivativeCheck(
        lam=zeta,
        lhs=lhs,
        rhs=rhs,
        half_width=half_width,
        endpoint_decay=edge / peak if peak > 0 else 0.0,
        quadrature_error=error,
    )


def c12_derivative_identity(
    ctx: SolutionContext, lam: complex, half_width: float = 2.0
) -> DerivativeCheck:
    """
    Exact finite-interval form of the derivative identity at any λ.

    dW/dλ = -2λ∫_{-X}^{X} ρ f₁⁺ f₂⁺ dx + W[∂λf₁⁺, f₂⁺](X) + W[f₁⁺, ∂λf₂⁺](-X)
    for W = W[f₁⁺, f₂⁺], then dC₁₂/dλ = W′/(2iλ) - W/(2iλ²). The left side
    is the same numerical stencil as c12_derivative_check.
    """
    lam = complex(lam)
    step = 1e-5 * (1 + abs(lam))
    lhs = central_derivative(lambda z: c12(ctx, z), lam, step)

    coeffs = scattering_coeffs(ctx, lam)
    frequency = 2 * abs(lam) * max(1.0, ctx.medium.beta)
    product = _full_line_pair(ctx, coeffs, lam)
    integral, error = _weighted_integral(product, half_width, frequency)
    x_right, x_left = half_width, -half_width

    right = wronskian(
        lambda_derivative(ctx, "f1", x_right, lam, "+", 0),
        lambda_derivative(ctx, "f1", x_right, lam, "+", 1),
        extend_solution(ctx, coeffs, "f2+", x_right, lam, 0),
        extend_solution(ctx, coeffs, "f2+", x_right, lam, 1),
    )
    left = wronskian(
        extend_solution(ctx, coeffs, "f1+", x_left, lam, 0),
        extend_solution(ctx, coeffs, "f1+", x_left, lam, 1),
        lambda_derivative(ctx, "f2", x_left, lam, "+", 0),
        lambda_derivative(ctx, "f2", x_left, lam, "+", 1),
    )
    dw = -2 * lam * integral + right + left
    w = 2j * lam * coeffs.c12
    rhs = dw / (2j * lam) - w / (2j * lam**2)
    return DerivativeCheck(
        lam=lam, lhs=lhs, rhs=rhs, half_width=half_width, quadrature_error=error
    )


# ========== Resolvent ==========


def _resolvent_parts(ctx: SolutionContext, lam: complex):
    """Coefficients and W[f₁⁺, f₂⁺](0) at a λ of the upper half plane."""
    coeffs = scattering_coeffs(ctx, lam)
    w = 2j * lam * coeffs.c12
    if abs(w) < settings.near_pole_wronskian:
        raise NearPole(f"|W[f1+, f2+]| = {abs(w):.3e} at lambda={lam}")
    return coeffs, w


def resolvent_kernel(ctx: SolutionContext, query: ResolventQuery) -> complex:
    """
    Resolvent kernel R(x, t, λ) in sector S₀ or S₁.

    In S₀ it is f₁⁺(max(x, t))·f₂⁺(min(x, t))/W[f₁⁺, f₂⁺]; in S₁ the same
    with f₁⁻, f₂⁻, which equals the S₀ expression at -λ.

    Raises:
        NearPole: If W vanishes at λ
    """
    lam = query.lam if query.sector == "S0" else -query.lam
    coeffs, w = _resolvent_parts(ctx, lam)
    hi, lo = max(query.x, query.t), min(query.x, query.t)
    return complex(
        extend_solution(ctx, coeffs, "f1+", hi, lam) * extend_solution(ctx, coeffs, "f2+", lo, lam)
        / w
    )


def apply_resolvent(
    ctx: SolutionContext,
    lam: complex,
    source: Callable[[float], complex],
    support: tuple[float, float],
    x: Any,
    epsabs: float = 1e-13,
    epsrel: float = 1e-12,
) -> Any:
    """
    y(x) = ∫ R(x, t, λ) ρ(t) f(t) dt for a source supported on an interval.

    y then solves -y″ + q y - λ²ρ y = ρ f. The integral is split at t = x
    and t = 0.
    """
    lam = complex(lam)
    lam_eff = lam if lam.imag > 0 else -lam
    coeffs, w = _resolvent_parts(ctx, lam_eff)
    a, b = support

    def weighted(which: str) -> Callable[[float], complex]:
        def integrand(t: float) -> complex:
            phi = extend_solution(ctx, coeffs, which, t, lam_eff)
            return complex(phi * ctx.medium.rho(t) * source(t))

        return integrand

    def integral(func: Callable[[float], complex], lo: float, hi: float) -> complex:
        if hi <= lo:
            return 0j
        cuts = [lo] + [c for c in (0.0,) if lo < c < hi] + [hi]
        total = 0j
        for p, q in zip(cuts, cuts[1:]):
            value, _ = integrate.quad(
                func, p, q, complex_func=True, epsabs=epsabs, epsrel=epsrel, limit=400
            )
            total += value
        return total

    lower, upper = weighted("f2+"), weighted("f1+")
    points = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(points.shape, dtype=complex)
    for k, xk in enumerate(points):
        left = integral(lower, a, min(xk, b))
        right = integral(upper, max(xk, a), b)
        out[k] = (
            extend_solution(ctx, coeffs, "f1+", xk, lam_eff) * left
            + extend_solution(ctx, coeffs, "f2+", xk, lam_eff) * right
        ) / w
    return complex(out[0]) if np.ndim(x) == 0 else out


# ========== Residues ==========


def residue_at_singularity(
    ctx: SolutionContext, n: int, x: float, t: float, deltas: list[float] | None = None
) -> ResidueEstimate:
    """
    Limit of (n - 2λ)R₁₁(x, t, λ) as λ → n/2 next to the residue formula.

    limit_est extrapolates the samples along λ = n/2 + iδ (halving δ) with
    Richardson steps; formula is (2/(in))·V_{nn}·f₁⁺(x, n/2)·f₁⁺(t, n/2).
    """
    table = ctx.vtable
    if not 1 <= n <= table.A:
        raise ValueError(f"n must lie in 1..{table.A}, got {n}")
    vnn = table.get(n, n)
    if vnn == 0:
        logger.warning("V_%d%d is zero; the singularity at %s is removable", n, n, n / 2)

    deltas = deltas or settings.residue_deltas
    samples = []
    for delta in deltas:
        lam = n / 2 + 1j * delta
        kernel = resolvent_kernel(ctx, ResolventQuery(x=x, t=t, lam=lam, sector="S0"))
        samples.append((n - 2 * lam) * kernel)
    ratio = deltas[0] / deltas[1]
    limit_est = richardson_extrapolate(samples, p=1, r=ratio)

    half = n / 2
    formula = (2 / (1j * n)) * vnn * eval_f1(ctx, x, half) * eval_f1(ctx, t, half)
    return ResidueEstimate(
        n=n, x=x, t=t, limit_est=limit_est, formula=complex(formula), samples=samples
    )
