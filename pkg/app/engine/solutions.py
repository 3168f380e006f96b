"""Fundamental solutions f₁^±, f₂^±, their renormalized forms and Wronskians.

All four fundamental solutions share one series kernel

    φ(x, μ) = e^{iμx} (1 + Σ_n g_n(x)/(n + 2μ)),   g_n(x) = Σ_α V_{nα} e^{iαx}

with μ = λ for f₁⁺, μ = -λ for f₁⁻, μ = -βλ for f₂⁺ and μ = βλ for f₂⁻.
Everything here accepts scalar or array x, including complex x.
"""

import logging
from typing import Any, Literal

import numpy as np

from app.config import settings
from app.data.models import ScatteringCoeffs, Sign, SolutionContext, VTable
from app.errors import DegenerateBasis, PoleAtLambda

logger = logging.getLogger(__name__)

Family = Literal["f1", "f2"]


def spectral_shift(family: Family, sign: Sign, lam: complex, beta: float) -> tuple[complex, float]:
    """Maps (family, sign, λ) to the kernel parameter μ and dμ/dλ."""
    factor = 1.0 if family == "f1" else -beta
    if sign == "-":
        factor = -factor
    elif sign != "+":
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    return factor * lam, factor


def _weights(table: VTable, mu: Any) -> np.ndarray:
    """
    1/(n + 2μ) for n = 1…A, raising on a pole of a non-empty row.

    Rows of the table that are identically zero contribute nothing, so their
    weight is set to zero instead.
    """
    mu = np.asarray(mu, dtype=complex)
    n = np.arange(1, table.A + 1)
    denom = n + 2.0 * mu[..., np.newaxis]
    hit = np.abs(denom) < settings.pole_guard
    if hit.any():
        active = np.any(table.entries != 0, axis=1)
        live = hit & active
        if live.any():
            idx = np.argwhere(live)[0]
            raise PoleAtLambda(int(n[idx[-1]]), complex(mu[tuple(idx[:-1])]))
        denom = np.where(hit, 1.0, denom)
        return np.where(hit, 0.0, 1.0 / denom)
    return 1.0 / denom


def _harmonic_rows(table: VTable, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """g_n(x) and g_n′(x) with shape x.shape + (A,)."""
    alpha = np.arange(1, table.A + 1)
    waves = np.exp(1j * np.multiply.outer(x, alpha))
    g = waves @ table.entries.T
    dg = waves @ (table.entries * (1j * alpha)).T
    return g, dg


def _kernel(table: VTable, x: Any, mu: complex) -> dict[str, np.ndarray]:
    x = np.asarray(x, dtype=complex)
    w = _weights(table, mu)
    g, dg = _harmonic_rows(table, x)
    phase = np.exp(1j * mu * x)
    series = g @ w
    dseries = dg @ w
    value = phase * (1.0 + series)
    return {
        "x": x,
        "w": w,
        "g": g,
        "dg": dg,
        "phase": phase,
        "value": value,
        "derivative": 1j * mu * value + phase * dseries,
        "dseries": dseries,
    }


def _scalar(result: np.ndarray) -> Any:
    return complex(result) if np.ndim(result) == 0 else result


def kernel_value(table: VTable, x: Any, mu: complex, order: int = 0) -> Any:
    """φ(x, μ) or its x-derivative."""
    if order not in (0, 1):
        raise ValueError(f"order must be 0 or 1, got {order}")
    k = _kernel(table, x, mu)
    return _scalar(k["value"] if order == 0 else k["derivative"])


def eval_f1(ctx: SolutionContext, x: Any, lam: complex, sign: Sign = "+", order: int = 0) -> Any:
    """f₁^±(x, λ) = e^{±iλx}(1 + Σ (1/(n ± 2λ)) Σ_α V_{nα} e^{iαx}) or its x-derivative."""
    mu, _ = spectral_shift("f1", sign, lam, ctx.medium.beta)
    return kernel_value(ctx.vtable, x, mu, order)


def eval_f2(ctx: SolutionContext, x: Any, lam: complex, sign: Sign = "+", order: int = 0) -> Any:
    """f₂^±(x, λ) = e^{∓iλβx}(1 + Σ (1/(n ∓ 2λβ)) Σ_α V_{nα} e^{iαx}) or its x-derivative."""
    mu, _ = spectral_shift("f2", sign, lam, ctx.medium.beta)
    return kernel_value(ctx.vtable, x, mu, order)


def eval_fn(ctx: SolutionContext, n: int, x: Any, sign: Sign = "+") -> Any:
    """
    Renormalized solution Σ_{α≥n} V_{nα} e^{i(α - n/2)x}.

    This is the limit of (n ± 2λ)f₁^± at λ = ∓n/2; both signs share the
    same series and equal V_{nn}·f₁⁺(x, n/2).
    """
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    table = ctx.vtable
    if not 1 <= n <= table.A:
        raise ValueError(f"n must lie in 1..{table.A}, got {n}")
    x = np.asarray(x, dtype=complex)
    alpha = np.arange(n, table.A + 1)
    waves = np.exp(1j * np.multiply.outer(x, alpha - n / 2))
    return _scalar(waves @ table.entries[n - 1, n - 1 :])


def wronskian(f: Any, fp: Any, g: Any, gp: Any) -> Any:
    """W[f, g] = f·g′ - f′·g."""
    return f * gp - fp * g


def lambda_derivative(
    ctx: SolutionContext,
    family: Family,
    x: Any,
    lam: complex,
    sign: Sign = "+",
    order: int = 0,
) -> Any:
    """
    Exact ∂/∂λ of a fundamental solution or of its x-derivative.

    Args:
        ctx: Problem instance
        family: "f1" or "f2"
        x: Evaluation point(s)
        lam: Spectral parameter
        sign: "+" or "-"
        order: 0 for the solution, 1 for its x-derivative

    Returns:
        The derivative with the chain factor dμ/dλ applied
    """
    mu, factor = spectral_shift(family, sign, lam, ctx.medium.beta)
    k = _kernel(ctx.vtable, x, mu)
    w2 = -2.0 * k["w"] ** 2
    d_value = 1j * k["x"] * k["value"] + k["phase"] * (k["g"] @ w2)
    if order == 0:
        return _scalar(factor * d_value)
    if order != 1:
        raise ValueError(f"order must be 0 or 1, got {order}")
    d_deriv = (
        1j * k["value"]
        + 1j * mu * d_value
        + 1j * k["x"] * k["phase"] * k["dseries"]
        + k["phase"] * (k["dg"] @ w2)
    )
    return _scalar(factor * d_deriv)


def boundary_values(table: VTable, mu: Any) -> dict[str, np.ndarray]:
    """
    φ, φ′ and their μ-derivatives at x = 0 for an array of μ.

    At x = 0 the harmonic rows collapse to row sums, so this stays cheap on
    long λ-grids.
    """
    mu = np.asarray(mu, dtype=complex)
    w = _weights(table, mu)
    rows = table.row_sums()
    weighted = table.weighted_row_sums()
    w2 = -2.0 * w**2
    value = 1.0 + w @ rows
    derivative = 1j * mu * value + 1j * (w @ weighted)
    d_value = w2 @ rows
    d_derivative = 1j * value + 1j * mu * d_value + 1j * (w2 @ weighted)
    return {
        "value": value,
        "derivative": derivative,
        "d_value": d_value,
        "d_derivative": d_derivative,
    }


def extend_solution(
    ctx: SolutionContext,
    coeffs: ScatteringCoeffs,
    which: Literal["f1+", "f2+"],
    x: Any,
    lam: complex,
    order: int = 0,
) -> Any:
    """
    Evaluates f₁⁺ or f₂⁺ on the whole line.

    f₂⁺ is its own series on x < 0 and combo_a·f₁⁺ + combo_b·f₁⁻ on x ≥ 0;
    f₁⁺ is its own series on x ≥ 0 and left_a·f₂⁺ + left_b·f₂⁻ on x < 0.

    Raises:
        DegenerateBasis: When the basis used for the continuation is singular
    """
    if which == "f2+":
        basis_w = coeffs.right_wronskian
    elif which == "f1+":
        basis_w = coeffs.left_wronskian
    else:
        raise ValueError(f"which must be 'f1+' or 'f2+', got {which!r}")
    if abs(basis_w) < settings.basis_wronskian_floor:
        raise DegenerateBasis(f"basis Wronskian {abs(basis_w):.3e} at lambda={lam}")

    x = np.asarray(x, dtype=float)
    left = x < 0
    out = np.empty(x.shape, dtype=complex)
    if which == "f2+":
        if left.any():
            out[left] = eval_f2(ctx, x[left], lam, "+", order)
        if (~left).any():
            xr = x[~left]
            out[~left] = coeffs.combo_a * eval_f1(ctx, xr, lam, "+", order) + (
                coeffs.combo_b * eval_f1(ctx, xr, lam, "-", order)
            )
    else:
        if (~left).any():
            out[~left] = eval_f1(ctx, x[~left], lam, "+", order)
        if left.any():
            xl = x[left]
            out[left] = coeffs.left_a * eval_f2(ctx, xl, lam, "+", order) + (
                coeffs.left_b * eval_f2(ctx, xl, lam, "-", order)
            )
    return _scalar(out)
