"""Small numerical building blocks: limits, extrapolation and stencils."""

from collections.abc import Callable, Sequence

import numpy as np


def richardson_extrapolate(base_values: Sequence[complex], p: int, r: float = 2.0) -> complex:
    """
    Richardson extrapolation on a sequence of approximations.

    Args:
        base_values: Approximations whose step shrinks by a factor r between entries
        p: Order of the leading error term
        r: Step reduction factor

    Returns:
        The extrapolated value
    """
    n = len(base_values)
    if n < 2:
        raise ValueError("richardson_extrapolate requires at least two base values")

    vals = [complex(v) for v in base_values]
    for j in range(1, n):
        factor = r ** (p * j)
        for k in range(n - 1, j - 1, -1):
            vals[k] = (factor * vals[k] - vals[k - 1]) / (factor - 1.0)
    return vals[-1]


def polynomial_limit(steps: Sequence[float], values: Sequence[complex]) -> complex:
    """
    Value at step 0 of the polynomial in the step through all given points.

    Solves the Vandermonde system c₀ + c₁s + … + c_{k-1}s^{k-1} = value.
    """
    s = np.asarray(steps, dtype=float)
    mat = np.vander(s, len(s), increasing=True)
    coeffs = np.linalg.solve(mat, np.asarray(values, dtype=complex))
    return complex(coeffs[0])


def linear_fit(steps: Sequence[float], values: Sequence[complex]) -> tuple[complex, complex, float]:
    """
    Least-squares fit value ≈ c₀ + c₁·s.

    Returns:
        (c₀, c₁, residual norm)
    """
    s = np.asarray(steps, dtype=float)
    mat = np.column_stack([np.ones_like(s), s]).astype(complex)
    y = np.asarray(values, dtype=complex)
    coeffs, *_ = np.linalg.lstsq(mat, y, rcond=None)
    residual = float(np.linalg.norm(mat @ coeffs - y))
    return complex(coeffs[0]), complex(coeffs[1]), residual


def central_derivative(func: Callable[[complex], complex], z: complex, h: float) -> complex:
    """Fourth-order central difference along the real direction."""
    return (-func(z + 2 * h) + 8 * func(z + h) - 8 * func(z - h) + func(z - 2 * h)) / (12 * h)


def second_derivative(
    func: Callable[[np.ndarray], np.ndarray], x: np.ndarray, h: float
) -> np.ndarray:
    """Three-point central second difference on an array of points."""
    x = np.asarray(x, dtype=float)
    return (func(x + h) - 2 * func(x) + func(x - h)) / h**2
