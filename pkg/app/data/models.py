"""Domain models shared by the engine, the CLI and the web surface."""

from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Sign = Literal["+", "-"]
Sector = Literal["S0", "S1"]
SingularityFamily = Literal["n/2", "n/(2beta)"]


class Potential(BaseModel):
    """Finite harmonic potential q(x) = Σ qₙ e^{inx}, n = 1…N."""

    model_config = ConfigDict(frozen=True)

    harmonics: tuple[complex, ...] = Field(default=(), description="q₁…q_N in order")

    @property
    def N(self) -> int:
        return len(self.harmonics)

    def coefficient(self, n: int) -> complex:
        """Returns qₙ, zero outside 1…N."""
        if 1 <= n <= self.N:
            return self.harmonics[n - 1]
        return 0j

    def padded(self, order: int) -> np.ndarray:
        """q₁…q_order as an array, truncated or zero-padded."""
        q = np.zeros(order, dtype=complex)
        count = min(order, self.N)
        q[:count] = self.harmonics[:count]
        return q

    def max_abs(self) -> float:
        return max((abs(c) for c in self.harmonics), default=0.0)

    def evaluate(self, x: Any) -> np.ndarray:
        """q(x) on an array of (possibly complex) points."""
        x = np.asarray(x, dtype=complex)
        if self.N == 0:
            return np.zeros_like(x)
        n = np.arange(1, self.N + 1)
        return np.exp(1j * np.multiply.outer(x, n)) @ np.asarray(self.harmonics, dtype=complex)


class MediumProfile(BaseModel):
    """Two-piece profile ρ = β² on x < 0 and ρ = 1 on x ≥ 0."""

    model_config = ConfigDict(frozen=True)

    beta: float

    @field_validator("beta")
    @classmethod
    def _check_beta(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("beta must be positive")
        if value == 1:
            raise ValueError("beta must differ from 1")
        return value

    def rho(self, x: Any) -> np.ndarray:
        x = np.asarray(x)
        return np.where(np.real(x) < 0, self.beta**2, 1.0)


class VTable(BaseModel):
    """Upper-triangular coefficient table; entries[n-1, α-1] holds V_{nα}."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray

    @model_validator(mode="after")
    def _freeze(self) -> "VTable":
        e = self.entries
        if e.ndim != 2 or e.shape[0] != e.shape[1] or e.shape[0] < 1:
            raise ValueError("entries must be a non-empty square array")
        if np.any(np.tril(e, -1) != 0):
            raise ValueError("entries below the diagonal must be zero")
        e.setflags(write=False)
        return self

    @property
    def A(self) -> int:
        return self.entries.shape[0]

    def get(self, n: int, alpha: int) -> complex:
        """V_{nα}, zero outside 1 ≤ n ≤ α ≤ A."""
        if 1 <= n <= alpha <= self.A:
            return complex(self.entries[n - 1, alpha - 1])
        return 0j

    def diagonal(self) -> np.ndarray:
        return np.diagonal(self.entries).copy()

    def row_sums(self) -> np.ndarray:
        """Σ_α V_{nα} per row n."""
        return self.entries.sum(axis=1)

    def weighted_row_sums(self) -> np.ndarray:
        """Σ_α α·V_{nα} per row n."""
        return self.entries @ np.arange(1, self.A + 1)

    def column_sums(self) -> np.ndarray:
        return self.entries.sum(axis=0)


class TailNorm(BaseModel):
    total: float
    last_column: float

    @property
    def ratio(self) -> float:
        return self.last_column / self.total if self.total > 0 else 0.0


class SolutionContext(BaseModel):
    """V-table and medium of a single problem instance."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    vtable: VTable
    medium: MediumProfile


class ScatteringCoeffs(BaseModel):
    """Interface coefficients at one λ.

    combo_a, combo_b solve f₂⁺ = combo_a·f₁⁺ + combo_b·f₁⁻ on x ≥ 0 and
    left_a, left_b solve f₁⁺ = left_a·f₂⁺ + left_b·f₂⁻ on x < 0.
    """

    lam: complex
    c11: complex
    c12: complex
    c21: complex
    c22: complex
    combo_a: complex
    combo_b: complex
    left_a: complex
    left_b: complex
    right_wronskian: complex = Field(..., description="W[f1+, f1-] at x = 0")
    left_wronskian: complex = Field(..., description="W[f2+, f2-] at x = 0")


class Rectangle(BaseModel):
    """Axis-aligned rectangle in the λ-plane."""

    model_config = ConfigDict(frozen=True)

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    @model_validator(mode="after")
    def _check_bounds(self) -> "Rectangle":
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("rectangle bounds must be increasing")
        return self

    @classmethod
    def parse(cls, text: str) -> "Rectangle":
        """Parses 're0,re1,im0,im1'."""
        parts = [float(p) for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected re0,re1,im0,im1, got {text!r}")
        return cls(re_min=parts[0], re_max=parts[1], im_min=parts[2], im_max=parts[3])

    @property
    def width(self) -> float:
        return self.re_max - self.re_min

    @property
    def height(self) -> float:
        return self.im_max - self.im_min

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))

    def corners(self) -> list[complex]:
        """Counter-clockwise from the lower-left corner."""
        return [
            complex(self.re_min, self.im_min),
            complex(self.re_max, self.im_min),
            complex(self.re_max, self.im_max),
            complex(self.re_min, self.im_max),
        ]

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        return (
            self.re_min - margin <= z.real <= self.re_max + margin
            and self.im_min - margin <= z.imag <= self.im_max + margin
        )

    def split(self, fraction: float = 0.5) -> tuple["Rectangle", "Rectangle"]:
        """Cuts the longest side at the given fraction."""
        if self.width >= self.height:
            cut = self.re_min + fraction * self.width
            return (
                self.model_copy(update={"re_max": cut}),
                self.model_copy(update={"re_min": cut}),
            )
        cut = self.im_min + fraction * self.height
        return (
            self.model_copy(update={"im_max": cut}),
            self.model_copy(update={"im_min": cut}),
        )

    def grown(self, offset: float) -> "Rectangle":
        """Moves every side outwards by offset, keeping im_min."""
        return Rectangle(
            re_min=self.re_min - offset,
            re_max=self.re_max + offset,
            im_min=self.im_min,
            im_max=self.im_max + offset,
        )


class Singularity(BaseModel):
    value: float
    family: SingularityFamily
    n: int


class Eigenvalue(BaseModel):
    value: complex
    c12_abs: float
    derivative_abs: float
    multiplicity: int = 1
    sector: Sector = "S0"
    simple: bool = True

    @property
    def energy(self) -> complex:
        """Operator eigenvalue λ²."""
        return self.value**2


class CellCount(BaseModel):
    """Winding number of C12 around one searched cell."""

    rectangle: Rectangle
    winding: int
    depth: int
    children_total: int | None = None


class SpectrumReport(BaseModel):
    eigenvalues: list[Eigenvalue] = Field(default_factory=list)
    singularities: list[Singularity] = Field(default_factory=list)
    search_region: Rectangle
    counts: list[CellCount] = Field(default_factory=list)
    truncation: int
    tail_norm: float
    tail_ratio: float = 0.0

    @property
    def total_winding(self) -> int:
        return sum(c.winding for c in self.counts if c.depth == 0)


class ResolventQuery(BaseModel):
    x: float
    t: float
    lam: complex
    sector: Sector = "S0"

    @model_validator(mode="after")
    def _check_sector(self) -> "ResolventQuery":
        if self.sector == "S0" and not self.lam.imag > 0:
            raise ValueError("sector S0 requires Im lambda > 0")
        if self.sector == "S1" and not self.lam.imag < 0:
            raise ValueError("sector S1 requires Im lambda < 0")
        return self

    @classmethod
    def at(cls, x: float, t: float, lam: complex) -> "ResolventQuery":
        """Builds a query with the sector read off from Im λ."""
        return cls(x=x, t=t, lam=lam, sector="S0" if lam.imag > 0 else "S1")


class C12Sample(BaseModel):
    im_lambda: float
    value: complex


class SpectralData(BaseModel):
    """Inverse-problem input: normalizing numbers plus C12 samples or its limit."""

    normalizing_numbers: tuple[complex, ...]
    c12_samples: list[C12Sample] | None = None
    c12_asymptote: complex | None = None

    @model_validator(mode="after")
    def _check_shape(self) -> "SpectralData":
        if len(self.normalizing_numbers) < 1:
            raise ValueError("at least one normalizing number is required")
        if (self.c12_samples is None) == (self.c12_asymptote is None):
            raise ValueError("exactly one of c12_samples and c12_asymptote must be given")
        if self.c12_samples is not None:
            heights = [s.im_lambda for s in self.c12_samples]
            if len(heights) < 3:
                raise ValueError("at least 3 C12 samples are required")
            if any(b <= a for a, b in zip(heights, heights[1:])):
                raise ValueError("C12 samples must have strictly increasing Im lambda")
        return self

    @property
    def A(self) -> int:
        return len(self.normalizing_numbers)


class InverseResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    beta: float = Field(..., gt=0)
    potential: Potential
    vtable: VTable
    diagnostics: dict[str, float] = Field(default_factory=dict)


class RoundTripReport(BaseModel):
    """Forward-then-inverse comparison for one instance."""

    q_error: float | None = None
    beta_error: float | None = None
    vtable_error: float | None = None
    recovered_beta: float | None = None
    passed: bool = False
    error: str | None = None


class ResidueEstimate(BaseModel):
    n: int
    x: float
    t: float
    limit_est: complex
    formula: complex
    samples: list[complex] = Field(default_factory=list)


class DerivativeCheck(BaseModel):
    """Both sides of a derivative identity for C12 at one λ."""

    lam: complex
    lhs: complex
    rhs: complex
    half_width: float
    endpoint_decay: float = 0.0
    quadrature_error: float = 0.0

    @property
    def relative_error(self) -> float:
        scale = max(abs(self.lhs), abs(self.rhs))
        return abs(self.lhs - self.rhs) / scale if scale > 0 else 0.0
