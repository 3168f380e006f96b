"""Configuration management using Pydantic Settings."""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical thresholds and defaults, overridable with WAVESPEC_* environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="WAVESPEC_",
        case_sensitive=False,
        extra="ignore",
    )

    # Series construction
    min_truncation: int = Field(default=24, description="Lower bound of the default order A")
    tail_warning_ratio: float = Field(
        default=1e-8, description="Warn when the last-column tail exceeds this share of the total"
    )

    # Solution evaluation
    pole_guard: float = Field(default=1e-12, description="Radius around series poles n ± 2λ")
    lambda_floor: float = Field(default=1e-10, description="Smallest |λ| for scattering data")
    basis_wronskian_floor: float = Field(
        default=1e-12, description="Smallest basis Wronskian accepted by extend_solution"
    )
    near_pole_wronskian: float = Field(
        default=1e-10, description="Smallest |W[f1+, f2+]| accepted by the resolvent"
    )

    # Root finding
    root_strip: float = Field(default=1e-3, description="Excluded strip Im λ < ε0")
    root_tolerance: float = Field(default=1e-10, description="Target |C12| at refined zeros")
    contour_zero_guard: float = Field(
        default=1e-13, description="Boundary samples below this |C12| abort the cell"
    )
    newton_max_iterations: int = Field(default=50, description="Newton iteration cap")
    simple_zero_floor: float = Field(
        default=1e-8, description="Smallest |dC12/dλ| for a zero to count as simple"
    )
    min_cell_size: float = Field(
        default=1e-9, description="Cells smaller than this stop bisecting and must refine"
    )

    # Quadrature and limits
    quadrature_epsabs: float = Field(default=1e-9, description="Absolute quadrature tolerance")
    quadrature_limit: int = Field(
        default=2000, description="Subinterval cap of the adaptive quadrature on one panel"
    )
    decay_threshold: float = Field(
        default=1e-10, description="Integrand decay e^{-Im ζ X min(1, β)} at the cut-off X"
    )
    residue_deltas: list[float] = Field(
        default=[1e-2, 5e-3, 2.5e-3], description="Offsets δ along λ = n/2 + iδ"
    )
    asymptote_heights: list[float] = Field(
        default=[50.0, 100.0, 200.0], description="Heights t of the C12(it) samples"
    )

    # Inverse problem
    refine_beta: bool = Field(
        default=True, description="Refine β by least squares against C12 samples"
    )
    beta_near_one: float = Field(default=1e-6, description="Warn when |β - 1| is below this")

    # Validation suites
    validate_instances: int = Field(default=8, description="Random instances per validate suite")
    log_level: str = Field(default="WARNING", description="Root logging level for the CLI")


# Global settings instance
settings = Settings()
