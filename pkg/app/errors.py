"""Exception hierarchy for the spectral engine."""


class SpectralError(Exception):
    """Base class for numerical failures of the engine."""


class PoleAtLambda(SpectralError):
    """λ sits on a pole n ± 2λ = 0 (or n ∓ 2λβ = 0) of the solution series."""

    def __init__(self, n: int, lam: complex):
        self.n = n
        self.lam = lam
        super().__init__(f"series pole at n={n} for lambda={lam}")


class DegenerateBasis(SpectralError):
    """The two basis solutions are numerically dependent (|λ| too small)."""


class ContourThroughZero(SpectralError):
    """A contour sample landed on a zero of C12."""


class NonConvergence(SpectralError):
    """An iterative refinement exhausted its iteration budget."""


class NearPole(SpectralError):
    """The resolvent denominator W[f1+, f2+] vanishes at the requested λ."""


class NonRealAsymptote(SpectralError):
    """The C12 limit along the imaginary axis has a non-negligible imaginary part."""


class NonPositiveBeta(SpectralError):
    """The recovered speed-jump parameter is not positive."""


class DocumentError(ValueError):
    """An input document is malformed."""
