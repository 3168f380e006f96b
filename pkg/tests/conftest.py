import numpy as np
import pytest

from app.data.models import MediumProfile, Potential, SolutionContext
from app.engine.series import build_vtable


def make_context(harmonics=(), beta: float = 2.0, order: int | None = None) -> SolutionContext:
    potential = Potential(harmonics=tuple(complex(c) for c in harmonics))
    return SolutionContext(vtable=build_vtable(potential, order), medium=MediumProfile(beta=beta))


def random_potential(rng: np.random.Generator, max_harmonics: int = 8) -> Potential:
    size = int(rng.integers(1, max_harmonics + 1))
    values = rng.uniform(0.0, 1.0, size) * np.exp(1j * rng.uniform(0.0, 2 * np.pi, size))
    return Potential(harmonics=tuple(complex(c) for c in values))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def hand_potential() -> Potential:
    """q(x) = e^{ix}."""
    return Potential(harmonics=(1,))


@pytest.fixture
def hand_context() -> SolutionContext:
    """q(x) = e^{ix}, β = 2, A = 3."""
    return make_context((1,), beta=2.0, order=3)


@pytest.fixture
def reference_context() -> SolutionContext:
    """q(x) = e^{ix}, β = 2, default truncation."""
    return make_context((1,), beta=2.0)


@pytest.fixture
def free_context() -> SolutionContext:
    """Zero potential, β = 2."""
    return make_context((), beta=2.0)
